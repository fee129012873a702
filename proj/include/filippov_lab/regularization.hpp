#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "filippov_lab/common.hpp"
#include "filippov_lab/pws_model.hpp"

namespace flab {

enum class RegFamily { Tanh, Arctan, SotomayorTeixeira };

class RegFunction {
public:
    constexpr explicit RegFunction(RegFamily f = RegFamily::Tanh) : family_(f) {}

    RegFamily family() const { return family_; }
    std::string_view name() const;

    double value(double s) const;
    double derivative(double s) const;
    // p in (-1, 1)
    double inverse(double p) const;

    double phi_plus(double r) const;   // r >= 0
    double phi_minus(double r) const;  // r <= 0

    static std::optional<RegFunction> parse(std::string_view name);
    bool operator==(const RegFunction&) const = default;

private:
    RegFamily family_;
};

inline constexpr RegFunction kTanh{RegFamily::Tanh};
inline constexpr RegFunction kArctan{RegFamily::Arctan};
inline constexpr RegFunction kSotomayorTeixeira{RegFamily::SotomayorTeixeira};

Vec3 regularized_field(const PwsSystem& sys, const RegFunction& reg_y, const RegFunction& reg_z,
                       double eps, const Vec3& p);

}  // namespace flab
