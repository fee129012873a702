#pragma once

#include <array>
#include <string>
#include <vector>

#include "filippov_lab/common.hpp"

namespace flab {

// Coefficients in ascending powers of x. The zero polynomial is {0}.
class Polynomial {
public:
    Polynomial() : c_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);

    double operator()(double x) const;
    const std::vector<double>& coeffs() const { return c_; }
    bool operator==(const Polynomial&) const = default;

private:
    std::vector<double> c_;
};

struct FieldTriple {
    Polynomial alpha, beta, gamma;
    bool operator==(const FieldTriple&) const = default;
};

struct PwsSystem {
    std::string name;
    std::array<FieldTriple, 4> fields;
    double x_min = 0.0;
    double x_max = 0.0;

    PwsSystem() = default;
    PwsSystem(std::string name, std::array<FieldTriple, 4> fields, double x_min, double x_max);

    bool in_domain(double x) const { return x >= x_min && x <= x_max; }
    bool operator==(const PwsSystem&) const = default;
};

// Projected corners at a point of the codim-2 line. Index 0..3 stands for X1..X4.
struct QuadCorners {
    double x = 0.0;
    std::array<double, 4> alpha{};
    std::array<Vec2, 4> xt{};

    static QuadCorners constant(const std::array<Vec2, 4>& xt, std::array<double, 4> alpha = {1, 1, 1, 1});
};

struct FieldValue {
    double alpha, beta, gamma;
    bool outside_domain;
};

// i is 1-based (1..4) at this API boundary.
FieldValue eval_field(const PwsSystem& sys, int i, double x);

enum class Plane { Pi_f, Pi_g, Lambda };

struct QuadrantResult {
    bool interior;
    int quadrant;  // 1..4 when interior
    Plane plane;   // valid when !interior
};

QuadrantResult select_quadrant(double y, double z);

enum class Codim1Kind { Crossing, Sliding, Fold };

Codim1Kind classify_codim1(const PwsSystem& sys, int i, double x);

struct Codim1Sliding {
    double sigma;
    Vec3 vector;
    bool stable;
};

Codim1Sliding filippov_codim1(const PwsSystem& sys, int i, double x);

QuadCorners project(const PwsSystem& sys, double x);

// Builds a system whose four fields are constant.
PwsSystem constant_system(const std::string& name, const std::array<Vec2, 4>& xt,
                          std::array<double, 4> alpha = {1, 1, 1, 1}, double x_min = -1.0,
                          double x_max = 1.0);

const char* to_string(Codim1Kind k);

}  // namespace flab
