#include "filippov_lab/regularization.hpp"

#include <cmath>
#include <numbers>

#include "filippov_lab/canopy.hpp"

namespace flab {

std::string_view RegFunction::name() const {
    switch (family_) {
        case RegFamily::Tanh: return "tanh";
        case RegFamily::Arctan: return "arctan";
        case RegFamily::SotomayorTeixeira: return "st";
    }
    return "?";
}

std::optional<RegFunction> RegFunction::parse(std::string_view n) {
    if (n == "tanh") return kTanh;
    if (n == "arctan") return kArctan;
    if (n == "st") return kSotomayorTeixeira;
    return std::nullopt;
}

double RegFunction::value(double s) const {
    switch (family_) {
        case RegFamily::Tanh: return std::tanh(s);
        case RegFamily::Arctan: return 2.0 / std::numbers::pi * std::atan(s);
        case RegFamily::SotomayorTeixeira:
            if (s >= 1) return 1.0;
            if (s <= -1) return -1.0;
            return s * (3 - s * s) / 2;
    }
    return 0;
}

double RegFunction::derivative(double s) const {
    switch (family_) {
        case RegFamily::Tanh: {
            const double c = std::cosh(s);
            return 1.0 / (c * c);
        }
        case RegFamily::Arctan: return 2.0 / std::numbers::pi / (1 + s * s);
        case RegFamily::SotomayorTeixeira:
            if (std::abs(s) >= 1) return 0.0;
            return 1.5 * (1 - s * s);
    }
    return 0;
}

// Newton on s(3-s^2)/2 = p, bracketed in [-1, 1]; the value is monotone there.
static double cubic_inverse(double p) {
    double lo = -1, hi = 1, s = p;
    for (int it = 0; it < 200; ++it) {
        const double f = s * (3 - s * s) / 2 - p;
        if (f == 0) return s;
        if (f > 0) hi = s; else lo = s;
        const double df = 1.5 * (1 - s * s);
        double next = df > 0 ? s - f / df : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-16 * (1 + std::abs(s)) || hi - lo <= 1e-16) return next;
        s = next;
    }
    return s;
}

double RegFunction::inverse(double p) const {
    if (!(p > -1 && p < 1)) throw Error(ErrorCode::OutOfRange, "inverse requires p in (-1, 1)");
    switch (family_) {
        case RegFamily::Tanh: return std::atanh(p);
        case RegFamily::Arctan: return std::tan(p * std::numbers::pi / 2);
        case RegFamily::SotomayorTeixeira: return cubic_inverse(p);
    }
    return 0;
}

double RegFunction::phi_plus(double r) const {
    if (r < 0) throw Error(ErrorCode::OutOfRange, "phi_plus requires r >= 0");
    return r == 0 ? 1.0 : value(1.0 / r);
}

double RegFunction::phi_minus(double r) const {
    if (r > 0) throw Error(ErrorCode::OutOfRange, "phi_minus requires r <= 0");
    return r == 0 ? -1.0 : value(1.0 / r);
}

Vec3 regularized_field(const PwsSystem& sys, const RegFunction& reg_y, const RegFunction& reg_z,
                       double eps, const Vec3& p) {
    if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    return f_x(project(sys, p[0]), reg_y.value(p[1] / eps), reg_z.value(p[2] / eps));
}

}  // namespace flab
