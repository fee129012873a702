#include <catch_amalgamated.hpp>

#include <limits>
#include <random>

#include "filippov_lab/canopy.hpp"
#include "filippov_lab/regularization.hpp"

using namespace flab;
using Catch::Matchers::WithinAbs;

namespace {

const std::array<RegFunction, 3> kRegs{kTanh, kArctan, kSotomayorTeixeira};

PwsSystem s_sym() {
    return constant_system("s", {Vec2{-1, -1}, Vec2{1, -1}, Vec2{1, 1}, Vec2{-1, 1}}, {1, 2, 3, 4});
}

}  // namespace

TEST_CASE("regularization values") {
    CHECK(kTanh.value(0) == 0);
    CHECK(kTanh.derivative(0) == 1);
    CHECK(kTanh.inverse(0) == 0);
    CHECK_THAT(kArctan.value(1), WithinAbs(0.5, 1e-16));
    CHECK(kSotomayorTeixeira.value(1) == 1);
    CHECK(kSotomayorTeixeira.derivative(1) == 0);
    CHECK(kSotomayorTeixeira.value(3) == 1);
    CHECK(kSotomayorTeixeira.value(-3) == -1);
    CHECK(kSotomayorTeixeira.derivative(-2) == 0);
    CHECK_THAT(kSotomayorTeixeira.value(0.5), WithinAbs(0.5 * (3 - 0.25) / 2, 1e-16));
    CHECK_THAT(kSotomayorTeixeira.inverse(0.5), WithinAbs(2 * std::cos(4 * M_PI / 9), 1e-12));
}

TEST_CASE("names round trip through parse") {
    for (const auto& r : kRegs) CHECK(*RegFunction::parse(r.name()) == r);
    CHECK(RegFunction::parse("tanh")->family() == RegFamily::Tanh);
    CHECK(RegFunction::parse("arctan")->family() == RegFamily::Arctan);
    CHECK(RegFunction::parse("st")->family() == RegFamily::SotomayorTeixeira);
    CHECK_FALSE(RegFunction::parse("logistic").has_value());
}

TEST_CASE("monotone with positive derivative matching finite differences", "[property]") {
    for (const auto& r : kRegs) {
        // tanh reaches 1.0 in double precision near s = 19, so its sweep stays shorter
        const double lim = r.family() == RegFamily::SotomayorTeixeira ? 1.0
                           : r.family() == RegFamily::Tanh           ? 8.0
                                                                     : 20.0;
        double prev = -INFINITY;
        for (int k = 0; k <= 4000; ++k) {
            const double s = -lim + 2 * lim * k / 4000.0;
            const double v = r.value(s);
            if (k > 0 && k < 4000) {
                CHECK(v > prev);
                CHECK(v > -1);
                CHECK(v < 1);
                if (std::abs(s) < lim - 1e-3) CHECK(r.derivative(s) > 0);
                const double h = 1e-5;
                const double fd = (r.value(s + h) - r.value(s - h)) / (2 * h);
                if (std::abs(std::abs(s) - 1) > 2 * h || r.family() != RegFamily::SotomayorTeixeira)
                    CHECK_THAT(r.derivative(s), WithinAbs(fd, 1e-7));
            }
            prev = v;
        }
    }
}

TEST_CASE("inverse round trip to 1e-12 scaled by the local conditioning", "[property]") {
    // |inverse(value(s)) - s| is bounded by the rounding of value(s) divided by derivative(s)
    const double eps = std::numeric_limits<double>::epsilon();
    for (const auto& r : kRegs) {
        const double lim = r.family() == RegFamily::SotomayorTeixeira ? 1 - 1e-6
                           : r.family() == RegFamily::Tanh           ? 18.0
                                                                     : 20.0;
        for (int k = 1; k < 2000; ++k) {
            const double s = -lim + 2 * lim * k / 2000.0;
            const double back = r.inverse(r.value(s));
            CHECK(std::abs(back - s) <= 1e-12 + 4 * eps / r.derivative(s));
        }
    }
    // where the function is well conditioned the plain 1e-12 bound holds
    for (const auto& r : kRegs)
        for (int k = -100; k <= 100; ++k) {
            const double s = k / 200.0;
            CHECK_THAT(r.inverse(r.value(s)), WithinAbs(s, 1e-12));
        }
    CHECK_THROWS_AS(kTanh.inverse(1.0), Error);
    CHECK_THROWS_AS(kSotomayorTeixeira.inverse(-1.0), Error);
}

TEST_CASE("one-sided transforms") {
    CHECK(kTanh.phi_plus(0) == 1);
    CHECK(kTanh.phi_minus(0) == -1);
    CHECK_THAT(kTanh.phi_plus(1), WithinAbs(0.7615941559, 1e-10));
    CHECK_THAT(kArctan.phi_minus(-1), WithinAbs(-0.5, 1e-16));
    CHECK_THROWS_AS(kTanh.phi_plus(-0.1), Error);
    CHECK_THROWS_AS(kTanh.phi_minus(0.1), Error);
    for (const auto& r : kRegs) {
        CHECK_THAT(r.phi_plus(1e-6), WithinAbs(1.0, 1e-5));
        CHECK_THAT(r.phi_minus(-1e-6), WithinAbs(-1.0, 1e-5));
    }
}

TEST_CASE("regularized field") {
    const auto sys = s_sym();
    const Vec3 m = regularized_field(sys, kTanh, kTanh, 0.01, {0.2, 0, 0});
    CHECK(m == Vec3{2.5, 0, 0});

    const double eps = 1e-3;
    const Vec3 far = regularized_field(sys, kTanh, kArctan, eps, {0, 1e6 * eps, 1e6 * eps});
    CHECK_THAT(far[0], WithinAbs(1, 1e-6));
    CHECK_THAT(far[1], WithinAbs(-1, 1e-6));
    CHECK_THAT(far[2], WithinAbs(-1, 1e-6));

    CHECK_THROWS_AS(regularized_field(sys, kTanh, kTanh, 0, {0, 0, 0}), Error);

    const auto q = project(sys, 0);
    const Vec3 a = regularized_field(sys, kArctan, kSotomayorTeixeira, eps, {0, eps * 0.3, -eps * 0.7});
    CHECK(a == f_x(q, kArctan.value(0.3), kSotomayorTeixeira.value(-0.7)));
}

TEST_CASE("eps scaling invariance and convex hull", "[property]") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> U(-3, 3), E(-6, -1);
    const auto sys = s_sym();
    for (int k = 0; k < 1000; ++k) {
        const double yh = U(rng), zh = U(rng);
        const double e1 = std::pow(10.0, E(rng)), e2 = std::pow(10.0, E(rng));
        for (const auto& r : kRegs) {
            const Vec3 a = regularized_field(sys, r, kTanh, e1, {0, e1 * yh, e1 * zh});
            const Vec3 b = regularized_field(sys, r, kTanh, e2, {0, e2 * yh, e2 * zh});
            for (int c = 0; c < 3; ++c) CHECK_THAT(a[c], WithinAbs(b[c], 1e-13));
            CHECK(a[0] >= 1 - 1e-14);
            CHECK(a[0] <= 4 + 1e-14);
            CHECK(std::abs(a[1]) <= 1 + 1e-14);
            CHECK(std::abs(a[2]) <= 1 + 1e-14);
        }
    }
}
