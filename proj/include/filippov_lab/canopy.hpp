#pragma once

#include "filippov_lab/common.hpp"
#include "filippov_lab/pws_model.hpp"

namespace flab {

// F~(psi, phi) = a0 + a1 psi + a2 phi + a3 psi phi on [-1,1]^2.
struct BilinearMap2 {
    Vec2 a0{}, a1{}, a2{}, a3{};

    Vec2 operator()(double psi, double phi) const {
        return {a0[0] + a1[0] * psi + a2[0] * phi + a3[0] * psi * phi,
                a0[1] + a1[1] * psi + a2[1] * phi + a3[1] * psi * phi};
    }
    // Columns d/dpsi, d/dphi.
    Mat2 jacobian(double psi, double phi) const {
        return Mat2::from_cols({a1[0] + a3[0] * phi, a1[1] + a3[1] * phi},
                               {a2[0] + a3[0] * psi, a2[1] + a3[1] * psi});
    }
    // det DF~ is affine in (psi, phi): g0 + g_psi psi + g_phi phi.
    double fold_value(double psi, double phi) const {
        return det2(a1, a2) + phi * det2(a3, a2) + psi * det2(a1, a3);
    }
};

enum class QuadClass { Convex, Crossed, Concave, Degenerate };
enum class ChiRole { Edge, Diagonal };

struct QuadShape {
    std::array<Vec2, 4> chi{};
    std::array<double, 4> delta{};
    QuadClass cls = QuadClass::Degenerate;
    ChiRole chi1_role = ChiRole::Edge;  // meaningful for Crossed
    int odd_delta = 0;                  // 1-based index of the differing delta (Concave)
    int tip = 0;                        // 1-based reflex corner (Concave)
};

struct CanopyInvariants {
    double A = 0, B = 0, Gamma = 0, Delta = 0;
};

enum class LocationVariant { NoSliding, Unique, Double };
enum class Region { None, ConvexInterior, CrossedHomeo, ConcaveCrossedSub, ConcaveConvexSub, OnParabolicLine };

struct OriginLocation {
    LocationVariant variant = LocationVariant::NoSliding;
    Region region = Region::None;
    QuadShape shape;
    CanopyInvariants inv;
    // Crossed/concave double-sliding conditions evaluated as stated; diagnostics only.
    int kappa = 0;  // 1 or 2 for crossed shapes, 0 when not applicable or tied
    bool cond1 = false, cond2 = false;

    int count() const {
        return variant == LocationVariant::Double ? 2 : variant == LocationVariant::Unique ? 1 : 0;
    }
};

// det(X~_i, X~_j) with 1-based cyclic indices.
double corner_det(const QuadCorners& q, int i, int j);

Vec3 f_x(const QuadCorners& q, double psi, double phi);
Vec2 f_tilde(const QuadCorners& q, double psi, double phi);
BilinearMap2 bilinear_coeffs(const QuadCorners& q);
QuadShape quad_shape(const QuadCorners& q);
CanopyInvariants canopy_invariants(const QuadCorners& q);

// Both roots of the sigma_phi quadratic and both of the sigma_psi quadratic lie in (0,1),
// with Delta > 0: the origin is covered twice by F~.
bool double_cover(const QuadCorners& q);

OriginLocation origin_location(const QuadCorners& q);

const char* to_string(QuadClass c);
const char* to_string(LocationVariant v);
const char* to_string(Region r);

}  // namespace flab
