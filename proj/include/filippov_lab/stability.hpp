#pragma once

#include "filippov_lab/canopy.hpp"
#include "filippov_lab/regularization.hpp"
#include "filippov_lab/sliding_solver.hpp"

namespace flab {

enum class StabilityType { Saddle, Node, Focus, Center, NonHyperbolic };
enum class Direction { None, Attracting, Repelling };

struct StabilityKind {
    StabilityType type = StabilityType::NonHyperbolic;
    Direction dir = Direction::None;
    bool operator==(const StabilityKind&) const = default;
};

enum class GeometricType { Saddle, NodeFocusCenter };
enum class RegVerdict { Attracting, Repelling, DependsOnRegularization };

struct StabilityReport {
    Mat2 d_ftilde;
    Vec2 p_diag{};
    Mat2 jacobian;
    double det_j = 0, trace_j = 0;
    StabilityKind kind;
    GeometricType type = GeometricType::Saddle;  // from sign(det DF~)
    RegVerdict verdict = RegVerdict::DependsOnRegularization;  // node/focus/center only
    bool reg_independent = false;
    bool outside_hyperbolic = false;  // Center or NonHyperbolic
};

Mat2 tangent_jacobian(const QuadCorners& q, double psi, double phi);
Mat2 fast_jacobian(const Mat2& d_ftilde, double dpsi, double dphi);
StabilityKind classify_stability(const Mat2& J);

// Saddle vs node/focus/center read off det(X~_k X~_k+1) for a square edge k whose corners
// both lie in the fold-line piece whose image contains the origin.
GeometricType type_from_geometry(const QuadCorners& q, const OriginLocation& loc);

// (s1, s2) of the sigma-form trace: tr J = psi'/2 s1 + phi'/2 s2.
Vec2 trace_coefficients(const QuadCorners& q, const SlidingSolution& sol);
RegVerdict reg_independent_stability(const QuadCorners& q, const SlidingSolution& sol);

StabilityReport stability_report(const QuadCorners& q, const SlidingSolution& sol,
                                 const RegFunction& reg_y, const RegFunction& reg_z);

const char* to_string(StabilityType t);
const char* to_string(Direction d);
const char* to_string(GeometricType g);
const char* to_string(RegVerdict v);

}  // namespace flab
