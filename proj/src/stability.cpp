#include "filippov_lab/stability.hpp"

#include <cmath>
#include <vector>

namespace flab {

const char* to_string(StabilityType t) {
    switch (t) {
        case StabilityType::Saddle: return "saddle";
        case StabilityType::Node: return "node";
        case StabilityType::Focus: return "focus";
        case StabilityType::Center: return "center";
        case StabilityType::NonHyperbolic: return "nonhyperbolic";
    }
    return "?";
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::None: return "none";
        case Direction::Attracting: return "attracting";
        case Direction::Repelling: return "repelling";
    }
    return "?";
}

const char* to_string(GeometricType g) {
    return g == GeometricType::Saddle ? "saddle_type" : "node_focus_center_type";
}

const char* to_string(RegVerdict v) {
    switch (v) {
        case RegVerdict::Attracting: return "attracting";
        case RegVerdict::Repelling: return "repelling";
        case RegVerdict::DependsOnRegularization: return "depends_on_regularization";
    }
    return "?";
}

Mat2 tangent_jacobian(const QuadCorners& q, double psi, double phi) {
    const auto& X = q.xt;
    Vec2 dpsi, dphi;
    for (int c = 0; c < 2; ++c) {
        dpsi[c] = ((X[0][c] - X[1][c]) * (1 + phi) + (X[3][c] - X[2][c]) * (1 - phi)) / 4;
        dphi[c] = ((X[0][c] - X[3][c]) * (1 + psi) + (X[1][c] - X[2][c]) * (1 - psi)) / 4;
    }
    return Mat2::from_cols(dpsi, dphi);
}

Mat2 fast_jacobian(const Mat2& d, double dpsi, double dphi) {
    if (!(dpsi > 0 && dphi > 0))
        throw Error(ErrorCode::InvalidArgument, "regularization derivatives must be positive");
    Mat2 J = d;
    J.m[0][0] *= dpsi;
    J.m[1][0] *= dpsi;
    J.m[0][1] *= dphi;
    J.m[1][1] *= dphi;
    return J;
}

StabilityKind classify_stability(const Mat2& J) {
    const double det = J.det(), tr = J.trace();
    if (det < -tol::deg) return {StabilityType::Saddle, Direction::None};
    if (det <= tol::deg) return {StabilityType::NonHyperbolic, Direction::None};
    if (std::abs(tr) <= tol::deg) return {StabilityType::Center, Direction::None};
    const Direction dir = tr < 0 ? Direction::Attracting : Direction::Repelling;
    const double disc = tr * tr - 4 * det;
    return {disc < -tol::deg ? StabilityType::Focus : StabilityType::Node, dir};
}

namespace {

struct PolyVertex {
    Vec2 p;
    bool on_fold;
};

// Sutherland-Hodgman clip of the parameter square against sign * g >= 0.
std::vector<PolyVertex> clip_square(const BilinearMap2& F, double sign) {
    static const Vec2 sq[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    std::vector<PolyVertex> out;
    for (int k = 0; k < 4; ++k) {
        const Vec2 P = sq[k], Q = sq[next4(k)];
        const double gp = sign * F.fold_value(P[0], P[1]);
        const double gq = sign * F.fold_value(Q[0], Q[1]);
        if (gp >= 0) out.push_back({P, false});
        if (gp * gq < 0) {
            const double t = gp / (gp - gq);
            out.push_back({{P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])}, true});
        }
    }
    return out;
}

int winding_number(const std::vector<Vec2>& poly) {
    int w = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        const double side = det2(sub(b, a), {-a[0], -a[1]});
        if (a[1] <= 0) {
            if (b[1] > 0 && side > 0) ++w;
        } else if (b[1] <= 0 && side < 0) {
            --w;
        }
    }
    return w;
}

// Image under F~ of the clipped piece boundary. Pieces of square edges map to segments;
// the fold chord maps to a parabola arc and is sampled.
std::vector<Vec2> piece_image(const BilinearMap2& F, const std::vector<PolyVertex>& poly) {
    constexpr int kArc = 512;
    std::vector<Vec2> img;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& P = poly[i];
        const auto& Q = poly[(i + 1) % poly.size()];
        const int m = P.on_fold && Q.on_fold ? kArc : 1;
        for (int s = 0; s < m; ++s) {
            const double u = static_cast<double>(s) / m;
            img.push_back(F(P.p[0] + u * (Q.p[0] - P.p[0]), P.p[1] + u * (Q.p[1] - P.p[1])));
        }
    }
    return img;
}

}  // namespace

GeometricType type_from_geometry(const QuadCorners& q, const OriginLocation& loc) {
    if (loc.variant != LocationVariant::Unique)
        throw Error(ErrorCode::PreconditionFailed, "type_from_geometry requires a unique sliding region");
    static const Vec2 sq[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    const auto F = bilinear_coeffs(q);
    int pieces = 0, sign = 0;
    bool conflict = false;
    for (double s : {1.0, -1.0}) {
        const auto poly = clip_square(F, s);
        if (poly.size() < 3) continue;
        if (winding_number(piece_image(F, poly)) == 0) continue;
        ++pieces;
        for (int k = 0; k < 4; ++k) {
            const Vec2 P = sq[k], Q = sq[next4(k)];
            if (s * F.fold_value(P[0], P[1]) <= 0 || s * F.fold_value(Q[0], Q[1]) <= 0) continue;
            const double d = det2(q.xt[k], q.xt[next4(k)]);
            const int sg = d > 0 ? 1 : d < 0 ? -1 : 0;
            if (sg == 0 || (sign != 0 && sg != sign)) conflict = true;
            sign = sg;
        }
    }
    if (pieces != 1 || sign == 0 || conflict)
        throw Error(ErrorCode::NoQualifyingEdge, "no consistent bounding edge for the containing subregion");
    return sign < 0 ? GeometricType::Saddle : GeometricType::NodeFocusCenter;
}

Vec2 trace_coefficients(const QuadCorners& q, const SlidingSolution& sol) {
    const auto& X = q.xt;
    const double sf = sol.sigma_phi, sp = sol.sigma_psi;
    const double s1 = (X[0][0] - X[1][0]) * sf + (X[3][0] - X[2][0]) * (1 - sf);
    const double s2 = (X[0][1] - X[3][1]) * sp + (X[1][1] - X[2][1]) * (1 - sp);
    return {s1, s2};
}

RegVerdict reg_independent_stability(const QuadCorners& q, const SlidingSolution& sol) {
    if (tangent_jacobian(q, sol.psi_star, sol.phi_star).det() <= tol::deg)
        throw Error(ErrorCode::PreconditionFailed, "regularization-independent test needs node/focus/center type");
    const Vec2 s = trace_coefficients(q, sol);
    if (s[0] > tol::deg && s[1] > tol::deg) return RegVerdict::Repelling;
    if (s[0] < -tol::deg && s[1] < -tol::deg) return RegVerdict::Attracting;
    return RegVerdict::DependsOnRegularization;
}

StabilityReport stability_report(const QuadCorners& q, const SlidingSolution& sol,
                                 const RegFunction& reg_y, const RegFunction& reg_z) {
    StabilityReport r;
    r.d_ftilde = tangent_jacobian(q, sol.psi_star, sol.phi_star);
    r.p_diag = {reg_y.derivative(reg_y.inverse(sol.psi_star)), reg_z.derivative(reg_z.inverse(sol.phi_star))};
    r.jacobian = fast_jacobian(r.d_ftilde, r.p_diag[0], r.p_diag[1]);
    r.det_j = r.jacobian.det();
    r.trace_j = r.jacobian.trace();

    const Vec2 s = trace_coefficients(q, sol);
    const double tr_sigma = r.p_diag[0] / 2 * s[0] + r.p_diag[1] / 2 * s[1];
    if (std::abs(tr_sigma - r.trace_j) > 1e-8)
        throw Error(ErrorCode::InternalError, "trace formulas disagree");

    r.kind = classify_stability(r.jacobian);
    const double dd = r.d_ftilde.det();
    r.type = dd < 0 ? GeometricType::Saddle : GeometricType::NodeFocusCenter;
    r.outside_hyperbolic = r.kind.type == StabilityType::Center || r.kind.type == StabilityType::NonHyperbolic;
    if (r.kind.type == StabilityType::Saddle) {
        r.reg_independent = true;
    } else if (dd > tol::deg) {
        r.verdict = reg_independent_stability(q, sol);
        r.reg_independent = r.verdict != RegVerdict::DependsOnRegularization;
    }
    return r;
}

}  // namespace flab
