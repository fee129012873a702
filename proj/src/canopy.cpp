#include "filippov_lab/canopy.hpp"

#include <cmath>

namespace flab {

const char* to_string(QuadClass c) {
    switch (c) {
        case QuadClass::Convex: return "convex";
        case QuadClass::Crossed: return "crossed";
        case QuadClass::Concave: return "concave";
        case QuadClass::Degenerate: return "degenerate";
    }
    return "?";
}

const char* to_string(LocationVariant v) {
    switch (v) {
        case LocationVariant::NoSliding: return "no_sliding";
        case LocationVariant::Unique: return "unique";
        case LocationVariant::Double: return "double";
    }
    return "?";
}

const char* to_string(Region r) {
    switch (r) {
        case Region::None: return "none";
        case Region::ConvexInterior: return "convex_interior";
        case Region::CrossedHomeo: return "crossed_homeo";
        case Region::ConcaveCrossedSub: return "concave_crossed_sub";
        case Region::ConcaveConvexSub: return "concave_convex_sub";
        case Region::OnParabolicLine: return "on_parabolic_line";
    }
    return "?";
}

static int wrap(int i) { return ((i - 1) % 4 + 4) % 4; }

double corner_det(const QuadCorners& q, int i, int j) { return det2(q.xt[wrap(i)], q.xt[wrap(j)]); }

Vec3 f_x(const QuadCorners& q, double psi, double phi) {
    // weights of X1..X4 at the corners (1,1), (-1,1), (-1,-1), (1,-1)
    const double w[4] = {(1 + psi) * (1 + phi) / 4, (1 - psi) * (1 + phi) / 4,
                         (1 - psi) * (1 - phi) / 4, (1 + psi) * (1 - phi) / 4};
    Vec3 r{0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        r[0] += w[i] * q.alpha[i];
        r[1] += w[i] * q.xt[i][0];
        r[2] += w[i] * q.xt[i][1];
    }
    return r;
}

BilinearMap2 bilinear_coeffs(const QuadCorners& q) {
    const auto& X = q.xt;
    BilinearMap2 b;
    for (int c = 0; c < 2; ++c) {
        b.a0[c] = (X[0][c] + X[1][c] + X[2][c] + X[3][c]) / 4;
        b.a1[c] = (X[0][c] - X[1][c] - X[2][c] + X[3][c]) / 4;
        b.a2[c] = (X[0][c] + X[1][c] - X[2][c] - X[3][c]) / 4;
        b.a3[c] = (X[0][c] - X[1][c] + X[2][c] - X[3][c]) / 4;
    }
    return b;
}

Vec2 f_tilde(const QuadCorners& q, double psi, double phi) { return bilinear_coeffs(q)(psi, phi); }

static double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return det2(sub(b, a), sub(c, a)); }

static bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& p3, const Vec2& p4) {
    return orient(p1, p2, p3) * orient(p1, p2, p4) < 0 && orient(p3, p4, p1) * orient(p3, p4, p2) < 0;
}

QuadShape quad_shape(const QuadCorners& q) {
    QuadShape s;
    for (int i = 0; i < 4; ++i) s.chi[i] = sub(q.xt[next4(i)], q.xt[i]);
    int pos = 0;
    bool degenerate = false;
    for (int i = 0; i < 4; ++i) {
        s.delta[i] = det2(s.chi[i], s.chi[next4(i)]);
        if (std::abs(s.delta[i]) <= tol::deg) degenerate = true;
        if (s.delta[i] > 0) ++pos;
    }
    if (degenerate) {
        s.cls = QuadClass::Degenerate;
    } else if (pos == 0 || pos == 4) {
        s.cls = QuadClass::Convex;
    } else if (pos == 2) {
        s.cls = QuadClass::Crossed;
        s.chi1_role = segments_cross(q.xt[0], q.xt[1], q.xt[2], q.xt[3]) ? ChiRole::Diagonal : ChiRole::Edge;
    } else {
        s.cls = QuadClass::Concave;
        const bool odd_positive = pos == 1;
        for (int i = 0; i < 4; ++i)
            if ((s.delta[i] > 0) == odd_positive) s.odd_delta = i + 1;
        // delta_i is the turn at corner i+1
        s.tip = s.odd_delta % 4 + 1;
    }
    return s;
}

CanopyInvariants canopy_invariants(const QuadCorners& q) {
    CanopyInvariants c;
    c.A = corner_det(q, 1, 2);
    c.B = corner_det(q, 4, 2) + corner_det(q, 1, 3);
    c.Gamma = corner_det(q, 4, 3);
    c.Delta = c.B * c.B - 4 * c.A * c.Gamma;
    return c;
}

// Roots of a s^2 + b s + g with a = A+G-B, b = B-2G, p(1) = A: two roots in (0,1).
static bool both_roots_inside(double A, double B, double G) {
    const double a = A + G - B, b = B - 2 * G;
    return a * G > 0 && a * A > 0 && b * (2 * A - B) < 0;
}

bool double_cover(const QuadCorners& q) {
    const auto inv = canopy_invariants(q);
    if (!(inv.Delta > 0)) return false;
    // the sigma_psi quadratic comes from relabeling the corners as (X1, X4, X3, X2)
    const double Ap = corner_det(q, 1, 4);
    const double Bp = corner_det(q, 2, 4) + corner_det(q, 1, 3);
    const double Gp = corner_det(q, 2, 3);
    return both_roots_inside(inv.A, inv.B, inv.Gamma) && both_roots_inside(Ap, Bp, Gp);
}

static bool on_parabolic_line(const QuadCorners& q, const CanopyInvariants& inv) {
    if (std::abs(inv.Delta) > tol::deg) return false;
    const double a = inv.A + inv.Gamma - inv.B;
    if (std::abs(a) <= tol::deg) return false;
    const double sphi = -(inv.B - 2 * inv.Gamma) / (2 * a);
    if (!(sphi > tol::bnd && sphi < 1 - tol::bnd)) return false;
    const auto& X = q.xt;
    for (int c = 0; c < 2; ++c) {
        const double den = (X[1][c] - X[0][c]) * sphi + (X[2][c] - X[3][c]) * (1 - sphi);
        if (std::abs(den) <= tol::deg) continue;
        const double spsi = (X[1][c] * sphi + X[2][c] * (1 - sphi)) / den;
        return spsi > tol::bnd && spsi < 1 - tol::bnd;
    }
    return false;
}

OriginLocation origin_location(const QuadCorners& q) {
    OriginLocation loc;
    loc.shape = quad_shape(q);
    loc.inv = canopy_invariants(q);
    if (loc.shape.cls == QuadClass::Degenerate)
        throw Error(ErrorCode::DegenerateQuadrilateral, "projected quadrilateral is degenerate");

    auto D = [&](int i, int j) { return corner_det(q, i, j); };
    const double Delta = loc.inv.Delta;

    // Unique-sliding conditions of the class, with the double-sliding flags kept as diagnostics.
    bool unique = false;
    Region region = Region::None;
    switch (loc.shape.cls) {
        case QuadClass::Convex:
            unique = D(1, 2) * D(3, 4) > 0 && D(2, 3) * D(4, 1) > 0;
            region = Region::ConvexInterior;
            break;
        case QuadClass::Crossed: {
            const double n13 = norm(sub(q.xt[0], q.xt[2]));
            const double n24 = norm(sub(q.xt[3], q.xt[1]));
            loc.kappa = std::abs(n13 - n24) <= tol::deg ? 0 : (n13 > n24 ? 1 : 2);
            const int k = loc.kappa == 0 ? 1 : loc.kappa;
            if (loc.shape.chi1_role == ChiRole::Edge) {
                loc.cond1 = D(k, k + 2) * D(2, 3) < 0;
                loc.cond2 = D(k, k + 2) * D(4, 1) > 0;
                unique = D(1, 2) * D(3, 4) < 0 && D(2, 3) * D(4, 1) > 0;
            } else {
                auto p = [](int i) { return i == 2 ? 4 : i == 4 ? 2 : i; };
                loc.cond1 = D(p(k), p(k + 2)) * D(4, 3) < 0;
                loc.cond2 = D(p(k), p(k + 2)) * D(2, 1) > 0;
                unique = D(1, 2) * D(3, 4) > 0 && D(2, 3) * D(4, 1) < 0;
            }
            region = Region::CrossedHomeo;
            break;
        }
        case QuadClass::Concave: {
            const int sh = loc.shape.odd_delta - 1;
            auto Dm = [&](int i, int j) { return D(i + sh, j + sh); };
            loc.cond1 = Dm(1, 2) * Dm(1, 3) < 0;
            loc.cond2 = Dm(2, 3) * Dm(1, 3) < 0;
            if (Dm(1, 2) * Dm(2, 3) < 0 && Dm(3, 4) * Dm(4, 1) > 0) {
                unique = true;
                region = Region::ConcaveCrossedSub;
            } else if (Dm(2, 3) * Dm(3, 4) > 0 && Dm(4, 1) * Dm(1, 2) > 0) {
                unique = true;
                region = Region::ConcaveConvexSub;
            }
            break;
        }
        case QuadClass::Degenerate: break;
    }

    if (on_parabolic_line(q, loc.inv)) {
        loc.variant = LocationVariant::Unique;
        loc.region = Region::OnParabolicLine;
    } else if (Delta > 0 && double_cover(q)) {
        loc.variant = LocationVariant::Double;
    } else if (unique) {
        loc.variant = LocationVariant::Unique;
        loc.region = region;
    }
    return loc;
}

}  // namespace flab
