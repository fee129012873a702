#include "filippov_lab/sliding_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "filippov_lab/parallel.hpp"

namespace flab {

const char* to_string(Branch b) {
    switch (b) {
        case Branch::Plus: return "plus";
        case Branch::Minus: return "minus";
        case Branch::Single: return "single";
    }
    return "?";
}

const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::OutsideSquare: return "outside_square";
        case RejectReason::BoundaryGrazing: return "boundary_grazing";
        case RejectReason::SigmaPsiDenominatorZero: return "sigma_psi_denominator_zero";
    }
    return "?";
}

std::array<double, 4> nu_coefficients(double sp, double sf) {
    if (!(sp > 0 && sp < 1 && sf > 0 && sf < 1))
        throw Error(ErrorCode::OutOfRange, "sigma values must lie in (0, 1)");
    return {sp * sf, (1 - sp) * sf, (1 - sp) * (1 - sf), sp * (1 - sf)};
}

double sliding_speed(const QuadCorners& q, const std::array<double, 4>& nu) {
    return nu[0] * q.alpha[0] + nu[1] * q.alpha[1] + nu[2] * q.alpha[2] + nu[3] * q.alpha[3];
}

// sigma_psi from the beta pairing, or the gamma pairing when the beta denominator vanishes.
static double sigma_psi_from(const QuadCorners& q, double sf) {
    const auto& X = q.xt;
    for (int c = 0; c < 2; ++c) {
        const double den = (X[1][c] - X[0][c]) * sf + (X[2][c] - X[3][c]) * (1 - sf);
        if (std::abs(den) > tol::deg) return (X[1][c] * sf + X[2][c] * (1 - sf)) / den;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

SolveResult solve_sigmas(const QuadCorners& q) {
    const auto inv = canopy_invariants(q);
    const double a = inv.A + inv.Gamma - inv.B;
    const double b = inv.B - 2 * inv.Gamma;
    const double c = inv.Gamma;

    struct Cand {
        double sf;
        Branch br;
        bool parabolic;
    };
    std::vector<Cand> cands;
    if (std::abs(a) <= tol::deg) {
        if (std::abs(b) <= tol::deg)
            throw Error(ErrorCode::DegenerateBoth, "A+Gamma-B and 2Gamma-B both vanish");
        cands.push_back({-c / b, Branch::Single, false});
    } else if (std::abs(inv.Delta) <= tol::deg) {
        cands.push_back({-b / (2 * a), Branch::Single, true});
    } else if (inv.Delta > 0) {
        const double sq = std::sqrt(inv.Delta);
        const double qq = -0.5 * (b + std::copysign(sq, b));
        const double r1 = qq / a;  // -(b + sign(b) sq) / 2a
        const double r2 = c / qq;
        // sigma_phi(+) = (-b + sq) / 2a
        if (b >= 0) {
            cands.push_back({r2, Branch::Plus, false});
            cands.push_back({r1, Branch::Minus, false});
        } else {
            cands.push_back({r1, Branch::Plus, false});
            cands.push_back({r2, Branch::Minus, false});
        }
    }

    SolveResult out;
    auto inside = [](double s) { return s > tol::bnd && s < 1 - tol::bnd; };
    auto near = [](double s) { return s >= -tol::bnd && s <= 1 + tol::bnd; };
    for (const auto& cd : cands) {
        const double sp = sigma_psi_from(q, cd.sf);
        if (std::isnan(sp)) {
            out.rejected.push_back({sp, cd.sf, cd.br, RejectReason::SigmaPsiDenominatorZero});
            continue;
        }
        if (!(inside(sp) && inside(cd.sf))) {
            const auto why = near(sp) && near(cd.sf) ? RejectReason::BoundaryGrazing : RejectReason::OutsideSquare;
            out.rejected.push_back({sp, cd.sf, cd.br, why});
            continue;
        }
        SlidingSolution s;
        s.sigma_psi = sp;
        s.sigma_phi = cd.sf;
        s.psi_star = 2 * sp - 1;
        s.phi_star = 2 * cd.sf - 1;
        s.nu = nu_coefficients(sp, cd.sf);
        s.speed = sliding_speed(q, s.nu);
        s.branch = cd.br;
        s.on_parabolic_line = cd.parabolic;
        out.solutions.push_back(s);
    }
    return out;
}

CriticalPoint critical_manifold_point(const SlidingSolution& sol, const RegFunction& reg_y,
                                      const RegFunction& reg_z, double x) {
    return {x, reg_y.inverse(sol.psi_star), reg_z.inverse(sol.phi_star)};
}

namespace {

struct Cell {
    int i, j;
};

// Cells of row i (psi index) in which both components take both signs at the corners.
void scan_row(const BilinearMap2& F, int n, int i, std::vector<Cell>& out) {
    const double h = 2.0 / (n - 1);
    const double p0 = -1 + i * h, p1 = -1 + (i + 1) * h;
    Vec2 a = F(p0, -1), b = F(p1, -1);
    for (int j = 0; j + 1 < n; ++j) {
        const double f1 = -1 + (j + 1) * h;
        const Vec2 c = F(p0, f1), d = F(p1, f1);
        bool hit = true;
        for (int k = 0; k < 2 && hit; ++k) {
            const double lo = std::min({a[k], b[k], c[k], d[k]});
            const double hi = std::max({a[k], b[k], c[k], d[k]});
            hit = lo <= 0 && hi >= 0;
        }
        if (hit) out.push_back({i, j});
        a = c;
        b = d;
    }
}

bool newton(const BilinearMap2& F, Vec2& z) {
    for (int it = 0; it < 60; ++it) {
        const Vec2 r = F(z[0], z[1]);
        if (std::max(std::abs(r[0]), std::abs(r[1])) <= 1e-13) return true;
        const Mat2 J = F.jacobian(z[0], z[1]);
        const double d = J.det();
        if (d == 0 || !std::isfinite(d)) return false;
        z[0] -= (J.m[1][1] * r[0] - J.m[0][1] * r[1]) / d;
        z[1] -= (-J.m[1][0] * r[0] + J.m[0][0] * r[1]) / d;
        if (!std::isfinite(z[0]) || !std::isfinite(z[1]) || std::abs(z[0]) > 1e6 || std::abs(z[1]) > 1e6)
            return false;
    }
    const Vec2 r = F(z[0], z[1]);
    return std::max(std::abs(r[0]), std::abs(r[1])) <= 1e-12;
}

// Refines one cell from its centre and corners. Returns false if every start failed.
bool refine_cell(const BilinearMap2& F, int n, const Cell& cell, std::vector<Vec2>& found) {
    const double h = 2.0 / (n - 1);
    const double p = -1 + cell.i * h, f = -1 + cell.j * h;
    const Vec2 starts[5] = {{p + h / 2, f + h / 2}, {p, f}, {p + h, f}, {p, f + h}, {p + h, f + h}};
    bool any = false;
    const double lim = 1 - 2 * tol::bnd;
    for (Vec2 z : starts) {
        if (!newton(F, z)) continue;
        any = true;
        if (std::abs(z[0]) < lim && std::abs(z[1]) < lim) found.push_back(z);
    }
    return any;
}

OracleResult finish(std::vector<Vec2> pts, int failures) {
    std::sort(pts.begin(), pts.end());
    OracleResult r;
    r.newton_failures = failures;
    for (const auto& z : pts) {
        bool dup = false;
        for (const auto& k : r.roots)
            if (std::hypot(z[0] - k[0], z[1] - k[1]) <= 1e-6) dup = true;
        if (!dup) r.roots.push_back(z);
    }
    if (r.roots.size() > 2) throw Error(ErrorCode::TooManyRoots, "bilinear map returned more than two roots");
    return r;
}

void check_n(int n) {
    if (n < 41) throw Error(ErrorCode::InvalidArgument, "oracle grid resolution must be >= 41");
}

}  // namespace

OracleResult oracle_roots_serial(const QuadCorners& q, int n) {
    check_n(n);
    const auto F = bilinear_coeffs(q);
    std::vector<Cell> cells;
    for (int i = 0; i + 1 < n; ++i) scan_row(F, n, i, cells);
    std::vector<Vec2> pts;
    int failures = 0;
    for (const auto& c : cells)
        if (!refine_cell(F, n, c, pts)) ++failures;
    return finish(std::move(pts), failures);
}

OracleResult oracle_roots(const QuadCorners& q, int n) {
    check_n(n);
    const auto F = bilinear_coeffs(q);
    const int rows = n - 1;
    std::vector<std::vector<Cell>> per_row(rows);
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int i = 0; i < rows; ++i) scan_row(F, n, i, per_row[i]);

    std::vector<Cell> cells;
    for (auto& r : per_row) cells.insert(cells.end(), r.begin(), r.end());

    std::vector<std::vector<Vec2>> found(cells.size());
    std::vector<char> ok(cells.size(), 1);
    const int nc = static_cast<int>(cells.size());
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int k = 0; k < nc; ++k) ok[k] = refine_cell(F, n, cells[k], found[k]);

    std::vector<Vec2> pts;
    int failures = 0;
    for (int k = 0; k < nc; ++k) {
        pts.insert(pts.end(), found[k].begin(), found[k].end());
        if (!ok[k]) ++failures;
    }
    return finish(std::move(pts), failures);
}

}  // namespace flab
