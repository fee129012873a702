#include "filippov_lab/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "filippov_lab/parallel.hpp"
#include "filippov_lab/sliding_solver.hpp"
#include "filippov_lab/stability.hpp"

namespace flab {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::EdgeCrossing: return "edge_crossing";
        case EventKind::ParabolicTangency: return "parabolic_tangency";
        case EventKind::CountChange: return "count_change";
        case EventKind::CanardCandidate: return "canard_candidate";
        case EventKind::DegeneracyEncountered: return "degeneracy_encountered";
    }
    return "?";
}

double origin_segment_distance(const Vec2& a, const Vec2& b) {
    const Vec2 ab = sub(b, a);
    const double L2 = ab[0] * ab[0] + ab[1] * ab[1];
    double t = L2 > 0 ? -(a[0] * ab[0] + a[1] * ab[1]) / L2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(a[0] + t * ab[0], a[1] + t * ab[1]);
}

bool origin_on_segment(const Vec2& a, const Vec2& b) {
    return origin_segment_distance(a, b) <= 1e-8 * norm(sub(b, a));
}

MonitorSample monitor_at(const PwsSystem& sys, double x) {
    const auto q = project(sys, x);
    MonitorSample m;
    m.x = x;
    for (int i = 0; i < 4; ++i) m.d[i] = det2(q.xt[i], q.xt[next4(i)]);
    m.Delta = canopy_invariants(q).Delta;
    try {
        const auto sr = solve_sigmas(q);
        m.count = static_cast<int>(sr.solutions.size());
        for (const auto& r : sr.rejected)
            if (r.reason == RejectReason::SigmaPsiDenominatorZero) m.degenerate = true;
    } catch (const Error&) {
        m.degenerate = true;
    }
    bool finite = std::isfinite(m.Delta);
    for (double v : m.d) finite = finite && std::isfinite(v);
    if (!finite) m.degenerate = true;
    return m;
}

std::vector<MonitorSample> sample_monitors_serial(const PwsSystem& sys, const std::vector<double>& xs) {
    std::vector<MonitorSample> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(monitor_at(sys, x));
    return out;
}

std::vector<MonitorSample> sample_monitors(const PwsSystem& sys, const std::vector<double>& xs) {
    std::vector<MonitorSample> out(xs.size());
    const int n = static_cast<int>(xs.size());
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (int i = 0; i < n; ++i) out[i] = monitor_at(sys, xs[i]);
    return out;
}

namespace {

struct Bracket {
    double lo, hi;
};

// Shrinks [lo, hi] around a sign change of f to width <= 1e-10 (at most 60 halvings).
template <class F>
Bracket bisect(F&& f, double lo, double hi) {
    const double flo = f(lo);
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0) return {std::nextafter(mid, lo), std::nextafter(mid, hi)};
        if ((fm > 0) == (flo > 0)) lo = mid; else hi = mid;
    }
    return {lo, hi};
}

// Pairs of consecutive samples (skipping exact zeros) across which v changes strict sign.
template <class V>
std::vector<std::pair<int, int>> sign_changes(const std::vector<MonitorSample>& s, V&& v) {
    std::vector<std::pair<int, int>> out;
    int prev = -1;
    for (int j = 0; j < static_cast<int>(s.size()); ++j) {
        const double val = v(s[j]);
        if (val == 0 || !std::isfinite(val)) continue;
        if (prev >= 0 && (v(s[prev]) > 0) != (val > 0)) out.emplace_back(prev, j);
        prev = j;
    }
    return out;
}

struct Vertex {
    bool inside;
    double sigma_psi, sigma_phi;
};

// Double root of the sigma_phi quadratic and its sigma_psi partner.
Vertex quadratic_vertex(const QuadCorners& q) {
    const auto inv = canopy_invariants(q);
    const double a = inv.A + inv.Gamma - inv.B;
    if (std::abs(a) <= tol::deg) return {false, 0, 0};
    const double sf = -(inv.B - 2 * inv.Gamma) / (2 * a);
    const auto& X = q.xt;
    double sp = std::numeric_limits<double>::quiet_NaN();
    for (int c = 0; c < 2; ++c) {
        const double den = (X[1][c] - X[0][c]) * sf + (X[2][c] - X[3][c]) * (1 - sf);
        if (std::abs(den) > tol::deg) {
            sp = (X[1][c] * sf + X[2][c] * (1 - sf)) / den;
            break;
        }
    }
    const bool in = sf > 0 && sf < 1 && sp > 0 && sp < 1;
    return {in, sp, sf};
}

bool same_events(const std::vector<BifurcationEvent>& a, const std::vector<BifurcationEvent>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].kind != b[i].kind || std::abs(a[i].x_star - b[i].x_star) > 1e-8) return false;
    return true;
}

}  // namespace

CanardChecks canard_candidate(const PwsSystem& sys, const BifurcationEvent& ev) {
    if (ev.kind != EventKind::ParabolicTangency)
        throw Error(ErrorCode::PreconditionFailed, "canard check needs a parabolic tangency event");
    const double x = ev.x_star;
    const auto q = project(sys, x);
    const auto v = quadratic_vertex(q);
    if (std::isnan(v.sigma_psi)) throw Error(ErrorCode::PreconditionFailed, "fold point undefined");
    CanardChecks c;
    c.psi_star = 2 * v.sigma_psi - 1;
    c.phi_star = 2 * v.sigma_phi - 1;

    // (a) one zero eigenvalue of DF~ at the fold; scaling by diag(psi', phi') keeps the rank
    const Mat2 M = tangent_jacobian(q, c.psi_star, c.phi_star);
    const double tr = M.trace(), det = M.det();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4 * det));
    const double l1 = (tr + disc) / 2, l2 = (tr - disc) / 2;
    c.eig_small = std::abs(l1) < std::abs(l2) ? l1 : l2;
    c.eig_large = std::abs(l1) < std::abs(l2) ? l2 : l1;
    c.a = std::abs(c.eig_small) <= tol::deg && std::abs(c.eig_large) > tol::deg;

    // (b) the x-nullcline meets C0 at the fold, transversally along the fold tangent (kernel of DF~)
    auto speed = [&](double psi, double phi) { return f_x(q, psi, phi)[0]; };
    c.speed = speed(c.psi_star, c.phi_star);
    Vec2 k1{-M.m[0][1], M.m[0][0]}, k2{M.m[1][1], -M.m[1][0]};
    Vec2 ker = norm(k1) >= norm(k2) ? k1 : k2;
    const double kn = norm(ker);
    if (kn > 0) {
        ker = {ker[0] / kn, ker[1] / kn};
        const double h = 1e-6;
        c.dspeed = (speed(c.psi_star + h * ker[0], c.phi_star + h * ker[1]) -
                    speed(c.psi_star - h * ker[0], c.phi_star - h * ker[1])) / (2 * h);
    }
    c.b = std::abs(c.speed) <= tol::deg && std::abs(c.dspeed) > tol::deg;

    // (c) the unfolding crosses the fold with nonzero speed
    const double h = 1e-6;
    c.ddelta = (canopy_invariants(project(sys, x + h)).Delta - canopy_invariants(project(sys, x - h)).Delta) / (2 * h);
    c.c = std::abs(c.ddelta) > tol::deg;
    return c;
}

std::vector<BifurcationEvent> scan(const PwsSystem& sys, double x_lo, double x_hi, int n) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "scan needs n >= 3");
    if (!(x_lo < x_hi)) throw Error(ErrorCode::InvalidArgument, "scan needs x_lo < x_hi");
    std::vector<double> xs(n);
    for (int j = 0; j < n; ++j) xs[j] = x_lo + (x_hi - x_lo) * j / (n - 1);
    xs.back() = x_hi;
    const auto s = sample_monitors(sys, xs);

    std::vector<BifurcationEvent> geometric;

    // (i) edge crossings: det(X~_i X~_i+1) changes sign with the origin on the segment
    for (int i = 0; i < 4; ++i) {
        for (auto [j0, j1] : sign_changes(s, [i](const MonitorSample& m) { return m.d[i]; })) {
            auto f = [&](double x) {
                const auto q = project(sys, x);
                return det2(q.xt[i], q.xt[next4(i)]);
            };
            const auto br = bisect(f, s[j0].x, s[j1].x);
            const double xs_ = 0.5 * (br.lo + br.hi);
            const auto q = project(sys, xs_);
            const Vec2 a = q.xt[i], b = q.xt[next4(i)];
            if (!origin_on_segment(a, b)) continue;
            BifurcationEvent ev;
            ev.kind = EventKind::EdgeCrossing;
            ev.edge = i + 1;
            ev.x_star = xs_;
            ev.x_lo = br.lo;
            ev.x_hi = br.hi;
            ev.count_from = s[j0].count;
            ev.count_to = s[j1].count;
            ev.diagnostics = {{"edges", std::vector<int>{i + 1}},
                              {"det_lo", f(br.lo)},
                              {"det_hi", f(br.hi)},
                              {"origin_distance", origin_segment_distance(a, b)},
                              {"segment_length", norm(sub(b, a))},
                              {"count_from", s[j0].count},
                              {"count_to", s[j1].count}};
            geometric.push_back(std::move(ev));
        }
    }

    // merge edges vanishing at the same point
    std::sort(geometric.begin(), geometric.end(), [](const auto& a, const auto& b) {
        return a.x_star != b.x_star ? a.x_star < b.x_star : a.edge < b.edge;
    });
    std::vector<BifurcationEvent> events;
    for (auto& ev : geometric) {
        if (!events.empty() && std::abs(events.back().x_star - ev.x_star) <= 1e-8) {
            auto& keep = events.back();
            auto& edges = std::get<std::vector<int>>(keep.diagnostics[0].second);
            edges.push_back(ev.edge);
            std::sort(edges.begin(), edges.end());
            if (ev.edge < keep.edge) {
                ev.diagnostics[0].second = edges;
                keep = std::move(ev);
            }
            continue;
        }
        events.push_back(std::move(ev));
    }

    // (ii) parabolic tangency: Delta changes sign with the double root inside the square
    for (auto [j0, j1] : sign_changes(s, [](const MonitorSample& m) { return m.Delta; })) {
        auto f = [&](double x) { return canopy_invariants(project(sys, x)).Delta; };
        const auto br = bisect(f, s[j0].x, s[j1].x);
        const double xs_ = 0.5 * (br.lo + br.hi);
        const auto q = project(sys, xs_);
        const auto v = quadratic_vertex(q);
        if (!v.inside) continue;
        const auto inv = canopy_invariants(q);
        BifurcationEvent ev;
        ev.kind = EventKind::ParabolicTangency;
        ev.x_star = xs_;
        ev.x_lo = br.lo;
        ev.x_hi = br.hi;
        ev.count_from = s[j0].count;
        ev.count_to = s[j1].count;
        ev.canard = canard_candidate(sys, ev);
        const double nu_speed = sliding_speed(q, nu_coefficients(v.sigma_psi, v.sigma_phi));
        ev.diagnostics = {{"A", inv.A},
                          {"B", inv.B},
                          {"Gamma", inv.Gamma},
                          {"Delta_lo", f(br.lo)},
                          {"Delta_hi", f(br.hi)},
                          {"sigma_psi", v.sigma_psi},
                          {"sigma_phi", v.sigma_phi},
                          {"speed", nu_speed},
                          {"count_from", s[j0].count},
                          {"count_to", s[j1].count},
                          {"canard_a", ev.canard->a},
                          {"canard_b", ev.canard->b},
                          {"canard_c", ev.canard->c}};
        events.push_back(std::move(ev));
    }

    // (iii) count changes with no geometric cause, and degenerate runs
    const std::size_t n_geo = events.size();
    for (int j = 0; j + 1 < n; ++j) {
        if (s[j].degenerate || s[j + 1].degenerate || s[j].count == s[j + 1].count) continue;
        bool explained = false;
        for (std::size_t e = 0; e < n_geo; ++e)
            if (events[e].x_star >= s[j].x - 1e-9 && events[e].x_star <= s[j + 1].x + 1e-9) explained = true;
        if (explained) continue;
        const int c0 = s[j].count;
        auto f = [&](double x) { return monitor_at(sys, x).count == c0 ? 1.0 : -1.0; };
        const auto br = bisect(f, s[j].x, s[j + 1].x);
        BifurcationEvent ev;
        ev.kind = EventKind::CountChange;
        ev.x_star = 0.5 * (br.lo + br.hi);
        ev.x_lo = br.lo;
        ev.x_hi = br.hi;
        ev.count_from = c0;
        ev.count_to = s[j + 1].count;
        // distance of the nearest candidate root (admitted or not) to a corner of the square
        double corner = std::numeric_limits<double>::infinity();
        try {
            const auto sr = solve_sigmas(project(sys, ev.x_star));
            auto upd = [&](double sp, double sf) {
                if (std::isnan(sp)) return;
                for (double cp : {0.0, 1.0})
                    for (double cf : {0.0, 1.0}) corner = std::min(corner, std::hypot(sp - cp, sf - cf));
            };
            for (const auto& so : sr.solutions) upd(so.sigma_psi, so.sigma_phi);
            for (const auto& r : sr.rejected) upd(r.sigma_psi, r.sigma_phi);
        } catch (const Error&) {
        }
        ev.diagnostics = {{"count_from", c0}, {"count_to", s[j + 1].count}};
        if (std::isfinite(corner)) ev.diagnostics.emplace_back("corner_distance", corner);
        events.push_back(std::move(ev));
    }
    for (int j = 0; j < n; ++j) {
        if (!s[j].degenerate) continue;
        int k = j;
        while (k + 1 < n && s[k + 1].degenerate) ++k;
        BifurcationEvent ev;
        ev.kind = EventKind::DegeneracyEncountered;
        ev.x_lo = s[std::max(j - 1, 0)].x;
        ev.x_hi = s[std::min(k + 1, n - 1)].x;
        ev.x_star = s[(j + k) / 2].x;
        ev.diagnostics = {{"first_sample", s[j].x}, {"last_sample", s[k].x}};
        events.push_back(std::move(ev));
        j = k;
    }

    const std::size_t before = events.size();
    for (std::size_t e = 0; e < before; ++e) {
        if (events[e].kind != EventKind::ParabolicTangency || !events[e].canard->all()) continue;
        BifurcationEvent ev = events[e];
        ev.kind = EventKind::CanardCandidate;
        const auto& c = *ev.canard;
        ev.diagnostics = {{"a", c.a},
                          {"b", c.b},
                          {"c", c.c},
                          {"psi_star", c.psi_star},
                          {"phi_star", c.phi_star},
                          {"eig_small", c.eig_small},
                          {"eig_large", c.eig_large},
                          {"speed", c.speed},
                          {"dspeed", c.dspeed},
                          {"ddelta", c.ddelta}};
        events.push_back(std::move(ev));
    }

    std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
        return a.x_star != b.x_star ? a.x_star < b.x_star : static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return events;
}

std::vector<BifurcationEvent> scan_refined(const PwsSystem& sys, double x_lo, double x_hi, int n) {
    auto prev = scan(sys, x_lo, x_hi, n);
    int stable = 0;
    for (int round = 0; round < 12 && stable < 2; ++round) {
        n = 2 * n - 1;
        auto next = scan(sys, x_lo, x_hi, n);
        stable = same_events(prev, next) ? stable + 1 : 0;
        prev = std::move(next);
    }
    return prev;
}

std::array<EquatorDiagnostic, 4> equator_equilibria(const QuadCorners& q) {
    std::array<EquatorDiagnostic, 4> out;
    for (int i = 0; i < 4; ++i) {
        const double beta = q.xt[i][0], gamma = q.xt[i][1];
        auto root = [](double rho, double ev) {
            const bool hyp = std::abs(ev) > tol::deg;
            return EquatorRoot{rho, ev, hyp, hyp && ev < 0};
        };
        out[i].index = i + 1;
        out[i].roots.push_back(root(0.0, beta));
        if (gamma != 0 && beta / gamma > 0) out[i].roots.push_back(root(beta / gamma, -beta));
    }
    return out;
}

}  // namespace flab
