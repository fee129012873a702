// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any line fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "filippov_lab/bifurcation.hpp"
#include "filippov_lab/cli.hpp"
#include "filippov_lab/dynamics.hpp"
#include "filippov_lab/io.hpp"
#include "filippov_lab/stability.hpp"
#include "oracles.hpp"

using namespace flab;
namespace ft = flab::testing;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    fmt::print("{} {:>2}: {}\n", ok ? "PASS" : "FAIL", id, what);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PwsSystem data(const std::string& file) { return io::load_system(std::string(FLAB_DATA_DIR) + "/" + file); }

const std::array<RegFunction, 3> kRegs{kTanh, kArctan, kSotomayorTeixeira};

// ---- 1, 2, 3 ----

void corpus_criteria() {
    const auto t_gen = std::chrono::steady_clock::now();
    const auto corpus = ft::stratified_corpus(20261016, {});
    const double gen_s = seconds_since(t_gen);

    const auto t0 = std::chrono::steady_clock::now();
    int count_mismatch = 0, value_mismatch = 0, solver_throw = 0, elim_mismatch = 0;
    int loc_mismatch = 0, loc_throw = 0, doubles = 0, double_violations = 0;
    double worst = 0;
    std::map<QuadClass, int> cls_count;
    std::array<int, 4> tip_count{};
    std::map<Region, int> region_count;
    int shape_disagree = 0;

    for (const auto& e : corpus) {
        const auto oracle = oracle_roots(e.q, 401);
        const int n_oracle = static_cast<int>(oracle.roots.size());
        if (n_oracle != e.roots) ++elim_mismatch;

        SolveResult sr;
        try {
            sr = solve_sigmas(e.q);
        } catch (const Error&) {
            ++solver_throw;
            continue;
        }
        if (static_cast<int>(sr.solutions.size()) != n_oracle) {
            ++count_mismatch;
        } else {
            bool ok = true;
            for (const auto& s : sr.solutions) {
                double best = INFINITY;
                for (const auto& r : oracle.roots)
                    best = std::min(best, std::max(std::abs(s.psi_star - r[0]), std::abs(s.phi_star - r[1])));
                worst = std::max(worst, best);
                ok = ok && best <= 1e-8;
            }
            if (!ok) ++value_mismatch;
        }

        const auto shape = quad_shape(e.q);
        ++cls_count[shape.cls];
        if (shape.cls == QuadClass::Concave) ++tip_count[shape.tip - 1];
        const bool same_shape = static_cast<int>(shape.cls) == static_cast<int>(e.shape.shape) &&
                                (shape.cls != QuadClass::Concave || shape.tip == e.shape.reflex);
        if (!same_shape) ++shape_disagree;
        try {
            const auto loc = origin_location(e.q);
            if (loc.count() != n_oracle) ++loc_mismatch;
            if (loc.variant == LocationVariant::Unique) ++region_count[loc.region];
            if (loc.variant == LocationVariant::Double) ++region_count[Region::None];
        } catch (const Error&) {
            ++loc_throw;
        }

        if (n_oracle == 2 && sr.solutions.size() == 2) {
            ++doubles;
            int neg = 0, pos = 0;
            for (const auto& s : sr.solutions) {
                const double d = tangent_jacobian(e.q, s.psi_star, s.phi_star).det();
                neg += d < 0;
                pos += d > 0;
            }
            if (!(neg == 1 && pos == 1)) ++double_violations;
        }
    }
    const double run_s = seconds_since(t0);
    const int n = static_cast<int>(corpus.size());

    report(1, count_mismatch == 0 && value_mismatch == 0 && solver_throw == 0 && run_s <= 60.0,
           fmt::format("closed form vs grid oracle (401^2, Newton): {} systems, count mismatches {}, value mismatches "
                       "{} (worst {:.2e}, tol 1e-8), solver throws {}, elimination-oracle disagreements {}; "
                       "{:.1f} s (limit 60 s; corpus generation {:.1f} s)",
                       n, count_mismatch, value_mismatch, worst, solver_throw, elim_mismatch, run_s, gen_s));

    bool strata = cls_count[QuadClass::Convex] >= 500 && cls_count[QuadClass::Crossed] >= 500 &&
                  cls_count[QuadClass::Concave] >= 500;
    for (int t : tip_count) strata = strata && t >= 500;
    const bool regions = region_count[Region::ConvexInterior] > 0 && region_count[Region::CrossedHomeo] > 0 &&
                         region_count[Region::ConcaveCrossedSub] > 0 && region_count[Region::ConcaveConvexSub] > 0 &&
                         region_count[Region::None] > 0;
    report(2, loc_mismatch == 0 && loc_throw == 0 && strata && regions && shape_disagree == 0,
           fmt::format("origin_location count vs oracle: mismatches {}, throws {}; classes convex {} crossed {} "
                       "concave {} (tips {} {} {} {}); unique regions convex {} crossed {} concave/crossed-sub {} "
                       "concave/convex-sub {}, double {}; shape disagreements with reference {}",
                       loc_mismatch, loc_throw, cls_count[QuadClass::Convex], cls_count[QuadClass::Crossed],
                       cls_count[QuadClass::Concave], tip_count[0], tip_count[1], tip_count[2], tip_count[3],
                       region_count[Region::ConvexInterior], region_count[Region::CrossedHomeo],
                       region_count[Region::ConcaveCrossedSub], region_count[Region::ConcaveConvexSub],
                       region_count[Region::None], shape_disagree));

    report(3, doubles >= 1000 && double_violations == 0,
           fmt::format("double instances {} (need >= 1000), det DF~ sign pattern violations {}", doubles,
                       double_violations));
}

// ---- 4 ----

void s_two() {
    const auto q = project(data("s_two.json"), 0.0);
    const auto sr = solve_sigmas(q);
    bool ok = sr.solutions.size() == 2;
    double err = INFINITY;
    if (ok) {
        const std::array<Vec2, 2> want{Vec2{0.25, 0.75}, Vec2{0.75, 0.25}};
        err = 0;
        for (const auto& w : want) {
            double best = INFINITY;
            for (const auto& s : sr.solutions)
                best = std::min(best, std::max(std::abs(s.sigma_psi - w[0]), std::abs(s.sigma_phi - w[1])));
            err = std::max(err, best);
        }
        ok = err <= 1e-12;
    }
    int saddles = 0, nfc = 0, repelling_pairs = 0;
    if (ok) {
        for (const auto& s : sr.solutions) {
            const auto rep = stability_report(q, s, kTanh, kTanh);
            (rep.type == GeometricType::Saddle ? saddles : nfc)++;
            if (std::abs(s.sigma_psi - 0.25) < 1e-12) {
                ok = ok && rep.type == GeometricType::NodeFocusCenter;
                ok = ok && reg_independent_stability(q, s) == RegVerdict::Repelling;
                for (const auto& ry : kRegs)
                    for (const auto& rz : kRegs) {
                        const auto r = stability_report(q, s, ry, rz);
                        repelling_pairs += r.trace_j > 0 && r.verdict == RegVerdict::Repelling;
                    }
            } else {
                ok = ok && rep.type == GeometricType::Saddle;
            }
        }
    }
    ok = ok && saddles == 1 && nfc == 1 && repelling_pairs == 9;
    report(4, ok,
           fmt::format("S_two: sigma set error {:.1e} (tol 1e-12); types saddle {} node/focus/center {}; branch "
                       "(1/4,3/4) repelling for {}/9 regularization pairs",
                       err, saddles, nfc, repelling_pairs));
}

// ---- 5 ----

void s_sym() {
    const auto q = project(data("s_sym.json"), 0.0);
    const auto sr = solve_sigmas(q);
    bool ok = sr.solutions.size() == 1;
    double jerr = INFINITY;
    if (ok) {
        const auto& s = sr.solutions[0];
        ok = s.branch == Branch::Single && s.sigma_psi == 0.5 && s.sigma_phi == 0.5;
        const auto rep = stability_report(q, s, kTanh, kTanh);
        jerr = std::max({std::abs(rep.jacobian.m[0][0] + 1), std::abs(rep.jacobian.m[0][1]),
                         std::abs(rep.jacobian.m[1][0]), std::abs(rep.jacobian.m[1][1] + 1)});
        ok = ok && jerr <= 4 * std::numeric_limits<double>::epsilon();
        ok = ok && rep.verdict == RegVerdict::Attracting && rep.reg_independent;
    }
    report(5, ok, fmt::format("S_sym: unique (1/2,1/2) on the single branch; |J + I| = {:.1e}; attracting, "
                              "regularization-independent",
                              jerr));
}

// ---- 6 ----

void reg_dependence() {
    // F~ = psi a1 + phi a2 with a1 = (1,1), a2 = (-2,-1.3): s1 = 2, s2 = -2.6, det DF~ = 0.7
    const Vec2 a1{1, 1}, a2{-2, -1.3};
    const std::array<Vec2, 4> X{Vec2{a1[0] + a2[0], a1[1] + a2[1]}, Vec2{-a1[0] + a2[0], -a1[1] + a2[1]},
                                Vec2{-a1[0] - a2[0], -a1[1] - a2[1]}, Vec2{a1[0] - a2[0], a1[1] - a2[1]}};
    const auto q = QuadCorners::constant(X);
    const auto sr = solve_sigmas(q);
    bool ok = sr.solutions.size() == 1;
    double t_tt = 0, t_ta = 0;
    Vec2 s{0, 0};
    if (ok) {
        const auto& sol = sr.solutions[0];
        s = trace_coefficients(q, sol);
        t_tt = stability_report(q, sol, kTanh, kTanh).trace_j;
        t_ta = stability_report(q, sol, kTanh, kArctan).trace_j;
        ok = s[0] * s[1] < 0 && std::abs(t_tt) > 1e-6 && std::abs(t_ta) > 1e-6 && t_tt * t_ta < 0 &&
             reg_independent_stability(q, sol) == RegVerdict::DependsOnRegularization;
    }
    report(6, ok,
           fmt::format("constructed system: s1 = {:.3f}, s2 = {:.3f}; trace J tanh/tanh = {:.6f}, tanh/arctan = {:.6f}",
                       s[0], s[1], t_tt, t_ta));
}

// ---- 7 ----

void convergence() {
    const std::vector<double> eps{1e-2, 5e-3, 2.5e-3};
    auto run = [&](const std::string& file, double& max_run_s) {
        std::vector<ConvergenceRow> rows;
        max_run_s = 0;
        for (double e : eps) {
            const auto t0 = std::chrono::steady_clock::now();
            auto r = convergence_experiment(data(file), kTanh, kTanh, {}, {e});
            max_run_s = std::max(max_run_s, seconds_since(t0));
            rows.push_back(r[0]);
        }
        for (std::size_t i = 1; i < rows.size(); ++i)
            rows[i].order = std::log(rows[i - 1].error / rows[i].error) / std::log(rows[i - 1].eps / rows[i].eps);
        return rows;
    };
    double t_speed = 0, t_one = 0;
    const auto r = run("s_sym_speed.json", t_speed);
    bool ok = t_speed <= 10.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        ok = ok && r[i].status == OdeStatus::Ok;
        if (i > 0) ok = ok && r[i].error < r[i - 1].error && *r[i].order >= 0.9;
    }
    report(7, ok,
           fmt::format("S_sym corners, alpha = (2,0,2,0): errors {:.3e} {:.3e} {:.3e}, orders {:.3f} {:.3f}; slowest run "
                       "{:.2f} s (limit 10 s)",
                       r[0].error, r[1].error, r[2].error, *r[1].order, *r[2].order, t_speed));
    const auto r1 = run("s_sym.json", t_one);
    fmt::print("INFO  7: alpha = 1: errors {:.1e} {:.1e} {:.1e}; x(t) equals the reduced flow up to rounding, so the "
               "order is not measurable on this system\n",
               r1[0].error, r1[1].error, r1[2].error);
}

// ---- 8 ----

void scans() {
    const auto fs = data("f_shift.json");
    const auto ev = scan(fs, -0.3, 0.5, 200);
    bool ok1 = ev.size() == 1 && ev[0].kind == EventKind::ParabolicTangency && std::abs(ev[0].x_star + 0.25) <= 1e-8;
    int before = -1, after = -1;
    if (ok1) {
        before = static_cast<int>(ft::elimination_roots(project(fs, -0.26).xt).size());
        after = static_cast<int>(ft::elimination_roots(project(fs, -0.24).xt).size());
        ok1 = std::min(ev[0].count_from, ev[0].count_to) == 0 && std::max(ev[0].count_from, ev[0].count_to) == 2 &&
              std::min(before, after) == 0 && std::max(before, after) == 2;
    }

    const auto ef = data("edge_family.json");
    const auto ee = scan(ef, -0.5, 0.5, 200);
    bool ok2 = ee.size() == 1 && ee[0].kind == EventKind::EdgeCrossing && std::abs(ee[0].x_star) <= 1e-8;
    double t_lo = 0, t_hi = 0;
    if (ok2) {
        const auto lo = filippov_codim1(ef, 4, ee[0].x_star - 0.05);
        const auto hi = filippov_codim1(ef, 4, ee[0].x_star + 0.05);
        t_lo = lo.vector[1];
        t_hi = hi.vector[1];
        ok2 = t_lo * t_hi < 0;
    }
    report(8, ok1 && ok2,
           fmt::format("F_shift: {} event(s), tangency at {:.17g}, oracle count {} -> {}; edge family: {} event(s), "
                       "edge crossing at {:.3g}, Pi_4 tangential beta {:.4f} -> {:.4f}",
                       ev.size(), ev.empty() ? NAN : ev[0].x_star, before, after, ee.size(),
                       ee.empty() ? NAN : ee[0].x_star, t_lo, t_hi));
}

// ---- 9 ----

void canard() {
    auto find = [](const std::vector<BifurcationEvent>& ev) -> const BifurcationEvent* {
        for (const auto& e : ev)
            if (e.kind == EventKind::CanardCandidate) return &e;
        return nullptr;
    };
    const auto ev = scan(data("f_shift_canard.json"), -0.3, 0.5, 200);
    const auto* c = find(ev);
    const bool ok1 = c && std::abs(c->x_star + 0.25) <= 1e-8 && c->canard && c->canard->a && c->canard->b &&
                     c->canard->c;
    const auto ev1 = scan(data("f_shift.json"), -0.3, 0.5, 200);
    const bool ok2 = find(ev1) == nullptr;
    report(9, ok1 && ok2,
           fmt::format("alpha = (1,1,-1,-1): candidate {} at {:.17g} with (a,b,c) = ({},{},{}); alpha = 1: candidate {}",
                       c ? "flagged" : "missing", c ? c->x_star : NAN, c && c->canard && c->canard->a,
                       c && c->canard && c->canard->b, c && c->canard && c->canard->c,
                       find(ev1) ? "flagged" : "none"));
}

// ---- 10 ----

void jacobian_fd() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2, 2), P(-1, 1);
    const double h = 1e-6;
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        std::array<Vec2, 4> X;
        for (auto& c : X) c = {U(rng), U(rng)};
        const auto q = QuadCorners::constant(X);
        const double psi = P(rng), phi = P(rng);
        const Mat2 J = tangent_jacobian(q, psi, phi);
        const Vec2 fp = f_tilde(q, psi + h, phi), fm = f_tilde(q, psi - h, phi);
        const Vec2 gp = f_tilde(q, psi, phi + h), gm = f_tilde(q, psi, phi - h);
        for (int r = 0; r < 2; ++r) {
            worst = std::max(worst, std::abs(J.m[r][0] - (fp[r] - fm[r]) / (2 * h)));
            worst = std::max(worst, std::abs(J.m[r][1] - (gp[r] - gm[r]) / (2 * h)));
        }
    }
    report(10, worst <= 1e-8, fmt::format("tangent_jacobian vs central differences (h = 1e-6), 1000 points: max abs "
                                          "error {:.2e} (tol 1e-8)",
                                          worst));
}

// ---- 11 ----

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void goldens() {
    std::ifstream manifest(std::string(FLAB_GOLDEN_DIR) + "/cases.txt");
    std::string line;
    int cases = 0, bad = 0;
    std::vector<std::string> bad_names;
    std::map<std::string, int> per_command;
    while (std::getline(manifest, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string name, code_s, args_s;
        std::getline(ls, name, '|');
        std::getline(ls, code_s, '|');
        std::getline(ls, args_s);
        std::vector<std::string> args{"filippov_lab"};
        std::istringstream as(args_s);
        for (std::string a; as >> a;) {
            const auto pos = a.find("{DATA}");
            if (pos != std::string::npos) a.replace(pos, 6, FLAB_DATA_DIR);
            args.push_back(a);
        }
        std::ostringstream o1, e1, o2, e2;
        const int c1 = cli::run(args, o1, e1);
        const int c2 = cli::run(args, o2, e2);
        const std::string golden = slurp(std::string(FLAB_GOLDEN_DIR) + "/" + name + ".out");
        const bool ok = c1 == c2 && c1 == std::stoi(code_s) && o1.str() == o2.str() && o1.str() == golden;
        ++cases;
        ++per_command[args[1]];
        if (!ok) {
            ++bad;
            bad_names.push_back(name);
        }
    }
    std::string names;
    for (const auto& n : bad_names) names += " " + n;
    report(11, cases > 0 && bad == 0 && per_command.size() == 5,
           fmt::format("golden CLI cases: {} run twice in-process, {} commands covered, {} failing{}", cases,
                       per_command.size(), bad, names));
}

}  // namespace

int main() {
    corpus_criteria();
    s_two();
    s_sym();
    reg_dependence();
    convergence();
    scans();
    canard();
    jacobian_fd();
    goldens();
    return failures == 0 ? 0 : 1;
}
