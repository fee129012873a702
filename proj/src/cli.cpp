#include "filippov_lab/cli.hpp"

#include <fmt/format.h>

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "filippov_lab/bifurcation.hpp"
#include "filippov_lab/canopy.hpp"
#include "filippov_lab/dynamics.hpp"
#include "filippov_lab/io.hpp"
#include "filippov_lab/sliding_solver.hpp"
#include "filippov_lab/stability.hpp"

namespace flab::cli {

namespace {

using io::fmt17;
using io::Json;

struct Loaded {
    PwsSystem sys;
    std::string digest;
};

Loaded load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    return {io::parse_system(text), io::canonical_digest(text)};
}

RegFunction reg_or_throw(const std::string& name) {
    auto r = RegFunction::parse(name);
    if (!r) throw Error(ErrorCode::InvalidArgument, "unknown regularization '" + name + "' (tanh, arctan, st)");
    return *r;
}

std::string join17(const auto& values, const char* sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += sep;
        s += fmt17(values[i]);
    }
    return s;
}

std::string stability_phrase(const StabilityReport& r, const RegFunction& ry, const RegFunction& rz) {
    const auto& k = r.kind;
    switch (k.type) {
        case StabilityType::Saddle: return "saddle (regularization-independent)";
        case StabilityType::NonHyperbolic: return "nonhyperbolic";
        case StabilityType::Center: return "center (outside the hyperbolic stability definition)";
        default: break;
    }
    std::string s = std::string(to_string(k.type)) + " (" + to_string(k.dir);
    if (r.reg_independent)
        s += ", regularization-independent)";
    else
        s += fmt::format(" under {}/{}, regularization-dependent)", ry.name(), rz.name());
    return s;
}

// ---- classify ----

struct ClassifyOpts {
    std::string system;
    double x = 0;
    std::string reg_y = "tanh", reg_z = "tanh";
    bool json = false;
};

int cmd_classify(const ClassifyOpts& o, std::ostream& out) {
    const auto [sys, digest] = load(o.system);
    const auto ry = reg_or_throw(o.reg_y), rz = reg_or_throw(o.reg_z);
    const auto q = project(sys, o.x);
    const auto shape = quad_shape(q);
    const auto inv = canopy_invariants(q);

    std::optional<OriginLocation> loc;
    if (shape.cls != QuadClass::Degenerate) loc = origin_location(q);
    std::optional<SolveResult> sr;
    std::string solver_error;
    try {
        sr = solve_sigmas(q);
    } catch (const Error& e) {
        solver_error = to_string(e.code());
    }
    const bool degenerate = shape.cls == QuadClass::Degenerate || !sr;

    std::vector<StabilityReport> reps;
    if (sr)
        for (const auto& s : sr->solutions) reps.push_back(stability_report(q, s, ry, rz));
    std::string geometry;
    if (loc && loc->variant == LocationVariant::Unique) {
        try {
            geometry = to_string(type_from_geometry(q, *loc));
        } catch (const Error&) {
            geometry = "unavailable";
        }
    }

    std::string cls = to_string(shape.cls);
    if (shape.cls == QuadClass::Crossed)
        cls += shape.chi1_role == ChiRole::Edge ? " (chi1 edge)" : " (chi1 diagonal)";
    if (shape.cls == QuadClass::Concave) cls += fmt::format(" (tip X{})", shape.tip);

    std::string summary = to_string(shape.cls);
    const std::size_t n = sr ? sr->solutions.size() : 0;
    if (n == 0) {
        summary += degenerate ? "; degenerate" : "; no sliding";
    } else if (n == 1) {
        summary += fmt::format("; unique; {}; speed={}", stability_phrase(reps[0], ry, rz), fmt17(sr->solutions[0].speed));
    } else {
        auto label = [](const StabilityReport& r) {
            return r.type == GeometricType::Saddle ? "saddle" : "node/focus";
        };
        const bool first_saddle = reps[0].type == GeometricType::Saddle;
        summary += fmt::format("; two solutions: {} + {}", label(reps[first_saddle ? 0 : 1]), label(reps[first_saddle ? 1 : 0]));
    }

    const int code = degenerate ? exit_code::degenerate : n > 0 ? exit_code::ok : exit_code::no_sliding;

    if (o.json) {
        Json res;
        res["system"] = sys.name;
        res["x"] = o.x;
        res["x_in_domain"] = sys.in_domain(o.x);
        res["quad_class"] = to_string(shape.cls);
        if (shape.cls == QuadClass::Crossed) res["chi1_role"] = shape.chi1_role == ChiRole::Edge ? "edge" : "diagonal";
        if (shape.cls == QuadClass::Concave) res["tip"] = shape.tip;
        res["delta"] = shape.delta;
        res["invariants"] = {{"A", inv.A}, {"B", inv.B}, {"Gamma", inv.Gamma}, {"Delta", inv.Delta}};
        if (loc) {
            res["location"] = {{"variant", to_string(loc->variant)}, {"region", to_string(loc->region)}};
            if (!geometry.empty()) res["geometry"] = geometry;
        } else {
            res["location"] = nullptr;
        }
        if (!solver_error.empty()) res["solver_error"] = solver_error;
        Json sols = Json::array();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& s = sr->solutions[i];
            const auto& r = reps[i];
            Json js;
            js["sigma_psi"] = s.sigma_psi;
            js["sigma_phi"] = s.sigma_phi;
            js["branch"] = to_string(s.branch);
            js["nu"] = s.nu;
            js["speed"] = s.speed;
            js["det_dftilde"] = r.d_ftilde.det();
            js["det_j"] = r.det_j;
            js["trace_j"] = r.trace_j;
            js["kind"] = to_string(r.kind.type);
            js["direction"] = to_string(r.kind.dir);
            js["type"] = to_string(r.type);
            js["reg_independent"] = r.reg_independent;
            sols.push_back(js);
        }
        res["solutions"] = sols;
        res["summary"] = summary;
        Json env;
        env["tool_version"] = kToolVersion;
        env["input_digest"] = digest;
        env["command"] = "classify";
        env["parameters"] = {{"x", o.x}, {"reg_y", o.reg_y}, {"reg_z", o.reg_z}};
        env["results"] = res;
        out << io::dump(env) << "\n";
        return code;
    }

    out << "system: " << sys.name << "\n";
    out << "x: " << fmt17(o.x) << (sys.in_domain(o.x) ? "" : " (outside x_domain)") << "\n";
    out << "class: " << cls << "\n";
    out << "delta: " << join17(shape.delta) << "\n";
    out << "A: " << fmt17(inv.A) << "\n";
    out << "B: " << fmt17(inv.B) << "\n";
    out << "Gamma: " << fmt17(inv.Gamma) << "\n";
    out << "Delta: " << fmt17(inv.Delta) << "\n";
    if (loc) {
        out << "location: " << to_string(loc->variant);
        if (loc->variant == LocationVariant::Unique) out << " (" << to_string(loc->region) << ")";
        out << "\n";
        if (!geometry.empty()) out << "geometry: " << geometry << "\n";
    } else {
        out << "location: undefined (degenerate quadrilateral)\n";
    }
    if (!solver_error.empty()) out << "solver: " << solver_error << "\n";
    out << "solutions: " << n << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = sr->solutions[i];
        const auto& r = reps[i];
        out << fmt::format("[{}] sigma_psi={} sigma_phi={} branch={}\n", i + 1, fmt17(s.sigma_psi), fmt17(s.sigma_phi),
                           to_string(s.branch));
        out << "    nu=" << join17(s.nu) << "\n";
        out << "    speed=" << fmt17(s.speed) << "\n";
        out << fmt::format("    det_DF={} det_J={} trace_J={} ({}/{})\n", fmt17(r.d_ftilde.det()), fmt17(r.det_j),
                           fmt17(r.trace_j), ry.name(), rz.name());
        out << "    stability: " << stability_phrase(r, ry, rz) << "\n";
    }
    out << "summary: " << summary << "\n";
    return code;
}

// ---- simulate ----

struct SimulateOpts {
    std::string system;
    double x0 = 0, y0 = 0, z0 = 0;
    double eps = 0;
    std::string reg_y = "tanh", reg_z = "tanh";
    double t_end = 0;
    double rtol = 1e-8, atol = 1e-10;
    int samples = 101;
    std::string out_path;
};

void write_csv_3(std::ostream& os, const Trajectory<3>& tr) {
    os << "t,x,y,z\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const auto& s = tr.states[i];
        os << fmt17(tr.times[i]) << ',' << fmt17(s[0]) << ',' << fmt17(s[1]) << ',' << fmt17(s[2]) << '\n';
    }
}

int cmd_simulate(const SimulateOpts& o, std::ostream& out, std::ostream& err) {
    if (!(o.eps > 0)) throw Error(ErrorCode::InvalidArgument, "--eps must be positive");
    if (!(o.t_end > 0)) throw Error(ErrorCode::InvalidArgument, "--t-end must be positive");
    if (!(o.rtol > 0 && o.atol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    if (o.samples < 2) throw Error(ErrorCode::InvalidArgument, "--samples must be >= 2");
    const auto ry = reg_or_throw(o.reg_y), rz = reg_or_throw(o.reg_z);
    const auto sys = load(o.system).sys;
    const auto tr = integrate_regularized(sys, ry, rz, o.eps, {o.x0, o.y0, o.z0}, o.t_end, o.rtol, o.atol,
                                          uniform_samples(0.0, o.t_end, o.samples));
    if (o.out_path.empty()) {
        write_csv_3(out, tr);
    } else {
        std::ofstream f(o.out_path, std::ios::binary);
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + o.out_path);
        write_csv_3(f, tr);
    }
    if (tr.stats.stiffness_detected) err << "note: stiffness detected; explicit steps are stability-limited\n";
    if (tr.status != OdeStatus::Ok) {
        err << "error: " << to_string(tr.status) << " after " << tr.times.size() << " of " << o.samples
            << " samples\n";
        return exit_code::solver_failure;
    }
    return exit_code::ok;
}

// ---- layer ----

struct LayerOpts {
    std::string system;
    double x = 0;
    int grid = 21;
    double extent = 3;
    std::string reg_y = "tanh", reg_z = "tanh";
};

int cmd_layer(const LayerOpts& o, std::ostream& out) {
    if (o.grid < 2) throw Error(ErrorCode::InvalidArgument, "--grid must be >= 2");
    if (!(o.extent > 0)) throw Error(ErrorCode::InvalidArgument, "--extent must be positive");
    const auto ry = reg_or_throw(o.reg_y), rz = reg_or_throw(o.reg_z);
    const auto q = project(load(o.system).sys, o.x);
    out << "y_hat,z_hat,dy_hat,dz_hat\n";
    for (int i = 0; i < o.grid; ++i) {
        const double yh = -o.extent + 2 * o.extent * i / (o.grid - 1);
        for (int j = 0; j < o.grid; ++j) {
            const double zh = -o.extent + 2 * o.extent * j / (o.grid - 1);
            const auto d = layer_rhs(q, ry, rz, {yh, zh});
            out << fmt17(yh) << ',' << fmt17(zh) << ',' << fmt17(d[0]) << ',' << fmt17(d[1]) << '\n';
        }
    }
    return exit_code::ok;
}

// ---- scan ----

struct ScanOpts {
    std::string system;
    std::optional<double> x_lo, x_hi;
    int n = 200;
    bool refine = false;
};

Json diag_json(const Diagnostics& d) {
    Json j = Json::object();
    for (const auto& [k, v] : d)
        std::visit([&](const auto& val) { j[k] = val; }, v);
    return j;
}

int cmd_scan(const ScanOpts& o, std::ostream& out) {
    const auto sys = load(o.system).sys;
    const double lo = o.x_lo.value_or(sys.x_min), hi = o.x_hi.value_or(sys.x_max);
    if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "scan range must satisfy x-lo < x-hi");
    if (o.n < 3) throw Error(ErrorCode::InvalidArgument, "--n must be >= 3");
    const auto events = o.refine ? scan_refined(sys, lo, hi, o.n) : scan(sys, lo, hi, o.n);
    Json arr = Json::array();
    for (const auto& e : events) {
        Json j;
        j["kind"] = to_string(e.kind);
        j["x_star"] = e.x_star;
        j["bracket"] = Json::array({e.x_lo, e.x_hi});
        Json d = diag_json(e.diagnostics);
        if (e.kind == EventKind::EdgeCrossing) d["edge"] = e.edge;
        j["diagnostics"] = d;
        arr.push_back(j);
    }
    out << io::dump(arr) << "\n";
    return exit_code::ok;
}

// ---- converge ----

struct ConvergeOpts {
    std::string system;
    std::vector<double> eps_list;
    ConvergenceSetup setup;
    std::string reg_y = "tanh", reg_z = "tanh";
};

int cmd_converge(const ConvergeOpts& o, std::ostream& out, std::ostream& err) {
    if (o.eps_list.empty()) throw Error(ErrorCode::InvalidArgument, "--eps-list needs at least one value");
    if (!(o.setup.t_end > 0)) throw Error(ErrorCode::InvalidArgument, "--t-end must be positive");
    const auto ry = reg_or_throw(o.reg_y), rz = reg_or_throw(o.reg_z);
    const auto sys = load(o.system).sys;
    std::vector<ConvergenceRow> rows;
    try {
        rows = convergence_experiment(sys, ry, rz, o.setup, o.eps_list);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::PreconditionFailed) {
            err << "error: no attracting sliding solution\n";
            return exit_code::no_attracting;
        }
        throw;
    }
    const bool with_order = rows.size() >= 2;
    out << (with_order ? "eps,error,order\n" : "eps,error\n");
    bool failed = false;
    for (const auto& r : rows) {
        out << fmt17(r.eps) << ',' << fmt17(r.error);
        if (with_order) out << ',' << (r.order ? fmt17(*r.order) : "");
        out << '\n';
        if (r.status != OdeStatus::Ok) {
            err << "error: eps=" << fmt17(r.eps) << ": " << to_string(r.status) << "\n";
            failed = true;
        }
    }
    return failed ? exit_code::solver_failure : exit_code::ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sliding analysis on the intersection of two switching planes", "filippov_lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    ClassifyOpts co;
    auto* classify = app.add_subcommand("classify", "quadrilateral class, sliding solutions and stability at x");
    classify->add_option("--system", co.system, "system JSON file")->required();
    classify->add_option("--x", co.x, "point on the intersection line");
    classify->add_option("--reg-y", co.reg_y, "regularization for y (tanh, arctan, st)");
    classify->add_option("--reg-z", co.reg_z, "regularization for z (tanh, arctan, st)");
    classify->add_flag("--json", co.json, "emit a JSON report envelope");

    SimulateOpts so;
    auto* simulate = app.add_subcommand("simulate", "integrate the regularized system, CSV t,x,y,z");
    simulate->add_option("--system", so.system)->required();
    simulate->add_option("--x0", so.x0)->required();
    simulate->add_option("--y0", so.y0)->required();
    simulate->add_option("--z0", so.z0)->required();
    simulate->add_option("--eps", so.eps)->required();
    simulate->add_option("--reg-y", so.reg_y)->required();
    simulate->add_option("--reg-z", so.reg_z)->required();
    simulate->add_option("--t-end", so.t_end)->required();
    simulate->add_option("--rtol", so.rtol);
    simulate->add_option("--atol", so.atol);
    simulate->add_option("--samples", so.samples);
    simulate->add_option("--out", so.out_path, "write CSV here instead of stdout");

    LayerOpts lo;
    auto* layer = app.add_subcommand("layer", "layer-problem vector field on a grid, CSV");
    layer->add_option("--system", lo.system)->required();
    layer->add_option("--x", lo.x)->required();
    layer->add_option("--grid", lo.grid);
    layer->add_option("--reg-y", lo.reg_y);
    layer->add_option("--reg-z", lo.reg_z);
    layer->add_option("--extent", lo.extent, "half-width L of the grid square [-L, L]^2");

    ScanOpts sc;
    auto* scanc = app.add_subcommand("scan", "bifurcation events along x, JSON array");
    scanc->add_option("--system", sc.system)->required();
    scanc->add_option("--x-lo", sc.x_lo);
    scanc->add_option("--x-hi", sc.x_hi);
    scanc->add_option("--n", sc.n);
    scanc->add_flag("--refine", sc.refine, "double n until the event set is stable");

    ConvergeOpts cv;
    auto* converge = app.add_subcommand("converge", "eps -> 0 convergence of x(t) to the reduced flow, CSV");
    converge->add_option("--system", cv.system)->required();
    converge->add_option("--eps-list", cv.eps_list)->required()->delimiter(',');
    converge->add_option("--x0", cv.setup.x0);
    converge->add_option("--y-hat0", cv.setup.y_hat0);
    converge->add_option("--z-hat0", cv.setup.z_hat0);
    converge->add_option("--t-end", cv.setup.t_end);
    converge->add_option("--reg-y", cv.reg_y);
    converge->add_option("--reg-z", cv.reg_z);
    converge->add_option("--rtol", cv.setup.rtol);
    converge->add_option("--atol", cv.setup.atol);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::invalid_args;
    }

    try {
        if (*classify) return cmd_classify(co, out);
        if (*simulate) return cmd_simulate(so, out, err);
        if (*layer) return cmd_layer(lo, out);
        if (*scanc) return cmd_scan(sc, out);
        if (*converge) return cmd_converge(cv, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::ParseError: return exit_code::parse_error;
            case ErrorCode::InvalidArgument:
            case ErrorCode::OutOfRange: return exit_code::invalid_args;
            case ErrorCode::DegenerateQuadrilateral:
            case ErrorCode::DegenerateBoth: return exit_code::degenerate;
            default: return exit_code::solver_failure;
        }
    }
    return exit_code::invalid_args;
}

}  // namespace flab::cli
