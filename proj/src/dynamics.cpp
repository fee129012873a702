#include "filippov_lab/dynamics.hpp"

#include <cmath>
#include <limits>

#include "filippov_lab/canopy.hpp"
#include "filippov_lab/parallel.hpp"
#include "filippov_lab/stability.hpp"

namespace flab {

const char* to_string(OdeStatus s) {
    switch (s) {
        case OdeStatus::Ok: return "ok";
        case OdeStatus::StepSizeUnderflow: return "StepSizeUnderflow";
        case OdeStatus::MaxStepsExceeded: return "MaxStepsExceeded";
    }
    return "?";
}

Vec2 layer_rhs(const QuadCorners& q, const RegFunction& reg_y, const RegFunction& reg_z, const LayerState& s) {
    return f_tilde(q, reg_y.value(s.y_hat), reg_z.value(s.z_hat));
}

double reduced_rhs(const QuadCorners& q, const SlidingSolution& sol) { return sliding_speed(q, sol.nu); }

std::vector<double> uniform_samples(double t0, double t_end, int n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = t0 + (t_end - t0) * i / (n - 1);
    t.back() = t_end;
    return t;
}

Trajectory<3> integrate_regularized(const PwsSystem& sys, const RegFunction& reg_y, const RegFunction& reg_z,
                                    double eps, const Vec3& p0, double t_end, double rtol, double atol,
                                    const std::vector<double>& sample_times) {
    if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
    if (!(t_end > 0)) throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
    if (!(rtol > 0 && atol > 0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    Dopri5<3> ode({.rtol = rtol, .atol = atol});
    auto rhs = [&](double, const Vec3& p, Vec3& dp) { dp = regularized_field(sys, reg_y, reg_z, eps, p); };
    auto r = ode.integrate(rhs, 0.0, p0, t_end, sample_times);
    Trajectory<3> tr;
    tr.times = std::move(r.times);
    tr.states = std::move(r.states);
    tr.eps = eps;
    tr.reg_y = reg_y.name();
    tr.reg_z = reg_z.name();
    tr.stats = r.stats;
    tr.status = r.status;
    return tr;
}

Trajectory<2> integrate_layer(const QuadCorners& q, const RegFunction& reg_y, const RegFunction& reg_z,
                              const LayerState& s0, double tau_end, const std::vector<double>& sample_times,
                              double rtol, double atol) {
    if (!(tau_end > 0)) throw Error(ErrorCode::InvalidArgument, "tau_end must be positive");
    Dopri5<2> ode({.rtol = rtol, .atol = atol});
    auto rhs = [&](double, const Vec2& s, Vec2& ds) { ds = layer_rhs(q, reg_y, reg_z, {s[0], s[1]}); };
    auto r = ode.integrate(rhs, 0.0, Vec2{s0.y_hat, s0.z_hat}, tau_end, sample_times);
    Trajectory<2> tr;
    tr.times = std::move(r.times);
    tr.states = std::move(r.states);
    tr.reg_y = reg_y.name();
    tr.reg_z = reg_z.name();
    tr.stats = r.stats;
    tr.status = r.status;
    return tr;
}

std::optional<SlidingSolution> unique_attracting(const QuadCorners& q, const RegFunction& reg_y,
                                                 const RegFunction& reg_z) {
    SolveResult sr;
    try {
        sr = solve_sigmas(q);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (sr.solutions.size() != 1) return std::nullopt;
    const auto rep = stability_report(q, sr.solutions[0], reg_y, reg_z);
    if (rep.kind.dir != Direction::Attracting) return std::nullopt;
    return sr.solutions[0];
}

std::vector<ConvergenceRow> convergence_experiment(const PwsSystem& sys, const RegFunction& reg_y,
                                                   const RegFunction& reg_z, const ConvergenceSetup& setup,
                                                   const std::vector<double>& eps_list) {
    for (double e : eps_list)
        if (!(e > 0 && e < 1)) throw Error(ErrorCode::InvalidArgument, "eps values must lie in (0, 1)");
    if (!unique_attracting(project(sys, setup.x0), reg_y, reg_z))
        throw Error(ErrorCode::PreconditionFailed, "no attracting sliding solution");

    const auto times = uniform_samples(0.0, setup.t_end, setup.samples);

    // reduced flow x' = speed(x), shared by all eps
    Dopri5<1> red({.rtol = 1e-12, .atol = 1e-14});
    auto red_rhs = [&](double, const std::array<double, 1>& x, std::array<double, 1>& dx) {
        auto sol = unique_attracting(project(sys, x[0]), reg_y, reg_z);
        if (!sol) throw Error(ErrorCode::PreconditionFailed, "no attracting sliding solution along the reduced flow");
        dx[0] = sol->speed;
    };
    const auto xr = red.integrate(red_rhs, 0.0, {setup.x0}, setup.t_end, times);

    const int n = static_cast<int>(eps_list.size());
    std::vector<ConvergenceRow> rows(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (int k = 0; k < n; ++k) {
        const double eps = eps_list[k];
        const Vec3 p0{setup.x0, eps * setup.y_hat0, eps * setup.z_hat0};
        const auto tr = integrate_regularized(sys, reg_y, reg_z, eps, p0, setup.t_end, setup.rtol, setup.atol, times);
        const double window = 10 * eps * std::abs(std::log(eps));
        double err = 0;
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            if (tr.times[i] >= window) err = std::max(err, std::abs(tr.states[i][0] - xr.states[i][0]));
        if (tr.status != OdeStatus::Ok) err = std::numeric_limits<double>::quiet_NaN();
        rows[k] = {eps, err, std::nullopt, tr.status};
    }
    for (int k = 1; k < n; ++k) {
        const double e0 = rows[k - 1].error, e1 = rows[k].error;
        if (e0 > 0 && e1 > 0 && std::isfinite(e0) && std::isfinite(e1) && eps_list[k] != eps_list[k - 1])
            rows[k].order = std::log(e0 / e1) / std::log(eps_list[k - 1] / eps_list[k]);
    }
    return rows;
}

}  // namespace flab
