#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filippov_lab/dopri5.hpp"
#include "filippov_lab/pws_model.hpp"
#include "filippov_lab/regularization.hpp"
#include "filippov_lab/sliding_solver.hpp"

namespace flab {

struct LayerState {
    double y_hat = 0, z_hat = 0;
};

template <std::size_t N>
struct Trajectory {
    std::vector<double> times;
    std::vector<std::array<double, N>> states;
    double eps = 0;  // 0 for layer runs
    std::string reg_y, reg_z;
    OdeStats stats;
    OdeStatus status = OdeStatus::Ok;
};

Vec2 layer_rhs(const QuadCorners& q, const RegFunction& reg_y, const RegFunction& reg_z, const LayerState& s);
double reduced_rhs(const QuadCorners& q, const SlidingSolution& sol);

// n >= 2 equally spaced times on [t0, t_end] with both ends included.
std::vector<double> uniform_samples(double t0, double t_end, int n);

Trajectory<3> integrate_regularized(const PwsSystem& sys, const RegFunction& reg_y, const RegFunction& reg_z,
                                    double eps, const Vec3& p0, double t_end, double rtol, double atol,
                                    const std::vector<double>& sample_times);

Trajectory<2> integrate_layer(const QuadCorners& q, const RegFunction& reg_y, const RegFunction& reg_z,
                              const LayerState& s0, double tau_end, const std::vector<double>& sample_times,
                              double rtol = 1e-10, double atol = 1e-12);

struct ConvergenceRow {
    double eps;
    double error;
    std::optional<double> order;  // from the previous row
    OdeStatus status;
};

struct ConvergenceSetup {
    double x0 = 0;
    double y_hat0 = 1, z_hat0 = 1;  // fast variables in stretched coordinates
    double t_end = 1;
    double rtol = 1e-10, atol = 1e-12;
    int samples = 401;
};

// The unique sliding solution at x, if it exists and is attracting for this regularization pair.
std::optional<SlidingSolution> unique_attracting(const QuadCorners& q, const RegFunction& reg_y,
                                                 const RegFunction& reg_z);

// Sup-norm error of x(t) against the reduced flow after discarding t < 10 eps |ln eps|.
// Throws PreconditionFailed when the sliding at x0 is not unique and attracting.
std::vector<ConvergenceRow> convergence_experiment(const PwsSystem& sys, const RegFunction& reg_y,
                                                   const RegFunction& reg_z, const ConvergenceSetup& setup,
                                                   const std::vector<double>& eps_list);

const char* to_string(OdeStatus s);

}  // namespace flab
