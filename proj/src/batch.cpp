#include "filippov_lab/batch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "filippov_lab/canopy.hpp"
#include "filippov_lab/parallel.hpp"
#include "filippov_lab/sliding_solver.hpp"

namespace flab {

CrossCheck cross_check(const QuadCorners& q, int grid_n) {
    CrossCheck c;
    OracleResult orc;
    try {
        orc = oracle_roots_serial(q, grid_n);
        c.oracle_count = static_cast<int>(orc.roots.size());
    } catch (const Error&) {
        c.oracle_count = -1;
    }
    c.newton_failures = orc.newton_failures;

    SolveResult sr;
    try {
        sr = solve_sigmas(q);
    } catch (const Error&) {
        c.solver_error = true;
    }
    c.closed_count = static_cast<int>(sr.solutions.size());
    for (const auto& s : sr.solutions) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : orc.roots) {
            const double e = std::max(std::abs(s.sigma_psi - (1 + r[0]) / 2), std::abs(s.sigma_phi - (1 + r[1]) / 2));
            best = std::min(best, e);
        }
        c.max_sigma_error = std::max(c.max_sigma_error, best);
    }
    try {
        c.location_count = origin_location(q).count();
    } catch (const Error&) {
        c.location_count = -1;
    }
    return c;
}

std::vector<CrossCheck> cross_check_batch_serial(const std::vector<QuadCorners>& qs, int grid_n) {
    std::vector<CrossCheck> out;
    out.reserve(qs.size());
    for (const auto& q : qs) out.push_back(cross_check(q, grid_n));
    return out;
}

std::vector<CrossCheck> cross_check_batch(const std::vector<QuadCorners>& qs, int grid_n) {
    std::vector<CrossCheck> out(qs.size());
    const long n = static_cast<long>(qs.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_count())
    for (long i = 0; i < n; ++i) out[i] = cross_check(qs[i], grid_n);
    return out;
}

}  // namespace flab
