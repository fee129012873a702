#pragma once

#include <vector>

#include "filippov_lab/pws_model.hpp"

namespace flab {

// Closed form, determinant criteria and grid oracle evaluated on one corner set.
struct CrossCheck {
    int oracle_count = 0;  // -1 when the oracle found more than two roots
    int closed_count = 0;
    int location_count = -1;  // -1 when origin_location threw
    double max_sigma_error = 0;  // nearest-pair distance, sigma coordinates, inf-norm
    int newton_failures = 0;
    bool solver_error = false;
};

CrossCheck cross_check(const QuadCorners& q, int grid_n);

// Data-parallel over systems; output order follows input order.
std::vector<CrossCheck> cross_check_batch(const std::vector<QuadCorners>& qs, int grid_n);
std::vector<CrossCheck> cross_check_batch_serial(const std::vector<QuadCorners>& qs, int grid_n);

}  // namespace flab
