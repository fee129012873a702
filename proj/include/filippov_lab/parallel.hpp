#pragma once

namespace flab {

// OpenMP worker count, capped by FILIPPOV_LAB_THREADS when set to a positive integer.
int worker_count();

}  // namespace flab
