#include "filippov_lab/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>

namespace flab {

int worker_count() {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("FILIPPOV_LAB_THREADS")) {
        int cap = 0;
        auto [p, ec] = std::from_chars(env, env + std::strlen(env), cap);
        if (ec == std::errc() && cap > 0) n = std::min(n, cap);
    }
    return std::max(n, 1);
}

}  // namespace flab
