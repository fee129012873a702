#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace flab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int parse_error = 1;
inline constexpr int invalid_args = 2;
inline constexpr int no_sliding = 3;
inline constexpr int degenerate = 4;
inline constexpr int solver_failure = 5;
inline constexpr int no_attracting = 6;
}  // namespace exit_code

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flab::cli
