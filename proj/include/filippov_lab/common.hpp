#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flab {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

// Row-major 2x2 matrix: m[r][c].
struct Mat2 {
    std::array<std::array<double, 2>, 2> m{};

    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    double trace() const { return m[0][0] + m[1][1]; }
    Vec2 col(int c) const { return {m[0][c], m[1][c]}; }
    static Mat2 from_cols(const Vec2& c0, const Vec2& c1) {
        Mat2 a;
        a.m[0] = {c0[0], c1[0]};
        a.m[1] = {c0[1], c1[1]};
        return a;
    }
};

namespace tol {
inline constexpr double fold = 1e-10;
inline constexpr double res = 1e-12;
inline constexpr double deg = 1e-9;
inline constexpr double root = 1e-10;
inline constexpr double bnd = 1e-9;
}  // namespace tol

inline double det2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
inline Vec2 sub(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

// 0-based cyclic successor / predecessor of corner index.
inline int next4(int i) { return (i + 1) & 3; }
inline int prev4(int i) { return (i + 3) & 3; }

enum class ErrorCode {
    InvalidIndex,
    InvalidArgument,
    NotSlidingRegion,
    DegenerateQuadrilateral,
    DegenerateBoth,
    OutOfRange,
    NewtonDivergence,
    TooManyRoots,
    NoQualifyingEdge,
    PreconditionFailed,
    InternalError,
    ParseError,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace flab
