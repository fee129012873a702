#include "filippov_lab/pws_model.hpp"

#include <cmath>
#include <utility>

namespace flab {

const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidIndex: return "InvalidIndex";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NotSlidingRegion: return "NotSlidingRegion";
        case ErrorCode::DegenerateQuadrilateral: return "DegenerateQuadrilateral";
        case ErrorCode::DegenerateBoth: return "DegenerateBoth";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NewtonDivergence: return "NewtonDivergence";
        case ErrorCode::TooManyRoots: return "TooManyRoots";
        case ErrorCode::NoQualifyingEdge: return "NoQualifyingEdge";
        case ErrorCode::PreconditionFailed: return "PreconditionFailed";
        case ErrorCode::InternalError: return "InternalError";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "?";
}

const char* to_string(Codim1Kind k) {
    switch (k) {
        case Codim1Kind::Crossing: return "crossing";
        case Codim1Kind::Sliding: return "sliding";
        case Codim1Kind::Fold: return "fold";
    }
    return "?";
}

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient list");
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PwsSystem::PwsSystem(std::string n, std::array<FieldTriple, 4> f, double lo, double hi)
    : name(std::move(n)), fields(std::move(f)), x_min(lo), x_max(hi) {
    if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "x_domain must satisfy lo <= hi");
}

QuadCorners QuadCorners::constant(const std::array<Vec2, 4>& xt, std::array<double, 4> alpha) {
    QuadCorners q;
    q.xt = xt;
    q.alpha = alpha;
    return q;
}

static void check_index(int i) {
    if (i < 1 || i > 4) throw Error(ErrorCode::InvalidIndex, "field index must be in 1..4");
}

FieldValue eval_field(const PwsSystem& sys, int i, double x) {
    check_index(i);
    const auto& f = sys.fields[i - 1];
    return {f.alpha(x), f.beta(x), f.gamma(x), !sys.in_domain(x)};
}

QuadrantResult select_quadrant(double y, double z) {
    if (y == 0.0 && z == 0.0) return {false, 0, Plane::Lambda};
    if (y == 0.0) return {false, 0, Plane::Pi_f};
    if (z == 0.0) return {false, 0, Plane::Pi_g};
    if (y > 0) return {true, z > 0 ? 1 : 4, Plane::Lambda};
    return {true, z > 0 ? 2 : 3, Plane::Lambda};
}

// Pi_i separates quadrants i and i+1. Pi_1, Pi_3 lie in y=0 (normal component beta),
// Pi_2, Pi_4 lie in z=0 (normal component gamma).
static bool normal_is_beta(int i) { return i == 1 || i == 3; }

static std::pair<double, double> normals(const PwsSystem& sys, int i, double x) {
    auto a = eval_field(sys, i, x);
    auto b = eval_field(sys, i % 4 + 1, x);
    return normal_is_beta(i) ? std::pair{a.beta, b.beta} : std::pair{a.gamma, b.gamma};
}

Codim1Kind classify_codim1(const PwsSystem& sys, int i, double x) {
    check_index(i);
    auto [ni, nj] = normals(sys, i, x);
    double p = ni * nj;
    if (std::abs(p) <= tol::fold) return Codim1Kind::Fold;
    return p > 0 ? Codim1Kind::Crossing : Codim1Kind::Sliding;
}

Codim1Sliding filippov_codim1(const PwsSystem& sys, int i, double x) {
    if (classify_codim1(sys, i, x) != Codim1Kind::Sliding)
        throw Error(ErrorCode::NotSlidingRegion, "Pi_" + std::to_string(i) + " is not sliding at this x");
    auto [ni, nj] = normals(sys, i, x);
    double s = nj / (nj - ni);
    auto a = eval_field(sys, i, x);
    auto b = eval_field(sys, i % 4 + 1, x);
    Vec3 v{s * a.alpha + (1 - s) * b.alpha, s * a.beta + (1 - s) * b.beta,
           s * a.gamma + (1 - s) * b.gamma};
    return {s, v, ni < 0 && nj > 0};
}

QuadCorners project(const PwsSystem& sys, double x) {
    QuadCorners q;
    q.x = x;
    for (int i = 0; i < 4; ++i) {
        const auto& f = sys.fields[i];
        q.alpha[i] = f.alpha(x);
        q.xt[i] = {f.beta(x), f.gamma(x)};
    }
    return q;
}

PwsSystem constant_system(const std::string& name, const std::array<Vec2, 4>& xt,
                          std::array<double, 4> alpha, double x_min, double x_max) {
    std::array<FieldTriple, 4> f;
    for (int i = 0; i < 4; ++i)
        f[i] = {Polynomial({alpha[i]}), Polynomial({xt[i][0]}), Polynomial({xt[i][1]})};
    return PwsSystem(name, f, x_min, x_max);
}

}  // namespace flab
