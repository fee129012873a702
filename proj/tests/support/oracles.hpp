#pragma once

// Test-side references. Nothing here calls into the library's closed forms.

#include <array>
#include <cstdint>
#include <vector>

#include "filippov_lab/pws_model.hpp"

namespace flab::testing {

using Corners = std::array<Vec2, 4>;

// Corner-weight form: (1,1)->X1, (-1,1)->X2, (-1,-1)->X3, (1,-1)->X4.
Vec2 bilinear_eval(const Corners& X, double psi, double phi);

// Zeros of F~ in the open square. F~ is affine in phi for fixed psi, so the zero set
// reduces to det(u(psi), v(psi)) = 0, a quadratic in psi, solved in long double.
std::vector<Vec2> elimination_roots(const Corners& X);

enum class ShapeRef { Convex, Crossed, Concave, Degenerate };

struct ShapeInfo {
    ShapeRef shape;
    int reflex = 0;  // 1-based reflex corner for Concave
};

// From the turn direction at each corner.
ShapeInfo shape_of(const Corners& X, double eps = 1e-9);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);
double min_edge_distance(const Corners& X);

// det(X_i, X_i+1), i = 1..4 cyclic
std::array<double, 4> edge_dets(const Corners& X);

// Discriminant of the sigma_phi quadratic written out from the corners.
double discriminant(const Corners& X);

struct CorpusEntry {
    QuadCorners q;
    ShapeInfo shape;
    int roots = 0;  // elimination_roots count
};

struct CorpusQuota {
    int total = 10000;
    int doubles = 1000;
    int per_class = 500;
    int per_tip = 500;
    double margin = 1e-3;
};

// Uniform corners in [-2,2]^8 passing the margin filters, admitted so that the quotas are met.
std::vector<CorpusEntry> stratified_corpus(std::uint64_t seed, const CorpusQuota& quota);

}  // namespace flab::testing
