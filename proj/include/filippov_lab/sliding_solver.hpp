#pragma once

#include <vector>

#include "filippov_lab/canopy.hpp"
#include "filippov_lab/regularization.hpp"

namespace flab {

enum class Branch { Plus, Minus, Single };

struct SlidingSolution {
    double sigma_psi = 0, sigma_phi = 0;
    double psi_star = 0, phi_star = 0;
    std::array<double, 4> nu{};
    double speed = 0;
    Branch branch = Branch::Single;
    bool on_parabolic_line = false;
};

enum class RejectReason { OutsideSquare, BoundaryGrazing, SigmaPsiDenominatorZero };

struct RejectedCandidate {
    double sigma_psi, sigma_phi;  // sigma_psi is NaN for SigmaPsiDenominatorZero
    Branch branch;
    RejectReason reason;
};

struct SolveResult {
    std::vector<SlidingSolution> solutions;
    std::vector<RejectedCandidate> rejected;
};

// Closed-form admissible sliding pairs. Throws DegenerateBoth.
SolveResult solve_sigmas(const QuadCorners& q);

std::array<double, 4> nu_coefficients(double sigma_psi, double sigma_phi);
double sliding_speed(const QuadCorners& q, const std::array<double, 4>& nu);

struct CriticalPoint {
    double x, y_hat, z_hat;
};

CriticalPoint critical_manifold_point(const SlidingSolution& sol, const RegFunction& reg_y,
                                      const RegFunction& reg_z, double x);

// Brute-force roots of F~ on (-1,1)^2: sign-change cells of an n x n grid, refined by Newton.
// Output sorted by psi then phi.
struct OracleResult {
    std::vector<Vec2> roots;
    int newton_failures = 0;
};

OracleResult oracle_roots(const QuadCorners& q, int n);
OracleResult oracle_roots_serial(const QuadCorners& q, int n);

const char* to_string(Branch b);
const char* to_string(RejectReason r);

}  // namespace flab
