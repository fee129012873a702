#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "filippov_lab/canopy.hpp"
#include "filippov_lab/pws_model.hpp"

namespace flab {

enum class EventKind { EdgeCrossing, ParabolicTangency, CountChange, CanardCandidate, DegeneracyEncountered };

using DiagValue = std::variant<double, bool, int, std::vector<int>>;
using Diagnostics = std::vector<std::pair<std::string, DiagValue>>;

struct CanardChecks {
    bool a = false, b = false, c = false;
    double psi_star = 0, phi_star = 0;
    double eig_small = 0, eig_large = 0;
    double speed = 0, dspeed = 0, ddelta = 0;
    bool all() const { return a && b && c; }
};

struct BifurcationEvent {
    EventKind kind = EventKind::CountChange;
    double x_star = 0, x_lo = 0, x_hi = 0;
    int edge = 0;                       // EdgeCrossing: 1-based edge X~_i X~_i+1
    int count_from = 0, count_to = 0;   // solution counts at the coarse bracket ends
    std::optional<CanardChecks> canard;
    Diagnostics diagnostics;
};

struct MonitorSample {
    double x = 0;
    std::array<double, 4> d{};  // det(X~_i X~_i+1)
    double Delta = 0;
    int count = 0;
    bool degenerate = false;
};

MonitorSample monitor_at(const PwsSystem& sys, double x);
std::vector<MonitorSample> sample_monitors(const PwsSystem& sys, const std::vector<double>& xs);
std::vector<MonitorSample> sample_monitors_serial(const PwsSystem& sys, const std::vector<double>& xs);

std::vector<BifurcationEvent> scan(const PwsSystem& sys, double x_lo, double x_hi, int n);
// Doubles n until the event set is unchanged on two successive doublings.
std::vector<BifurcationEvent> scan_refined(const PwsSystem& sys, double x_lo, double x_hi, int n);

CanardChecks canard_candidate(const PwsSystem& sys, const BifurcationEvent& event);

struct EquatorRoot {
    double rho;
    double eigenvalue;
    bool hyperbolic;
    bool stable;
};

struct EquatorDiagnostic {
    int index;  // 1-based corner whose (beta, gamma) pair is used
    std::vector<EquatorRoot> roots;
};

std::array<EquatorDiagnostic, 4> equator_equilibria(const QuadCorners& q);

// Origin lies on segment [a, b] within 1e-8 of its length.
bool origin_on_segment(const Vec2& a, const Vec2& b);
double origin_segment_distance(const Vec2& a, const Vec2& b);

const char* to_string(EventKind k);

}  // namespace flab
