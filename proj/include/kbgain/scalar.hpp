#pragma once

#include <string>
#include <vector>

#include "kbgain/model.hpp"
#include "kbgain/riccati.hpp"

namespace kbgain {

// Finite-horizon scalar problem: dx = a x dt + dw, a < 0, weight alpha,
// gain bound gamma, initial variance x0 >= 0.
struct ScalarProblem {
    double a = -1.0;
    double alpha = 1.0;
    double gamma = 1.0;
    double x0 = 0.0;
    double t0 = 0.0;
    double t1 = 1.0;
};

// Three regimes of the phase portrait, split by where the stationary point
// lives: A (free region), B (singular arc admissible), C (saturated region).
struct CaseLabel {
    char label = 'A';
    double threshold_low = 0.0;   // (a + sqrt(a^2+gamma))^2 / gamma^2
    double threshold_high = 0.0;  // 1 / (4 a^2)
};

struct StationaryPoint {
    double x_e = 0.0;
    double p_e = 0.0;
    double u_e = 0.0;
};

// One closed-form segment of an optimal trajectory. Constants are stored as
// (anchor time, anchor value) pairs; evaluation reconstructs the classical
// integration constants on the fly, which keeps exponentials well scaled.
struct ScalarArc {
    enum Kind { kFree, kDwell, kSaturated };  // u = 0 / u = u_star / u = gamma
    Kind kind = kFree;
    double t_begin = 0.0;
    double t_end = 0.0;
    double u = 0.0;
    double x_anchor_t = 0.0;
    double x_anchor_v = 0.0;
    double p_anchor_t = 0.0;
    double p_anchor_v = 0.0;
};

struct ScalarSolution {
    ScalarProblem problem;
    CaseLabel case_label;
    std::string subcase;                // "A-1" .. "C-4"
    std::vector<ScalarArc> arcs;
    std::vector<double> switch_times;   // at most 2, interior, increasing
    std::vector<double> u_values;       // one per arc
    double u_star = 0.0;                // defined only when has_dwell
    bool has_dwell = false;             // singular-arc dwell (duration choice
                                        // follows the t'' construction; the
                                        // dwell itself is non-unique)
    CostBreakdown cost;

    double x_at(double t) const;
    double p_at(double t) const;
    // Closed-form evaluation of one arc, also outside its own span; used to
    // measure the exact jump across a switch.
    double x_of_arc(std::size_t arc_index, double t) const;
    double p_of_arc(std::size_t arc_index, double t) const;
    GainSchedule schedule() const;      // 1x1 matrix values
    HorizonSpec horizon() const;
    LtiSystem system() const;
};

// Independent exhaustive search over piecewise-constant schedules with at
// most two switches on a uniform time grid.
struct OracleResult {
    double best_cost = 0.0;
    std::vector<double> switch_times;
    std::vector<double> u_values;
};

CaseLabel classify_case(const ScalarProblem& problem);

StationaryPoint stationary_point(const ScalarProblem& problem);

// Particular solutions used throughout the construction.
// Free flow (u = 0), x anchored at (s, xs) and p anchored at (s_p, ps):
double region1_x(double a, double t, double s, double xs);
double region1_p(double a, double t, double s_p, double ps);
// Saturated flow (u = gamma), x anchored at (s, xs); the costate additionally
// needs its own anchor (s_p, ps) on the same arc:
double region3_x(double a, double gamma, double t, double s, double xs);
double region3_p(double a, double gamma, double alpha, double t, double s, double xs, double s_p,
                 double ps);

ScalarSolution solve_scalar(const ScalarProblem& problem);

OracleResult brute_force_oracle(const ScalarProblem& problem, int grid_resolution);

// Cost of an arbitrary switch/value description under the oracle's evaluation
// policy (shared grid rules, so analytic and searched costs are comparable).
CostBreakdown oracle_cost(const ScalarProblem& problem, const std::vector<double>& switch_times,
                          const std::vector<double>& u_values);

} // namespace kbgain
