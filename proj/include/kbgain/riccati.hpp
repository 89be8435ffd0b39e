#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "kbgain/model.hpp"

namespace kbgain {

// Covariance path of dX/dt = AX + XA' - XUX + BB' under a gain schedule,
// with the cost components of the weighted MSE/information objective.
struct RiccatiTrajectory {
    std::vector<double> times;
    std::vector<Matrix> X;
    double mse_integral = 0.0;  // integral of Tr(X)
    double mi = 0.0;            // 1/2 * integral of Tr(U X), nats
    double cost = 0.0;          // mse_integral + 2*alpha*mi
};

struct CostBreakdown {
    double mse_integral = 0.0;
    double mi = 0.0;
    double cost = 0.0;
};

// Fixed-step RK4 with steps aligned to schedule breakpoints (each schedule
// interval gets an even number of uniform steps, so no step straddles a
// control discontinuity and composite Simpson applies on the same grid).
// dt is a target step; pass <= 0 for the default (t1-t0)/4096.
RiccatiTrajectory integrate_riccati(const LtiSystem& system, const HorizonSpec& horizon,
                                    const GainSchedule& schedule, double dt = 0.0);

CostBreakdown evaluate_cost(const LtiSystem& system, const HorizonSpec& horizon,
                            const GainSchedule& schedule, double dt = 0.0);

// CSV export: t, row-major upper triangle of X, Tr(X), Tr(UX).
void trajectory_to_csv(const RiccatiTrajectory& trajectory, const GainSchedule& schedule,
                       std::ostream& out);

// Scalar fast path used by the brute-force control search, where the matrix
// integrator would dominate the budget. Same grid rules as integrate_riccati;
// cross-checked against it by tests.
namespace scalar {

struct Segment {
    double length = 0.0;
    double u = 0.0;
};

CostBreakdown evaluate_cost(double a, double x0, double alpha, std::span<const Segment> segments,
                            double dt);

} // namespace scalar

} // namespace kbgain
