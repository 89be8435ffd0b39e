#pragma once

#include <vector>

#include "kbgain/linalg.hpp"

namespace kbgain {

// Source model dx = A x dt + B dw with A Hurwitz and B nonsingular.
struct LtiSystem {
    Matrix A;
    Matrix B;
    int n = 0;
};

// Finite-horizon problem data: interval, initial covariance, trade-off weight
// alpha and gain bound gamma (U = C'C constrained to 0 <= U <= gamma*I).
struct HorizonSpec {
    double t0 = 0.0;
    double t1 = 1.0;
    Matrix X0;
    double alpha = 1.0;
    double gamma = 1.0;
};

// Piecewise-constant control U_t on [t0, t1]. breakpoints.front() = t0,
// breakpoints.back() = t1, one value per interval.
struct GainSchedule {
    std::vector<double> breakpoints;
    std::vector<Matrix> values;

    int num_intervals() const { return static_cast<int>(values.size()); }
    // Index of the interval containing t (right-open; the last interval is closed).
    int interval_at(double t) const;
    const Matrix& value_at(double t) const { return values[interval_at(t)]; }
};

// Stability margin for the Hurwitz check: Re(lambda) < -eps_hurwitz.
inline constexpr double kHurwitzEps = 1e-9;

// Checks A Hurwitz (to kHurwitzEps) and B nonsingular; throws NotHurwitz,
// SingularB or DimensionMismatch.
LtiSystem validate_system(const Matrix& a, const Matrix& b);

// U = C'C, symmetrized after the product.
Matrix gain_to_u(const Matrix& c);

// Validates t1 > t0, X0 symmetric PSD (to eig tolerance), alpha > 0, gamma > 0.
void check_horizon(const LtiSystem& system, const HorizonSpec& horizon);

// Validates breakpoint ordering, coverage of [t0, t1] and 0 <= U <= gamma*I
// per value (eigenvalues within [-tol, gamma+tol]).
void check_schedule(const LtiSystem& system, const HorizonSpec& horizon,
                    const GainSchedule& schedule);

// Single-interval schedule with constant U on [t0, t1].
GainSchedule constant_schedule(const HorizonSpec& horizon, const Matrix& u);

// Piecewise-constant schedule from interior switch times and per-segment values
// (values.size() == switch_times.size() + 1).
GainSchedule schedule_from_switches(const HorizonSpec& horizon,
                                    const std::vector<double>& switch_times,
                                    const std::vector<Matrix>& values);

} // namespace kbgain
