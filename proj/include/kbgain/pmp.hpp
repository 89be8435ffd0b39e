#pragma once

#include <iosfwd>
#include <vector>

#include "kbgain/model.hpp"

namespace kbgain {

// Costate path and pointwise Hamiltonian-gap profile for a candidate schedule.
// A vanishing gap is necessary for optimality; the engine checks candidates,
// it does not synthesize them.
struct PmpCertificate {
    std::vector<double> times;
    std::vector<Matrix> P;      // costate, P(t1) = 0
    std::vector<double> gap;    // Tr(M U) - min_{0<=U<=gamma I} Tr(M U)
    double max_gap = 0.0;
};

struct HamiltonianMin {
    Matrix u_star;      // gamma * projector onto the negative eigenspace of M
    double min_value;   // gamma * sum of eigenvalues below -eps_zero
};

// Exact minimizer of Tr(M U) over {0 <= U <= gamma*I} by the spectral formula.
// Eigenvalues within eps_zero = 1e-9*max(1, ||M||_F) of zero are treated as
// zero and receive no gain (deterministic tie-break on singular arcs).
HamiltonianMin hamiltonian_argmin(const Matrix& m, double gamma);

// Forward covariance via integrate_riccati, backward costate by RK4 on the
// same grid (interior stages use cubic Hermite interpolation of X), then the
// pointwise gap profile.
PmpCertificate integrate_canonical(const LtiSystem& system, const HorizonSpec& horizon,
                                   const GainSchedule& schedule, double dt = 0.0);

inline double pmp_residual(const PmpCertificate& certificate) { return certificate.max_gap; }

// CSV export: t, gap.
void gap_to_csv(const PmpCertificate& certificate, std::ostream& out);

} // namespace kbgain
