#pragma once

#include <cstdint>
#include <vector>

#include "kbgain/model.hpp"

namespace kbgain {

// Monte-Carlo estimate of the time-integrated filter error against the
// Riccati-predicted value.
struct SimulationReport {
    int num_paths = 0;
    double dt_sim = 0.0;
    std::uint64_t seed = 0;
    double mse_estimate = 0.0;
    double stderr_estimate = 0.0;
    double mse_theory = 0.0;
    double z_score = 0.0;
    std::vector<double> per_path;  // filled only when keep_paths is set
};

struct MseVerdict {
    double estimate = 0.0;
    double stderr_estimate = 0.0;
    double z_score = 0.0;
    bool pass = false;  // |z| <= 3
};

// Simulates the source SDE, the channel and the Kalman-Bucy filter by
// Euler-Maruyama on a shared grid. c_schedule holds the channel gain C_t
// (piecewise constant); the filter uses the theory covariance X_k from
// integrate_riccati on the same grid, so the estimate isolates SDE
// discretization error. The stream is keyed by (seed, path, step): reports
// are bit-identical for a fixed seed regardless of worker count.
SimulationReport simulate_paths(const LtiSystem& system, const HorizonSpec& horizon,
                                const GainSchedule& c_schedule, int num_paths, double dt_sim,
                                std::uint64_t seed, bool keep_paths = false);

MseVerdict estimate_mse(const SimulationReport& report);

} // namespace kbgain
