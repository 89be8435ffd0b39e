#include "kbgain/simulate.hpp"

#include <cmath>
#include <thread>

#include "kbgain/riccati.hpp"
#include "kbgain/rng.hpp"

namespace kbgain {

namespace {

GainSchedule u_schedule_from_c(const GainSchedule& c_schedule) {
    GainSchedule u;
    u.breakpoints = c_schedule.breakpoints;
    u.values.reserve(c_schedule.values.size());
    for (const Matrix& c : c_schedule.values) u.values.push_back(gain_to_u(c));
    return u;
}

} // namespace

SimulationReport simulate_paths(const LtiSystem& system, const HorizonSpec& horizon,
                                const GainSchedule& c_schedule, int num_paths, double dt_sim,
                                std::uint64_t seed, bool keep_paths) {
    if (num_paths < 2) {
        throw DimensionMismatch("simulate_paths: need at least 2 paths");
    }
    if (dt_sim <= 0.0) {
        throw InvalidHorizon("simulate_paths: dt_sim must be positive");
    }
    for (const Matrix& c : c_schedule.values) {
        if (c.rows() != system.n || c.cols() != system.n) {
            throw DimensionMismatch("simulate_paths: C values must be n x n");
        }
    }

    const GainSchedule u_schedule = u_schedule_from_c(c_schedule);
    const RiccatiTrajectory traj = integrate_riccati(system, horizon, u_schedule, dt_sim);
    const std::size_t num_steps = traj.times.size() - 1;
    const int n = system.n;

    // Per-step data shared by all paths: gain K_k = X_k C_k', drift C_k.
    std::vector<Matrix> c_at(num_steps);
    std::vector<Matrix> gain_at(num_steps);
    std::vector<double> h_at(num_steps);
    for (std::size_t k = 0; k < num_steps; ++k) {
        const double mid = 0.5 * (traj.times[k] + traj.times[k + 1]);
        const Matrix& c = c_schedule.values[c_schedule.interval_at(mid)];
        c_at[k] = c;
        gain_at[k] = traj.X[k] * c.transpose();
        h_at[k] = traj.times[k + 1] - traj.times[k];
    }
    const Matrix x0_sqrt = sym_sqrt(symmetrize(horizon.X0));

    std::vector<double> path_integral(num_paths, 0.0);
    auto run_path = [&](int path) {
        const std::uint64_t path_key = rng::key3(seed, static_cast<std::uint64_t>(path) + 1, 0);
        Vector x(n), xhat(n), noise(2 * n);
        // x_{t0} ~ N(0, X0); step counter 0 is reserved for the initial draw.
        {
            const std::uint64_t k0 = rng::mix64(path_key);
            for (int i = 0; i < n; i += 2) {
                double z0, z1;
                rng::normal_pair(k0, static_cast<std::uint64_t>(i / 2), z0, z1);
                noise(i) = z0;
                if (i + 1 < n) noise(i + 1) = z1;
            }
            x = x0_sqrt * noise.head(n);
            xhat.setZero();
        }
        double integral = 0.0;
        double err_prev = (x - xhat).squaredNorm();
        for (std::size_t k = 0; k < num_steps; ++k) {
            const std::uint64_t step_key = rng::key3(path_key, k + 1, 0x5eedull);
            for (int i = 0; i < 2 * n; i += 2) {
                double z0, z1;
                rng::normal_pair(step_key, static_cast<std::uint64_t>(i / 2), z0, z1);
                noise(i) = z0;
                if (i + 1 < 2 * n) noise(i + 1) = z1;
            }
            const double h = h_at[k];
            const double sqrt_h = std::sqrt(h);
            const Matrix& c = c_at[k];
            const Vector dw = sqrt_h * noise.head(n);
            const Vector dv = sqrt_h * noise.tail(n);

            const Vector dy = c * x * h + dv;
            const Vector innovation = dy - c * xhat * h;
            x += system.A * x * h + system.B * dw;
            xhat += system.A * xhat * h + gain_at[k] * innovation;

            const double err = (x - xhat).squaredNorm();
            integral += 0.5 * h * (err_prev + err);
            err_prev = err;
        }
        path_integral[path] = integral;
    };

    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, 8);
    if (workers <= 1 || num_paths < 64) {
        for (int p = 0; p < num_paths; ++p) run_path(p);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int p = static_cast<int>(w); p < num_paths; p += static_cast<int>(workers)) {
                    run_path(p);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // Reduce in path-index order so the report is independent of scheduling.
    double sum = 0.0;
    for (int p = 0; p < num_paths; ++p) sum += path_integral[p];
    const double mean = sum / num_paths;
    double ss = 0.0;
    for (int p = 0; p < num_paths; ++p) {
        const double d = path_integral[p] - mean;
        ss += d * d;
    }
    const double variance = ss / (num_paths - 1);
    const double stderr_est = std::sqrt(variance / num_paths);

    SimulationReport report;
    report.num_paths = num_paths;
    report.dt_sim = dt_sim;
    report.seed = seed;
    report.mse_estimate = mean;
    report.stderr_estimate = stderr_est;
    report.mse_theory = traj.mse_integral;
    report.z_score = (mean - traj.mse_integral) / stderr_est;
    if (keep_paths) report.per_path = std::move(path_integral);
    return report;
}

MseVerdict estimate_mse(const SimulationReport& report) {
    MseVerdict verdict;
    verdict.estimate = report.mse_estimate;
    verdict.stderr_estimate = report.stderr_estimate;
    verdict.z_score = (report.mse_estimate - report.mse_theory) / report.stderr_estimate;
    verdict.pass = std::abs(verdict.z_score) <= 3.0;
    return verdict;
}

} // namespace kbgain
