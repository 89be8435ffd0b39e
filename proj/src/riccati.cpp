#include "kbgain/riccati.hpp"

#include <cmath>
#include <ostream>

namespace kbgain {

namespace {

Matrix riccati_rhs(const Matrix& a, const Matrix& bbt, const Matrix& x, const Matrix& u) {
    return symmetrize(a * x + x * a.transpose() - x * u * x + bbt);
}

int even_step_count(double length, double dt) {
    int steps = static_cast<int>(std::ceil(length / dt));
    steps = std::max(steps, 2);
    if (steps % 2 != 0) ++steps;
    return steps;
}

void check_covariance(const Matrix& x) {
    const double scale = std::max(1.0, x.norm());
    if (sym_eig(x).eigenvalues.minCoeff() < -1e-6 * scale) {
        throw NegativeCovariance("integrate_riccati: covariance lost PSD-ness; reduce dt");
    }
}

} // namespace

RiccatiTrajectory integrate_riccati(const LtiSystem& system, const HorizonSpec& horizon,
                                    const GainSchedule& schedule, double dt) {
    check_horizon(system, horizon);
    check_schedule(system, horizon, schedule);
    if (dt <= 0.0) dt = (horizon.t1 - horizon.t0) / 4096.0;

    const Matrix bbt = system.B * system.B.transpose();
    RiccatiTrajectory traj;
    traj.times.push_back(horizon.t0);
    traj.X.push_back(symmetrize(horizon.X0));

    double mse = 0.0;
    double tr_ux = 0.0;
    for (int seg = 0; seg < schedule.num_intervals(); ++seg) {
        const double seg_begin = schedule.breakpoints[seg];
        const double seg_end = schedule.breakpoints[seg + 1];
        const Matrix& u = schedule.values[seg];
        const int steps = even_step_count(seg_end - seg_begin, dt);
        const double h = (seg_end - seg_begin) / steps;

        // Simpson weights over this segment: h/3 * (1, 4, 2, ..., 4, 1).
        double seg_mse = traj.X.back().trace();
        double seg_ux = (u * traj.X.back()).trace();
        Matrix x = traj.X.back();
        for (int k = 0; k < steps; ++k) {
            const Matrix k1 = riccati_rhs(system.A, bbt, x, u);
            const Matrix k2 = riccati_rhs(system.A, bbt, x + 0.5 * h * k1, u);
            const Matrix k3 = riccati_rhs(system.A, bbt, x + 0.5 * h * k2, u);
            const Matrix k4 = riccati_rhs(system.A, bbt, x + h * k3, u);
            x = symmetrize(x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));

            const double w = (k + 1 == steps) ? 1.0 : (k % 2 == 0 ? 4.0 : 2.0);
            seg_mse += w * x.trace();
            seg_ux += w * (u * x).trace();

            if (x.diagonal().minCoeff() < -1e-6 * std::max(1.0, x.norm())) {
                throw NegativeCovariance("integrate_riccati: covariance lost PSD-ness; reduce dt");
            }
            traj.times.push_back(k + 1 == steps ? seg_end : seg_begin + (k + 1) * h);
            traj.X.push_back(x);
        }
        check_covariance(x);
        mse += seg_mse * h / 3.0;
        tr_ux += seg_ux * h / 3.0;
    }
    check_covariance(traj.X.back());

    traj.mse_integral = mse;
    traj.mi = 0.5 * tr_ux;
    traj.cost = traj.mse_integral + 2.0 * horizon.alpha * traj.mi;
    return traj;
}

CostBreakdown evaluate_cost(const LtiSystem& system, const HorizonSpec& horizon,
                            const GainSchedule& schedule, double dt) {
    const RiccatiTrajectory traj = integrate_riccati(system, horizon, schedule, dt);
    return CostBreakdown{traj.mse_integral, traj.mi, traj.cost};
}

void trajectory_to_csv(const RiccatiTrajectory& trajectory, const GainSchedule& schedule,
                       std::ostream& out) {
    const auto n = trajectory.X.empty() ? 0 : trajectory.X.front().rows();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) out << ",X" << i << j;
    }
    out << ",trX,trUX\n";
    out.precision(17);
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        const double t = trajectory.times[k];
        const Matrix& x = trajectory.X[k];
        const Matrix& u = schedule.values[schedule.interval_at(t)];
        out << t;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) out << "," << x(i, j);
        }
        out << "," << x.trace() << "," << (u * x).trace() << "\n";
    }
}

namespace scalar {

CostBreakdown evaluate_cost(double a, double x0, double alpha, std::span<const Segment> segments,
                            double dt) {
    double x = x0;
    double mse = 0.0;
    double weighted_ux = 0.0;
    for (const Segment& seg : segments) {
        if (seg.length <= 0.0) continue;
        const int steps = even_step_count(seg.length, dt);
        const double h = seg.length / steps;
        const double u = seg.u;

        double seg_mse = x;
        double seg_ux = u * x;
        for (int k = 0; k < steps; ++k) {
            const double k1 = 2.0 * a * x - u * x * x + 1.0;
            const double x2 = x + 0.5 * h * k1;
            const double k2 = 2.0 * a * x2 - u * x2 * x2 + 1.0;
            const double x3 = x + 0.5 * h * k2;
            const double k3 = 2.0 * a * x3 - u * x3 * x3 + 1.0;
            const double x4 = x + h * k3;
            const double k4 = 2.0 * a * x4 - u * x4 * x4 + 1.0;
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

            const double w = (k + 1 == steps) ? 1.0 : (k % 2 == 0 ? 4.0 : 2.0);
            seg_mse += w * x;
            seg_ux += w * u * x;
        }
        mse += seg_mse * h / 3.0;
        weighted_ux += seg_ux * h / 3.0;
    }
    CostBreakdown cost;
    cost.mse_integral = mse;
    cost.mi = 0.5 * weighted_ux;
    cost.cost = cost.mse_integral + 2.0 * alpha * cost.mi;
    return cost;
}

} // namespace scalar

} // namespace kbgain
