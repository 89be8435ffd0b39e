#include "kbgain/model.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace kbgain {

namespace {

double psd_tolerance(const Matrix& m) { return 1e-9 * std::max(1.0, m.norm()); }

} // namespace

int GainSchedule::interval_at(double t) const {
    if (breakpoints.size() < 2) {
        throw ScheduleGap("GainSchedule: empty schedule");
    }
    if (t < breakpoints.front() || t > breakpoints.back()) {
        throw ScheduleGap("GainSchedule: time outside schedule span");
    }
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto idx = static_cast<int>(it - breakpoints.begin()) - 1;
    return std::min(idx, num_intervals() - 1);
}

LtiSystem validate_system(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw DimensionMismatch("validate_system: A and B must be square");
    }
    if (a.rows() != b.rows() || a.rows() == 0) {
        throw DimensionMismatch("validate_system: A and B must share dimension");
    }
    if (max_real_eigenvalue(a) >= -kHurwitzEps) {
        throw NotHurwitz("validate_system: A has an eigenvalue with Re >= -1e-9");
    }
    Eigen::JacobiSVD<Matrix> svd(b);
    const double sigma_min = svd.singularValues().minCoeff();
    const double sigma_max = svd.singularValues().maxCoeff();
    if (sigma_min <= 1e-10 * std::max(1.0, sigma_max)) {
        throw SingularB("validate_system: B is singular to rank tolerance");
    }
    return LtiSystem{a, b, static_cast<int>(a.rows())};
}

Matrix gain_to_u(const Matrix& c) {
    if (c.rows() == 0 || c.cols() == 0) {
        throw DimensionMismatch("gain_to_u: empty gain");
    }
    return symmetrize(c.transpose() * c);
}

void check_horizon(const LtiSystem& system, const HorizonSpec& horizon) {
    if (!(horizon.t1 > horizon.t0)) {
        throw InvalidHorizon("horizon: t1 must exceed t0");
    }
    if (!(horizon.alpha > 0.0)) {
        throw InvalidHorizon("horizon: alpha must be positive");
    }
    if (!(horizon.gamma > 0.0)) {
        throw InvalidHorizon("horizon: gamma must be positive");
    }
    if (horizon.X0.rows() != system.n || horizon.X0.cols() != system.n) {
        throw DimensionMismatch("horizon: X0 must be n x n");
    }
    const double tol = psd_tolerance(horizon.X0);
    if ((horizon.X0 - horizon.X0.transpose()).norm() > tol) {
        throw InvalidHorizon("horizon: X0 must be symmetric");
    }
    if (sym_eig(horizon.X0).eigenvalues.minCoeff() < -tol) {
        throw InvalidHorizon("horizon: X0 must be PSD to tolerance");
    }
}

void check_schedule(const LtiSystem& system, const HorizonSpec& horizon,
                    const GainSchedule& schedule) {
    if (schedule.breakpoints.size() < 2 ||
        schedule.values.size() + 1 != schedule.breakpoints.size()) {
        throw InvalidSchedule("schedule: need k+1 breakpoints for k values");
    }
    if (schedule.breakpoints.front() != horizon.t0 || schedule.breakpoints.back() != horizon.t1) {
        throw ScheduleGap("schedule: breakpoints must span [t0, t1]");
    }
    for (std::size_t i = 0; i + 1 < schedule.breakpoints.size(); ++i) {
        if (!(schedule.breakpoints[i] < schedule.breakpoints[i + 1])) {
            throw InvalidSchedule("schedule: breakpoints must be strictly increasing");
        }
    }
    for (const Matrix& u : schedule.values) {
        if (u.rows() != system.n || u.cols() != system.n) {
            throw DimensionMismatch("schedule: values must be n x n");
        }
        const double tol = psd_tolerance(u);
        if ((u - u.transpose()).norm() > tol) {
            throw InvalidSchedule("schedule: values must be symmetric");
        }
        const Vector lambda = sym_eig(u).eigenvalues;
        if (lambda.minCoeff() < -tol || lambda.maxCoeff() > horizon.gamma + tol) {
            throw InvalidSchedule("schedule: values must satisfy 0 <= U <= gamma*I");
        }
    }
}

GainSchedule constant_schedule(const HorizonSpec& horizon, const Matrix& u) {
    return GainSchedule{{horizon.t0, horizon.t1}, {u}};
}

GainSchedule schedule_from_switches(const HorizonSpec& horizon,
                                    const std::vector<double>& switch_times,
                                    const std::vector<Matrix>& values) {
    if (values.size() != switch_times.size() + 1) {
        throw InvalidSchedule("schedule_from_switches: values.size() must be switches + 1");
    }
    GainSchedule schedule;
    schedule.breakpoints.push_back(horizon.t0);
    for (double s : switch_times) schedule.breakpoints.push_back(s);
    schedule.breakpoints.push_back(horizon.t1);
    schedule.values = values;
    for (std::size_t i = 0; i + 1 < schedule.breakpoints.size(); ++i) {
        if (!(schedule.breakpoints[i] < schedule.breakpoints[i + 1])) {
            throw InvalidSchedule("schedule_from_switches: switch times must be interior and ordered");
        }
    }
    return schedule;
}

} // namespace kbgain
