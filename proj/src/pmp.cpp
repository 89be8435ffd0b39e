#include "kbgain/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kbgain/riccati.hpp"

namespace kbgain {

namespace {

Matrix riccati_rhs(const Matrix& a, const Matrix& bbt, const Matrix& x, const Matrix& u) {
    return symmetrize(a * x + x * a.transpose() - x * u * x + bbt);
}

// dP/dt = PXU + UXP - PA - A'P - I - alpha*U
Matrix costate_rhs(const Matrix& a, double alpha, const Matrix& p, const Matrix& x,
                   const Matrix& u) {
    const Matrix pxu = p * x * u;
    return symmetrize(pxu + pxu.transpose() - p * a - a.transpose() * p -
                      Matrix::Identity(p.rows(), p.cols()) - alpha * u);
}

} // namespace

HamiltonianMin hamiltonian_argmin(const Matrix& m, double gamma) {
    const double scale = std::max(1.0, m.norm());
    if ((m - m.transpose()).norm() > 1e-9 * scale) {
        throw AsymmetricInput("hamiltonian_argmin: M must be symmetric");
    }
    const double eps_zero = 1e-9 * scale;
    const SymEig eig = sym_eig(m);
    const auto n = m.rows();
    Matrix u = Matrix::Zero(n, n);
    double min_value = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (eig.eigenvalues(i) < -eps_zero) {
            const Vector q = eig.eigenvectors.col(i);
            u += gamma * q * q.transpose();
            min_value += gamma * eig.eigenvalues(i);
        }
    }
    return HamiltonianMin{symmetrize(u), min_value};
}

PmpCertificate integrate_canonical(const LtiSystem& system, const HorizonSpec& horizon,
                                   const GainSchedule& schedule, double dt) {
    const RiccatiTrajectory traj = integrate_riccati(system, horizon, schedule, dt);
    const std::size_t num_nodes = traj.times.size();
    const Matrix bbt = system.B * system.B.transpose();
    const int n = system.n;

    std::vector<Matrix> p(num_nodes);
    p[num_nodes - 1] = Matrix::Zero(n, n);

    for (std::size_t k = num_nodes - 1; k > 0; --k) {
        const double h = traj.times[k] - traj.times[k - 1];
        const double mid = 0.5 * (traj.times[k - 1] + traj.times[k]);
        const Matrix& u = schedule.values[schedule.interval_at(mid)];

        const Matrix& x_right = traj.X[k];
        const Matrix& x_left = traj.X[k - 1];
        // Cubic Hermite midpoint using the exact ODE slopes at the nodes.
        const Matrix xd_left = riccati_rhs(system.A, bbt, x_left, u);
        const Matrix xd_right = riccati_rhs(system.A, bbt, x_right, u);
        const Matrix x_mid = 0.5 * (x_left + x_right) + (h / 8.0) * (xd_left - xd_right);

        const Matrix k1 = costate_rhs(system.A, horizon.alpha, p[k], x_right, u);
        const Matrix p2 = p[k] - 0.5 * h * k1;
        const Matrix k2 = costate_rhs(system.A, horizon.alpha, p2, x_mid, u);
        const Matrix p3 = p[k] - 0.5 * h * k2;
        const Matrix k3 = costate_rhs(system.A, horizon.alpha, p3, x_mid, u);
        const Matrix p4 = p[k] - h * k3;
        const Matrix k4 = costate_rhs(system.A, horizon.alpha, p4, x_left, u);
        p[k - 1] = symmetrize(p[k] - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }

    PmpCertificate cert;
    cert.times = traj.times;
    cert.P = std::move(p);
    cert.gap.resize(num_nodes);
    double max_gap = 0.0;
    for (std::size_t k = 0; k < num_nodes; ++k) {
        // Right-continuous control at nodes; the final node uses the last segment.
        const double t_eval = (k + 1 < num_nodes)
                                  ? 0.5 * (traj.times[k] + traj.times[k + 1])
                                  : 0.5 * (traj.times[k - 1] + traj.times[k]);
        const Matrix& u = schedule.values[schedule.interval_at(t_eval)];
        const Matrix m =
            symmetrize(horizon.alpha * traj.X[k] - traj.X[k] * cert.P[k] * traj.X[k]);
        const HamiltonianMin hmin = hamiltonian_argmin(m, horizon.gamma);
        cert.gap[k] = (m * u).trace() - hmin.min_value;
        max_gap = std::max(max_gap, cert.gap[k]);
    }
    cert.max_gap = max_gap;
    return cert;
}

void gap_to_csv(const PmpCertificate& certificate, std::ostream& out) {
    out << "t,gap\n";
    out.precision(17);
    for (std::size_t k = 0; k < certificate.times.size(); ++k) {
        out << certificate.times[k] << "," << certificate.gap[k] << "\n";
    }
}

} // namespace kbgain
