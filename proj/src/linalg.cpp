#include "kbgain/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kbgain/model.hpp"

namespace kbgain {

SymEig sym_eig(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("sym_eig: matrix must be square");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("sym_eig: eigensolver failed to converge");
    }
    return SymEig{solver.eigenvalues(), solver.eigenvectors()};
}

double max_real_eigenvalue(const Matrix& a) {
    Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    return solver.eigenvalues().real().maxCoeff();
}

Matrix solve_lyapunov(const Matrix& f, const Matrix& q) {
    const auto n = f.rows();
    if (f.cols() != n || q.rows() != n || q.cols() != n) {
        throw DimensionMismatch("solve_lyapunov: F and Q must be square of equal size");
    }
    // vec(FX + XF') = (I (x) F + F (x) I) vec(X)
    Matrix k = Matrix::Zero(n * n, n * n);
    const Matrix eye = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            k.block(i * n, j * n, n, n) += eye(i, j) * f;      // I (x) F
            k.block(i * n, j * n, n, n) += f(i, j) * eye;      // F (x) I
        }
    }
    Eigen::FullPivLU<Matrix> lu(k);
    if (!lu.isInvertible()) {
        throw ResonantSpectrum("solve_lyapunov: lambda_i(F) + lambda_j(F) = 0");
    }
    Vector rhs(n * n);
    for (Eigen::Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -q.col(j);
    const Vector vx = lu.solve(rhs);
    Matrix x(n, n);
    for (Eigen::Index j = 0; j < n; ++j) x.col(j) = vx.segment(j * n, n);
    return symmetrize(x);
}

Matrix solve_are(const LtiSystem& system, const Matrix& c) {
    const int n = system.n;
    if (c.cols() != n || c.rows() != n) {
        throw DimensionMismatch("solve_are: C must be n x n");
    }
    const Matrix bbt = system.B * system.B.transpose();
    Matrix gain = Matrix::Zero(n, n);  // L0 = 0 is stabilizing since A is Hurwitz
    Matrix x = Matrix::Zero(n, n);
    constexpr int kMaxIters = 200;
    for (int iter = 0; iter < kMaxIters; ++iter) {
        const Matrix closed_loop = system.A - gain * c;
        const Matrix x_next = solve_lyapunov(closed_loop, gain * gain.transpose() + bbt);
        const double step = (x_next - x).norm();
        x = x_next;
        gain = x * c.transpose();
        if (iter > 0 && step <= 1e-12 * std::max(1e-300, x.norm())) {
            return symmetrize(x);
        }
    }
    throw NoConvergence("solve_are: Newton-Kleinman did not converge in 200 iterations");
}

Matrix psd_project(const Matrix& m) {
    const SymEig eig = sym_eig(m);
    const Vector clipped = eig.eigenvalues.cwiseMax(0.0);
    return symmetrize(eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.transpose());
}

Matrix sym_sqrt(const Matrix& m) {
    const SymEig eig = sym_eig(m);
    const double eps_clip = 1e-7 * m.norm();
    Vector lambda = eig.eigenvalues;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) < -eps_clip) {
            throw IndefiniteInput("sym_sqrt: eigenvalue below -1e-7*||M||_F");
        }
        lambda(i) = std::sqrt(std::max(0.0, lambda(i)));
    }
    return symmetrize(eig.eigenvectors * lambda.asDiagonal() * eig.eigenvectors.transpose());
}

} // namespace kbgain
