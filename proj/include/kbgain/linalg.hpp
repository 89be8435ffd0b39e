#pragma once

#include <Eigen/Dense>

#include "kbgain/errors.hpp"

namespace kbgain {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct LtiSystem;

// Symmetric eigendecomposition, eigenvalues ascending, eigenvectors orthonormal.
struct SymEig {
    Vector eigenvalues;
    Matrix eigenvectors;
};

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

SymEig sym_eig(const Matrix& m);

// Largest real part over the spectrum of a (not necessarily symmetric) matrix.
double max_real_eigenvalue(const Matrix& a);

// Solves F X + X F' + Q = 0 by Kronecker vectorization. Adequate for n <= 20.
// Throws ResonantSpectrum when lambda_i(F) + lambda_j(F) = 0 makes the system singular.
Matrix solve_lyapunov(const Matrix& f, const Matrix& q);

// Solves A X + X A' - X C'C X + B B' = 0 by Newton-Kleinman from L0 = 0
// (valid because A is Hurwitz). Stops at relative step 1e-12, cap 200 iterations.
Matrix solve_are(const LtiSystem& system, const Matrix& c);

// Frobenius-nearest PSD matrix: eigenvalue clipping at zero.
Matrix psd_project(const Matrix& m);

// Symmetric PSD square root S with S'S = M. Eigenvalues in [-eps_clip, 0) are
// clipped to zero; anything below -eps_clip = 1e-7*||M||_F is IndefiniteInput.
Matrix sym_sqrt(const Matrix& m);

} // namespace kbgain
