#include "kbgain/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <random>

#include "kbgain/linalg.hpp"
#include "kbgain/rng.hpp"

namespace kbgain {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

int svec_dim(int n) { return n * (n + 1) / 2; }

Vector svec(const Matrix& m) {
    const int n = static_cast<int>(m.rows());
    Vector v(svec_dim(n));
    int k = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            v(k++) = (i == j) ? m(i, j) : kSqrt2 * 0.5 * (m(i, j) + m(j, i));
        }
    }
    return v;
}

Matrix smat(const Vector& v, int n) {
    Matrix m(n, n);
    int k = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            const double value = v(k++);
            if (i == j) {
                m(i, j) = value;
            } else {
                m(i, j) = value / kSqrt2;
                m(j, i) = m(i, j);
            }
        }
    }
    return m;
}

// Block-wise PSD projection of the stacked slack vector.
void project_cones(const std::vector<int>& dims, Vector& s) {
    int offset = 0;
    for (int d : dims) {
        const int len = svec_dim(d);
        const Matrix block = smat(s.segment(offset, len), d);
        s.segment(offset, len) = svec(psd_project(block));
        offset += len;
    }
}

} // namespace

SdpInstance assemble_sdp(const LtiSystem& system, double alpha, double gamma) {
    const int n = system.n;
    const int dx = svec_dim(n);
    const int d2 = svec_dim(2 * n);
    const Matrix bbt = system.B * system.B.transpose();

    SdpInstance inst;
    inst.n = n;
    inst.block_dims = {n, 2 * n, 2 * n};
    inst.F = Matrix::Zero(dx + 2 * d2, 2 * dx);
    inst.g = Vector::Zero(dx + 2 * d2);
    inst.c = Vector::Zero(2 * dx);
    inst.objective_constant = 2.0 * alpha * system.A.trace();

    // Objective: Tr(X) + alpha*Tr(B'YB) = <I, X> + alpha*<BB', Y>.
    inst.c.head(dx) = svec(Matrix::Identity(n, n));
    inst.c.tail(dx) = alpha * svec(bbt);

    // Columns of F via the symmetric basis elements.
    for (int col = 0; col < dx; ++col) {
        Vector e = Vector::Zero(dx);
        e(col) = 1.0;
        const Matrix ex = smat(e, n);

        // Block 1: AX + XA'.
        inst.F.block(0, col, dx, 1) = svec(symmetrize(system.A * ex + ex * system.A.transpose()));

        // Block 3, X part: top-left corner of the 2n block.
        Matrix big = Matrix::Zero(2 * n, 2 * n);
        big.topLeftCorner(n, n) = ex;
        inst.F.block(dx + d2, col, d2, 1) = svec(big);
    }
    for (int col = 0; col < dx; ++col) {
        Vector e = Vector::Zero(dx);
        e(col) = 1.0;
        const Matrix ey = smat(e, n);

        // Block 2: -[[YA + A'Y, YB], [B'Y, 0]].
        Matrix big = Matrix::Zero(2 * n, 2 * n);
        big.topLeftCorner(n, n) = symmetrize(ey * system.A + system.A.transpose() * ey);
        big.topRightCorner(n, n) = ey * system.B;
        big.bottomLeftCorner(n, n) = system.B.transpose() * ey;
        inst.F.block(dx, dx + col, d2, 1) = svec(-big);

        // Block 3, Y part: bottom-right corner.
        Matrix corner = Matrix::Zero(2 * n, 2 * n);
        corner.bottomRightCorner(n, n) = ey;
        inst.F.block(dx + d2, dx + col, d2, 1) = svec(corner);
    }

    // Constants: BB' in block 1, [[gamma I, 0], [0, I]] in block 2,
    // [[0, I], [I, 0]] in block 3.
    inst.g.head(dx) = svec(bbt);
    Matrix g2 = Matrix::Zero(2 * n, 2 * n);
    g2.topLeftCorner(n, n) = gamma * Matrix::Identity(n, n);
    g2.bottomRightCorner(n, n) = Matrix::Identity(n, n);
    inst.g.segment(dx, d2) = svec(g2);
    Matrix g3 = Matrix::Zero(2 * n, 2 * n);
    g3.topRightCorner(n, n) = Matrix::Identity(n, n);
    g3.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    inst.g.tail(d2) = svec(g3);
    return inst;
}

SdpSolveResult solve_sdp(const SdpInstance& instance, double tol, int max_iters) {
    const int n = instance.n;
    const int dx = svec_dim(n);
    const auto rows = instance.F.rows();
    const auto cols = instance.F.cols();

    // Ruiz equilibration. Columns get individual scales (free variables);
    // each cone block gets one scalar so PSD-ness is preserved.
    Matrix f = instance.F;
    Vector col_scale = Vector::Ones(cols);
    Vector row_scale = Vector::Ones(rows);
    for (int round = 0; round < 5; ++round) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double norm = f.col(j).cwiseAbs().maxCoeff();
            if (norm > 0.0) {
                const double d = 1.0 / std::sqrt(norm);
                f.col(j) *= d;
                col_scale(j) *= d;
            }
        }
        int offset = 0;
        for (int dim : instance.block_dims) {
            const int len = svec_dim(dim);
            const double norm = f.middleRows(offset, len).cwiseAbs().maxCoeff();
            if (norm > 0.0) {
                const double e = 1.0 / std::sqrt(norm);
                f.middleRows(offset, len) *= e;
                row_scale.segment(offset, len) *= e;
            }
            offset += len;
        }
    }
    const Vector g_hat = row_scale.asDiagonal() * instance.g;
    Vector c_hat = col_scale.asDiagonal() * instance.c;
    const double c_norm = c_hat.cwiseAbs().maxCoeff();
    const double sigma = (c_norm > 0.0) ? 1.0 / c_norm : 1.0;
    c_hat *= sigma;

    const Matrix ftf = f.transpose() * f;
    const Eigen::LDLT<Matrix> solver(ftf);
    if (solver.info() != Eigen::Success) {
        throw NoConvergence("solve_sdp: normal equations factorization failed");
    }
    // The constraint map is ~3% dense; the iteration runs on the sparse view.
    const Eigen::SparseMatrix<double> f_sparse = f.sparseView(1.0, 1e-300);

    Vector z = Vector::Zero(cols);
    Vector s = g_hat;
    project_cones(instance.block_dims, s);
    Vector w = Vector::Zero(rows);
    double rho = 1.0;
    constexpr double kRelax = 1.6;

    SdpResiduals res;
    int iter = 0;
    bool converged = false;
    Vector fzg(rows);
    for (iter = 1; iter <= max_iters; ++iter) {
        const Vector target = s - w - g_hat;
        z = solver.solve(f_sparse.transpose() * target - c_hat / rho);
        fzg = f_sparse * z + g_hat;
        const Vector h = kRelax * fzg + (1.0 - kRelax) * s;
        Vector s_new = h + w;
        project_cones(instance.block_dims, s_new);
        w += h - s_new;
        s = std::move(s_new);

        if (iter % 100 == 0 || iter == max_iters) {
            // Residuals in original (unscaled) units.
            const Vector z_orig = col_scale.asDiagonal() * z;
            const Vector slack_orig = row_scale.cwiseInverse().asDiagonal() * s;
            const Vector affine_orig = row_scale.cwiseInverse().asDiagonal() * fzg;
            const Vector lambda = (-rho / sigma) * (row_scale.asDiagonal() * w);
            const double p_obj = instance.c.dot(z_orig);
            const double d_obj = -lambda.dot(instance.g);
            res.primal = (affine_orig - slack_orig).norm() /
                         (1.0 + std::max(affine_orig.norm(), slack_orig.norm()));
            res.dual = (instance.F.transpose() * lambda - instance.c).norm() /
                       (1.0 + instance.c.norm());
            res.gap = std::abs(p_obj - d_obj) / (1.0 + std::abs(p_obj) + std::abs(d_obj));
            if (res.primal <= tol && res.dual <= tol && res.gap <= tol) {
                converged = true;
                break;
            }
            if (w.norm() > 1e12 * (1.0 + g_hat.norm())) {
                throw InfeasibleDetected("solve_sdp: dual certificate norm diverged");
            }
            // Residual balancing. Adapting on short scales puts the iteration
            // into a limit cycle; the cached factorization is rho-independent.
            if (iter % 2000 == 0) {
                if (res.primal > 5.0 * res.dual && rho < 1e8) {
                    rho *= 2.0;
                    w *= 0.5;
                } else if (res.dual > 5.0 * res.primal && rho > 1e-8) {
                    rho *= 0.5;
                    w *= 2.0;
                }
            }
        }
    }

    SdpSolveResult result;
    const Vector z_orig = col_scale.asDiagonal() * z;
    result.X = symmetrize(smat(z_orig.head(dx), n));
    result.Y = symmetrize(smat(z_orig.tail(dx), n));
    result.objective = instance.c.dot(z_orig) + instance.objective_constant;
    result.residuals = res;
    result.iterations = std::min(iter, max_iters);
    result.converged = converged;
    return result;
}

double check_rank(const Matrix& x, const Matrix& y) {
    const int n = static_cast<int>(x.rows());
    Matrix big(2 * n, 2 * n);
    big.topLeftCorner(n, n) = x;
    big.topRightCorner(n, n) = Matrix::Identity(n, n);
    big.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    big.bottomRightCorner(n, n) = y;
    const Vector lambda = sym_eig(big).eigenvalues;  // ascending
    return lambda(n - 1) / lambda(2 * n - 1);
}

Matrix reconstruct_gain(const LtiSystem& system, const Matrix& y, double gamma) {
    const Matrix bbt = system.B * system.B.transpose();
    const Matrix s =
        symmetrize(y * system.A + system.A.transpose() * y + y * bbt * y);
    const SymEig eig = sym_eig(s);
    // S inherits its nonnegativity from rank exactness, not from an explicit
    // constraint, so a solve at residual eps leaves lower-saturated eigenvalues
    // near -sqrt(eps)*scale. The clip band is sized for that; anything below it
    // signals a genuinely indefinite S.
    const double eps_clip = 1e-4 * std::max({1.0, gamma, s.norm()});
    if (eig.eigenvalues.minCoeff() < -eps_clip) {
        throw IndefiniteS("reconstruct_gain: Y A + A'Y + Y BB'Y is indefinite (inexact solve?)");
    }
    if (eig.eigenvalues.maxCoeff() > gamma * (1.0 + 1e-6)) {
        throw GainBoundViolated("reconstruct_gain: C'C exceeds gamma to tolerance");
    }
    const Vector clipped = eig.eigenvalues.cwiseMax(0.0);
    const Matrix s_psd =
        symmetrize(eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.transpose());
    return sym_sqrt(s_psd);
}

double verify_stationary(const LtiSystem& system, const Matrix& c, double alpha) {
    const Matrix x_are = solve_are(system, c);
    return x_are.trace() + alpha * (c * x_are * c.transpose()).trace();
}

StationarySolution solve_stationary(const LtiSystem& system, double alpha, double gamma,
                                    double tol, int max_iters) {
    const SdpInstance instance = assemble_sdp(system, alpha, gamma);
    const SdpSolveResult sdp = solve_sdp(instance, tol, max_iters);

    StationarySolution sol;
    sol.X = sdp.X;
    sol.Y = sdp.Y;
    sol.objective_value = sdp.objective;
    sol.residuals = sdp.residuals;
    sol.iterations = sdp.iterations;
    sol.converged = sdp.converged;
    sol.rank_gap = check_rank(sdp.X, sdp.Y);
    sol.rank_exact = sol.rank_gap <= kRankExactThreshold;
    sol.C = reconstruct_gain(system, sdp.Y, gamma);
    // When the rank certificate fails this is still a feasible gain, and the
    // plug-in value upper-bounds the true optimum; rank_exact records which.
    sol.are_objective = verify_stationary(system, sol.C, alpha);

    const int n = system.n;
    Matrix big(2 * n, 2 * n);
    big.topLeftCorner(n, n) = sdp.X;
    big.topRightCorner(n, n) = Matrix::Identity(n, n);
    big.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    big.bottomRightCorner(n, n) = sdp.Y;
    sol.z_spectrum = sym_eig(big).eigenvalues.reverse();
    sol.ctc_spectrum = sym_eig(gain_to_u(sol.C)).eigenvalues.reverse();
    return sol;
}

ScalarStationary scalar_stationary_closed_form(double a, double alpha, double gamma) {
    if (!(a < 0.0) || !(alpha > 0.0) || !(gamma > 0.0)) {
        throw InvalidHorizon("scalar_stationary_closed_form: need a<0, alpha>0, gamma>0");
    }
    const double c = std::sqrt(a * a + gamma);
    const double threshold_low = (a + c) * (a + c) / (gamma * gamma);
    const double threshold_high = 1.0 / (4.0 * a * a);
    ScalarStationary st;
    if (alpha > threshold_high) {
        st.case_label = 'A';
        st.x_star = -0.5 / a;
        st.u_star = 0.0;
    } else if (alpha < threshold_low) {
        st.case_label = 'C';
        st.x_star = (a + c) / gamma;
        st.u_star = gamma;
    } else {
        st.case_label = 'B';
        st.x_star = std::sqrt(alpha);
        st.u_star = 2.0 * a / st.x_star + 1.0 / alpha;
    }
    return st;
}

ExperimentSummary random_experiment(int n, double alpha, double gamma, int trials,
                                    std::uint64_t seed) {
    if (trials < 1) throw InvalidHorizon("random_experiment: trials must be >= 1");
    ExperimentSummary summary;
    summary.n = n;
    summary.trials = trials;
    summary.alpha = alpha;
    summary.gamma = gamma;
    summary.seed = seed;
    summary.per_trial.resize(trials);

    for (int trial = 0; trial < trials; ++trial) {
        std::mt19937_64 eng(rng::key3(seed, static_cast<std::uint64_t>(trial), 0x7a1a1ull));
        std::normal_distribution<double> normal(0.0, 1.0);
        Matrix m(n, n), gmat(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) m(i, j) = normal(eng);
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) gmat(i, j) = normal(eng);
        }
        const double shift = sym_eig(symmetrize(m)).eigenvalues.maxCoeff() + 0.1;
        const Matrix a = m - shift * Matrix::Identity(n, n);
        // Orthogonal B with deterministic column signs from the QR of gmat.
        const Eigen::HouseholderQR<Matrix> qr(gmat);
        Matrix b = qr.householderQ();
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < n; ++j) {
            if (r(j, j) < 0.0) b.col(j) *= -1.0;
        }

        ExperimentTrial& t = summary.per_trial[trial];
        try {
            const LtiSystem system = validate_system(a, b);
            const StationarySolution sol = solve_stationary(system, alpha, gamma);
            t.ok = true;
            t.rank_gap = sol.rank_gap;
            t.sdp_objective = sol.objective_value;
            t.are_objective = sol.are_objective;
            t.rel_mismatch = std::abs(sol.objective_value - sol.are_objective) /
                             std::max(1e-300, std::abs(sol.are_objective));
            t.ctc_min = sol.ctc_spectrum.minCoeff();
            t.ctc_max = sol.ctc_spectrum.maxCoeff();
            if (summary.typical_z_spectrum.size() == 0) {
                summary.typical_z_spectrum = sol.z_spectrum;
                summary.typical_ctc_spectrum = sol.ctc_spectrum;
            }
        } catch (const Error&) {
            t.ok = false;
            ++summary.failures;
        }
    }
    for (const ExperimentTrial& t : summary.per_trial) {
        if (!t.ok) continue;
        summary.rank_gap_max = std::max(summary.rank_gap_max, t.rank_gap);
        summary.rel_mismatch_max = std::max(summary.rel_mismatch_max, t.rel_mismatch);
        if (t.rank_gap <= kRankExactThreshold) ++summary.rank_exact_count;
    }
    return summary;
}

} // namespace kbgain
