#pragma once

#include <cstdint>
#include <vector>

#include "kbgain/model.hpp"

namespace kbgain {

// Standard-form encoding of the stationary-gain program over symmetric (X, Y):
//   min c'z + constant   s.t.   F z + g = s,  s in a product of PSD cones,
// where z stacks svec(X) and svec(Y) (off-diagonals scaled by sqrt(2) so inner
// products are preserved). The three blocks are
//   (1) AX + XA' + BB'                          (n x n,  >= 0)
//   (2) -[[YA + A'Y - gamma I, YB], [B'Y, -I]]  (2n x 2n, >= 0)
//   (3) [[X, I], [I, Y]]                        (2n x 2n, >= 0)
struct SdpInstance {
    int n = 0;
    std::vector<int> block_dims;
    Matrix F;
    Vector g;
    Vector c;
    double objective_constant = 0.0;  // 2*alpha*Tr(A)
};

struct SdpResiduals {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
};

struct SdpSolveResult {
    Matrix X;
    Matrix Y;
    double objective = 0.0;
    SdpResiduals residuals;
    int iterations = 0;
    bool converged = false;
};

// Full pipeline output: SDP variables, rank certificate, reconstructed gain
// and the ARE plug-in cross-check.
struct StationarySolution {
    Matrix X;
    Matrix Y;
    Matrix C;
    double objective_value = 0.0;
    double are_objective = 0.0;
    double rank_gap = 0.0;       // lambda_{n+1} / lambda_1, descending
    bool rank_exact = false;     // rank_gap <= 1e-6
    bool converged = false;
    SdpResiduals residuals;
    int iterations = 0;
    Vector z_spectrum;           // eigenvalues of [[X, I], [I, Y]], descending
    Vector ctc_spectrum;         // eigenvalues of C'C, descending
};

struct ExperimentTrial {
    bool ok = false;
    double rank_gap = 0.0;
    double sdp_objective = 0.0;
    double are_objective = 0.0;
    double rel_mismatch = 0.0;
    double ctc_min = 0.0;
    double ctc_max = 0.0;
};

struct ExperimentSummary {
    int n = 0;
    int trials = 0;
    double alpha = 0.0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    int failures = 0;
    int rank_exact_count = 0;
    double rank_gap_max = 0.0;
    double rel_mismatch_max = 0.0;
    std::vector<ExperimentTrial> per_trial;
    Vector typical_z_spectrum;    // first successful trial (Fig.-style data)
    Vector typical_ctc_spectrum;
};

inline constexpr double kRankExactThreshold = 1e-6;

SdpInstance assemble_sdp(const LtiSystem& system, double alpha, double gamma);

// Operator-splitting solve (ADMM with over-relaxation 1.6): alternating PSD
// cone projection and a cached normal-equations solve. Terminates when primal
// residual, dual residual and relative objective gap are all <= tol. Hitting
// max_iters is reported through converged=false, not an exception.
SdpSolveResult solve_sdp(const SdpInstance& instance, double tol = 1e-9, int max_iters = 600000);

// lambda_{n+1}/lambda_1 of [[X, I], [I, Y]] with eigenvalues descending.
double check_rank(const Matrix& x, const Matrix& y);

// C = sym_sqrt of S = sym(YA + A'Y + YBB'Y) after clipping the small negative
// eigenvalues an inexact solve leaves behind. Throws IndefiniteS when S is
// genuinely indefinite and GainBoundViolated when lambda_max(S) > gamma(1+1e-6).
Matrix reconstruct_gain(const LtiSystem& system, const Matrix& y, double gamma);

// ARE plug-in objective Tr(X_are) + alpha*Tr(C X_are C').
double verify_stationary(const LtiSystem& system, const Matrix& c, double alpha);

StationarySolution solve_stationary(const LtiSystem& system, double alpha, double gamma,
                                    double tol = 1e-9, int max_iters = 600000);

struct ScalarStationary {
    double x_star = 0.0;
    double u_star = 0.0;
    char case_label = 'A';
};

ScalarStationary scalar_stationary_closed_form(double a, double alpha, double gamma);

// Random stable (A, B) pairs: A = M - (lambda_max(sym M) + 0.1) I with M
// standard normal, B orthogonal from a sign-fixed QR. Failed trials are
// counted, never fatal.
ExperimentSummary random_experiment(int n, double alpha, double gamma, int trials,
                                    std::uint64_t seed);

} // namespace kbgain
