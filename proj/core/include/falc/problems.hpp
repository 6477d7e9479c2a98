#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "falc/dense.hpp"
#include "falc/falc.hpp"
#include "falc/problem_spec.hpp"

namespace falc {

/// min ||X||_* + mu2 ||vec(S)||_1 s.t. X + S = D. The block multiplier starts
/// at sign(D) scaled into the dual ball.
ProblemSpec preset_robust_pca(const DenseMatrix& d, double mu2);

/// min ||X||_* + mu2 ||vec(S)||_1 s.t. ||vec(X + S - D)||_inf <= rho.
ProblemSpec preset_stable_pcp(const DenseMatrix& d, double mu2, double rho);

/// min ||X||_* s.t. X_ij = vals for (i, j) in omega.
ProblemSpec preset_matrix_completion(std::span<const std::pair<std::size_t, std::size_t>> omega,
                                     const DenseVector& vals, std::size_t m, std::size_t n);

/// min ||x||_1 s.t. a x = b, with x stored as an n x 1 matrix. The l1 term sits
/// on the slack of the block x + s = 0.
ProblemSpec preset_basis_pursuit(const DenseMatrix& a, const DenseVector& b);

/// Robust PCA experiment settings: the defaults, Frobenius-norm stagnation.
SolverParams robust_pca_params();

/// Stable PCP experiment settings: cbar_lambda = 1.5, max-abs stagnation and the
/// subgradient stop with varsigma = 1e-3 (||G||_F <= varsigma / 2).
SolverParams stable_pcp_params();

/// Basis pursuit settings: the defaults with varrho = 1e-7.
SolverParams basis_pursuit_params();

/// theta = sign(D) / max(||sign(D)||_2 / mu1, ||vec(sign(D))||_inf / mu2), so that
/// theta is feasible for the dual of robust PCA.
DenseVector sign_multiplier(const DenseMatrix& d, double mu1, double mu2);

enum class NoiseModel { Uniform, Gaussian };

struct GroundTruth {
    DenseMatrix x0;
    DenseMatrix s0;
    DenseMatrix y0;
    std::vector<std::size_t> support;  // column-major linear indices, ascending
    std::size_t rank_true = 0;
};

struct Instance {
    GroundTruth truth;
    DenseMatrix d;
    std::uint64_t seed = 0;
    double rho_noise = 0.0;
};

/// D = X0 + S0 + Y0 with X0 = U V^T (n x r Gaussian factors, r = floor(rank_frac n)),
/// floor(sparse_frac n^2) uniformly placed U[-1, 1] entries in S0, and Y0 entries
/// rho_noise U[-1, 1] (or rho_noise N(0, 1)).
Instance generate_instance(std::size_t n, double rank_frac, double sparse_frac, double rho_noise,
                           std::uint64_t seed, NoiseModel noise = NoiseModel::Uniform);

struct SparseInstance {
    DenseMatrix a;                      // q x n, entries N(0, 1/q)
    DenseVector b;
    DenseVector x0;
    std::vector<std::size_t> support;   // ascending
    std::uint64_t seed = 0;
};

/// k-sparse x0 with N(0, 1) values on a uniform support, b = a x0.
SparseInstance generate_sparse(std::size_t n, std::size_t k, std::size_t q, std::uint64_t seed);

struct SparseRecovery {
    double rel_err = 0.0;              // ||x - x0||_2 / ||x0||_2 with x the report's X
    bool support_exact = false;        // {j : |x_j| > support_tol ||x||_inf} is the true support
    bool slack_support_exact = false;  // exact nonzeros of the l1 slack are the true support
};

SparseRecovery sparse_recovery(const SolveReport& report, const SparseInstance& inst,
                               double support_tol = 1e-5);

struct CompletionInstance {
    DenseMatrix x0;                     // n x n of rank r
    std::vector<std::pair<std::size_t, std::size_t>> omega;
    DenseVector values;
    std::uint64_t seed = 0;
};

/// X0 = U V^T with Gaussian n x r factors, floor(sample_frac n^2) observed entries.
CompletionInstance generate_completion(std::size_t n, std::size_t r, double sample_frac,
                                       std::uint64_t seed);

struct MetricsRow {
    double svd_count = 0.0;
    double rel_err_X = 0.0;
    double rel_err_S = 0.0;
    double rel_nuclear_gap = 0.0;
    double max_sv_err_on_support = 0.0;
    double max_sv_on_zero_svs = 0.0;
    double rel_l1_gap = 0.0;
    double max_S_err_on_support = 0.0;
    double max_S_on_zero_set = 0.0;
    double rank_est = 0.0;
    double rel_infeasibility = 0.0;
    double cpu_seconds = 0.0;
};

/// Column names in the order of MetricsRow.
std::span<const std::string_view> metric_names();
std::vector<double> metric_values(const MetricsRow& row);
MetricsRow metrics_from_values(std::span<const double> values);

/// X_sol is the report's X; S_sol is the slack of the first beta block, read
/// back as an m x n matrix.
MetricsRow compute_metrics(const SolveReport& report, const GroundTruth& truth,
                           const ProblemSpec& spec);

/// Counts sigma_i > max(m, n) eps sigma_max, then cuts at the sharpest drop
/// sigma_{i+1} / sigma_i < 1e-3 among those, if any.
std::size_t estimate_rank(const DenseMatrix& x);
std::size_t estimate_rank_from_values(std::span<const double> sigma, std::size_t m, std::size_t n);

/// One dual vector per constraint block.
struct DualPoint {
    std::vector<DenseVector> z;
};

/// sum_i rhs_i^T z_i - rho ||z_gamma||_{gamma*}
double dual_objective(const ProblemSpec& spec, const DualPoint& pt);

struct DualFeasibility {
    double schatten = 0.0;   // ||sigma(sum_i map_i^*(z_i))||_{alpha*}
    double slack = 0.0;      // ||z_beta||_{beta*}
    bool feasible = false;
};

/// Feasibility with 1e-10 slack: schatten <= mu1 and slack <= mu2.
DualFeasibility dual_feasible(const ProblemSpec& spec, const DualPoint& pt);

/// Scales `pt` into the dual feasible set (the multipliers of a FALC run are
/// the natural candidate).
DualPoint scale_to_dual_feasible(const ProblemSpec& spec, DualPoint pt);

/// mu1 ||sigma(X)||_alpha + mu2 ||s||_beta with s = rhs - map(X) on beta blocks,
/// evaluated at a primal point (x, per-block gamma slacks).
double primal_objective_at(const ProblemSpec& spec, const DenseMatrix& x,
                           std::span<const DenseVector> y_blocks = {});

}  // namespace falc
