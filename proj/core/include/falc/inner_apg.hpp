#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "falc/dense.hpp"
#include "falc/problem_spec.hpp"
#include "falc/prox.hpp"

namespace falc {

/// Penalized subproblem at a fixed (lambda, theta):
///   P(X, s, y) = lambda (mu1 ||sigma(X)||_alpha + mu2 ||s||_beta)
///              + 1/2 sum_i ||map_i(X) + s_i + y_i - (rhs_i + lambda theta_i)||^2
/// over ||sigma(X)||_alpha <= eta / mu1 and ||y||_gamma <= rho.
struct Subproblem {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<ConstraintBlock> blocks;
    std::vector<DenseVector> shifted_rhs;  // rhs_i + lambda theta_i
    SlackLayout layout;
    NormIndex alpha = NormIndex::One;
    NormIndex beta = NormIndex::One;
    NormIndex gamma = NormIndex::Two;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double rho = 0.0;
    double lambda = 1.0;
    double eta = kUnbounded;  // bound on mu1 ||sigma(X)||_alpha
    double lipschitz = 1.0;   // sigma_max(M)^2
};

Subproblem make_subproblem(const ProblemSpec& spec, std::span<const DenseVector> thetas,
                           double lambda, double eta, double lipschitz);

/// sigma_max(M)^2 for the stacked constraint matrix of `spec`.
double stacked_lipschitz(const ProblemSpec& spec);

/// Per-block constraint residuals map_i(X) + s_i + y_i - rhs_i (rhs_i taken
/// from `rhs`, one entry per block).
std::vector<DenseVector> block_residuals(const std::vector<ConstraintBlock>& blocks,
                                         std::span<const DenseVector> rhs,
                                         const SlackLayout& layout, const DenseMatrix& x,
                                         std::span<const double> s, std::span<const double> y);

struct Gradient {
    DenseMatrix x;
    DenseVector s;
    DenseVector y;
    double value = 0.0;  // the smooth part f
};

/// f and its gradient at (x, s, y).
Gradient smooth_gradient(const Subproblem& sub, const DenseMatrix& x,
                         std::span<const double> s, std::span<const double> y);

/// P(x, s, y), ignoring the ball constraints.
double subproblem_objective(const Subproblem& sub, const DenseMatrix& x,
                            std::span<const double> s, std::span<const double> y);

/// theta_{l+1} = (sqrt(theta^4 + 4 theta^2) - theta^2) / 2, evaluated in the
/// cancellation-free form 2 / (1 + sqrt(1 + 4 / theta^2)).
double theta_next(double theta);

/// Iterates of the accelerated scheme. Index 1 is the averaged sequence,
/// 2 the prox sequence, 3 the extrapolated point; the sigma_* terms accumulate
/// gradient / theta.
struct InnerState {
    DenseMatrix x_start, x1, x2, x3, x2_free, sigma_x;
    DenseVector s_start, s1, s2, s3, sigma_s;
    DenseVector y_start, y1, y2, y3, sigma_y;
    double theta = 1.0;
    double weight = 0.0;  // sum of 1/theta over completed steps
    std::size_t step = 0;
    std::size_t svd_count = 0;
    double x2_norm = 0.0;     // ||sigma(x2)||_alpha
    double dx1_norm = 0.0;    // ||x1_new - x1_old||_F of the last step
    double ds1_norm = 0.0;
    double dx1_max = 0.0;     // same steps in the max-abs norm
    double ds1_max = 0.0;
    double x1_nuclear = 0.0;  // upper bound on ||x1||_*
    SvdWarmStart warm;

    /// `x_nuclear` bounds ||x||_* from above.
    static InnerState start(const Subproblem& sub, const DenseMatrix& x, const DenseVector& s,
                            const DenseVector& y, double x_nuclear = 0.0);
};

/// One step of the accelerated scheme; updates `state` in place.
void inner_step(const Subproblem& sub, InnerState& state);

/// Approximate subgradient of P at (x2, s2, y2).
struct InnerCertificate {
    DenseMatrix g_x;
    DenseVector g_s;
    double g_x_norm = 0.0;  // Frobenius
    double g_s_norm = 0.0;  // 2-norm
    double phi = 0.0;       // ball optimality gap for y
};

InnerCertificate inner_certificate(const Subproblem& sub, const InnerState& state);

/// Certificate norms of the unconstrained first-step point, used to seed the
/// adaptive tolerances.
struct ProbeResult {
    double g_x_norm = 0.0;
    double g_s_norm = 0.0;
    double phi = 0.0;
    double phi_scale = 0.0;  // rho ||grad_y f||_{gamma*}, an upper bound on phi
};

/// Evaluates the first-step probe from a state right after its first step.
ProbeResult first_step_probe(const Subproblem& sub, const InnerState& state);

enum class InnerBranch {
    SubgradientBound,   // tolerances met at (x2, s2, y2)
    GapBound,           // iteration budget spent; iterate is eps-optimal
    BudgetExhausted,    // hard cap hit before the budget
    StationaryIterates, // averaged iterates stopped moving
    GlobalSubgradient,  // global stationarity thresholds met
};

std::string_view to_string(InnerBranch b) noexcept;

struct InnerTolerances {
    double tau_x = 0.0;
    double tau_s = 0.0;
    double xi = 0.0;
    /// Test sqrt(||G||^2 + ||g||^2) <= tau_x instead of the two norms separately.
    bool joint = false;

    bool accepts(double g_x, double g_s, double phi) const noexcept;
};

struct InnerControls {
    InnerTolerances tol;
    std::size_t budget = 1;                  // N^(k)
    std::size_t max_steps = 5000;            // hard cap
    double stagnation = 1e-5;                // varrho
    NormIndex stagnation_norm = NormIndex::Two;  // Two: Frobenius/2-norm, Inf: max-abs
    std::optional<InnerTolerances> global;   // varsigma thresholds
    /// Called once after the first step; may rewrite the tolerances.
    std::function<void(const ProbeResult&, InnerTolerances&)> on_first_step;
};

struct InnerResult {
    DenseMatrix x;
    DenseVector s;
    DenseVector y;
    InnerBranch branch = InnerBranch::GapBound;
    InnerTolerances tol;  // tolerances in force at exit
    double g_x_norm = 0.0;
    double g_s_norm = 0.0;
    double phi = 0.0;
    std::size_t steps = 0;
    std::size_t svd_count = 0;
    double x_nuclear = 0.0;  // upper bound on ||x||_*
    bool global_stop = false;
};

class InnerError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Runs the accelerated scheme from (x, s, y) until one of the exits fires.
InnerResult run_inner(const Subproblem& sub, const DenseMatrix& x, const DenseVector& s,
                      const DenseVector& y, const InnerControls& controls,
                      double x_nuclear = 0.0);

}  // namespace falc
