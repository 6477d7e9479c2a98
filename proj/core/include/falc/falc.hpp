#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "falc/dense.hpp"
#include "falc/inner_apg.hpp"
#include "falc/problem_spec.hpp"

namespace falc {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the least-norm initial point cannot be computed.
class LeastNormError : public SolverError {
public:
    using SolverError::SolverError;
};

enum class ScheduleMode { Adaptive, Geometric };

std::string_view to_string(ScheduleMode m) noexcept;
ScheduleMode parse_schedule_mode(std::string_view text);

struct SolverParams {
    double c_lambda = 0.4;
    double c_tau = 0.4;
    double c_xi = 0.4;
    double cbar_lambda = 2.0;
    double cbar_tau = 0.999;
    double cbar_xi = 0.999;
    bool joint_tolerance = true;     // one tau for (G, g), xi from rho ||grad_y||
    double stagnation = 1e-5;        // varrho
    NormIndex stagnation_norm = NormIndex::Two;
    bool subgradient_stop = false;   // enable the varsigma test
    double varsigma_x = 5e-4;
    double varsigma_s = 1e-3;
    double varsigma_y = 1e-3;
    std::size_t max_outer = 60;
    std::size_t max_inner = 5000;
    double eps_init_factor = 0.99;
    ScheduleMode schedule = ScheduleMode::Adaptive;
    double nu = 0.4;                 // geometric ratio
    double b_x = 0.0;                // geometric B_X; 0 selects 2 ||X^(0)||_F

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Values driving one outer iteration.
struct ScheduleValues {
    double lambda = 0.0;
    double epsilon = 0.0;
    InnerTolerances tol;
};

/// lambda^(1) = cbar_lambda ||X^(0)||_2 (cbar_lambda when X^(0) = 0), then
/// lambda^(k) = c_lambda lambda^(k-1).
double adaptive_lambda(const SolverParams& p, std::optional<double> previous, double x0_spectral);

/// tau_X^(k) = min{c_tau tau_X^(k-1), cbar_tau ||G^(k)||}, likewise tau_s and xi;
/// the first iteration uses cbar times the probe norms. With joint_tolerance a
/// single tau is driven by ||(G^(k), g^(k))|| and stored in both fields, and xi
/// by rho ||grad_y f||_{gamma*} in place of phi.
InnerTolerances adaptive_tolerances(const SolverParams& p,
                                    const std::optional<InnerTolerances>& previous,
                                    const ProbeResult& probe);

/// Geometric step: lambda <- nu lambda, eps <- nu^2 eps, then the tolerances
/// are restated from eps.
ScheduleValues schedule_geometric(const ScheduleValues& current, double nu, double b_x, double rho);

/// xi = eps / 2, tau = eps / (4 (B_X + rho)) split evenly as tau_X = tau_s = tau / sqrt(2).
InnerTolerances geometric_tolerances(double epsilon, double b_x, double rho);

/// theta - residual / lambda
DenseVector update_multiplier(std::span<const double> theta, std::span<const double> residual,
                              double lambda);

/// Minimum Frobenius-norm X with map_i(X) = rhs_i for every block in `blocks`,
/// by conjugate gradients on the normal equations (relative tolerance 1e-12).
DenseMatrix least_norm_init(std::size_t m, std::size_t n, std::span<const ConstraintBlock> blocks);

struct InitialPoint {
    DenseMatrix x;
    DenseVector s;
    DenseVector y;
};

/// X^(0) from the blocks without a beta slack (all blocks when every block
/// has one), s^(0) = rhs - map(X^(0)) on beta blocks, y^(0) = 0.
InitialPoint initial_point(const ProblemSpec& spec);

struct BoundReport {
    bool checked = false;  // false when the exit carries no optimality guarantee
    double grad_x_norm = 0.0;
    double grad_x_bound = 0.0;
    double grad_s_norm = 0.0;
    double grad_s_bound = 0.0;
    bool holds = true;
};

/// Gradient-norm bounds at an inner exit: sigma_max(M) sqrt(2 eps) (or tau on a
/// subgradient exit) plus I(alpha*) lambda mu1, resp. J(beta*) lambda mu2.
BoundReport diagnostic_bounds(const Subproblem& sub, const InnerResult& inner, double epsilon);

struct IterationRecord {
    std::size_t k = 0;
    double lambda = 0.0;
    double epsilon = 0.0;
    double tau_x = 0.0;
    double tau_s = 0.0;
    double xi = 0.0;
    double eta = 0.0;
    std::size_t budget = 0;
    std::size_t inner_steps = 0;
    InnerBranch branch = InnerBranch::GapBound;
    double residual_norm = 0.0;            // joint 2-norm over all blocks
    std::vector<double> block_residuals;
    double objective = 0.0;
    double multiplier_norm = 0.0;          // joint 2-norm after the update
    std::size_t svd_count = 0;             // cumulative
    double g_x_norm = 0.0;
    double g_s_norm = 0.0;
    double phi = 0.0;
    BoundReport bounds;
};

enum class Termination { Stagnation, SubgradientThreshold, MaxOuter };

std::string_view to_string(Termination t) noexcept;

struct SolveReport {
    DenseMatrix x_final;
    std::vector<DenseVector> s_final;  // per block, empty without a beta slack
    std::vector<DenseVector> y_final;  // per block, empty without a gamma slack
    std::vector<DenseVector> multipliers;
    double objective = 0.0;
    std::vector<double> residuals;     // per block ||map(X) + s + y - rhs||_2
    std::size_t outer_iterations = 0;
    std::size_t total_inner_iterations = 0;
    std::size_t svd_count = 0;
    double wall_time = 0.0;
    double lipschitz = 0.0;
    std::vector<IterationRecord> history;
    Termination termination = Termination::MaxOuter;
};

struct SolverState {
    std::size_t k = 0;
    DenseMatrix x;
    DenseVector s;
    DenseVector y;
    double x_nuclear = 0.0;  // upper bound on ||X||_*
    std::vector<DenseVector> thetas;
    ScheduleValues schedule;
    double eta_base = 0.0;
    double eta = 0.0;
    double b_x = 0.0;
    std::size_t svd_count = 0;
    std::size_t inner_steps = 0;
    std::vector<IterationRecord> history;
    std::optional<Termination> termination;
};

using ProgressCallback = std::function<void(const IterationRecord&)>;

/// Outer loop, one augmented Lagrangian iteration per step().
class FalcSolver {
public:
    FalcSolver(ProblemSpec spec, SolverParams params);

    /// Runs one outer iteration. Returns false once the solve has terminated.
    bool step();
    bool done() const noexcept { return state_.termination.has_value(); }

    const SolverState& state() const noexcept { return state_; }
    const ProblemSpec& spec() const noexcept { return spec_; }
    const SolverParams& params() const noexcept { return params_; }
    double lipschitz() const noexcept { return lipschitz_; }
    const DenseMatrix& x0() const noexcept { return x0_; }
    const std::optional<Subproblem>& last_subproblem() const noexcept { return last_sub_; }
    const std::optional<InnerResult>& last_inner() const noexcept { return last_inner_; }

    SolveReport report() const;

private:
    std::size_t budget(double epsilon) const;
    double primal_objective(const DenseMatrix& x, std::span<const double> s) const;

    ProblemSpec spec_;
    SolverParams params_;
    SlackLayout layout_;
    double lipschitz_ = 0.0;
    double x0_spectral_ = 0.0;
    double x0_nuclear_ = 0.0;
    double s0_l1_ = 0.0;
    DenseMatrix x0_;
    SolverState state_;
    std::optional<Subproblem> last_sub_;
    std::optional<InnerResult> last_inner_;
    double elapsed_ = 0.0;
};

SolveReport solve(const ProblemSpec& spec, const SolverParams& params,
                  const ProgressCallback& progress = {});

}  // namespace falc
