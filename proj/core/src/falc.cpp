#include "falc/falc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "falc/svd.hpp"

namespace falc {

namespace {

void require_ratio(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
}

double sum_sq(std::span<const DenseVector> vs) {
    double t = 0.0;
    for (const auto& v : vs) t += dot(v, v);
    return t;
}

std::span<const double> slice(std::span<const double> v, std::size_t off, std::size_t len) {
    return v.subspan(off, len);
}

}  // namespace

std::string_view to_string(ScheduleMode m) noexcept {
    return m == ScheduleMode::Adaptive ? "adaptive" : "geometric";
}

ScheduleMode parse_schedule_mode(std::string_view text) {
    if (text == "adaptive") return ScheduleMode::Adaptive;
    if (text == "geometric") return ScheduleMode::Geometric;
    throw std::invalid_argument("unknown schedule mode '" + std::string(text) + "'");
}

std::string_view to_string(Termination t) noexcept {
    switch (t) {
    case Termination::Stagnation: return "stagnation";
    case Termination::SubgradientThreshold: return "subgradient_threshold";
    case Termination::MaxOuter: return "max_outer";
    }
    return "unknown";
}

void SolverParams::validate() const {
    require_ratio(c_lambda, "c_lambda");
    require_ratio(c_tau, "c_tau");
    require_ratio(c_xi, "c_xi");
    require_ratio(cbar_tau, "cbar_tau");
    require_ratio(cbar_xi, "cbar_xi");
    require_ratio(nu, "nu");
    if (!(cbar_lambda > 0.0) || !std::isfinite(cbar_lambda))
        throw std::invalid_argument("cbar_lambda must be positive");
    if (!(stagnation > 0.0)) throw std::invalid_argument("stagnation threshold must be positive");
    if (!(varsigma_x > 0.0) || !(varsigma_s > 0.0) || !(varsigma_y > 0.0))
        throw std::invalid_argument("subgradient thresholds must be positive");
    if (max_outer == 0) throw std::invalid_argument("max_outer must be at least 1");
    if (max_inner == 0) throw std::invalid_argument("max_inner must be at least 1");
    if (!(eps_init_factor > 0.0)) throw std::invalid_argument("eps_init_factor must be positive");
    if (!(b_x >= 0.0) || !std::isfinite(b_x)) throw std::invalid_argument("b_x must be finite and nonnegative");
}

double adaptive_lambda(const SolverParams& p, std::optional<double> previous, double x0_spectral) {
    if (previous) return p.c_lambda * *previous;
    return x0_spectral > 0.0 ? p.cbar_lambda * x0_spectral : p.cbar_lambda;
}

InnerTolerances adaptive_tolerances(const SolverParams& p,
                                    const std::optional<InnerTolerances>& previous,
                                    const ProbeResult& probe) {
    InnerTolerances t;
    if (p.joint_tolerance) {
        // phi vanishes whenever every y entry sits on the ball boundary, so the
        // y tolerance is driven by its upper bound instead.
        t.xi = p.cbar_xi * probe.phi_scale;
        double tau = p.cbar_tau * std::hypot(probe.g_x_norm, probe.g_s_norm);
        if (previous) {
            tau = std::min(p.c_tau * previous->tau_x, tau);
            t.xi = std::min(p.c_xi * previous->xi, t.xi);
        }
        t.tau_x = t.tau_s = tau;
        t.joint = true;
        return t;
    }
    t.xi = p.cbar_xi * probe.phi;
    t.tau_x = p.cbar_tau * probe.g_x_norm;
    t.tau_s = p.cbar_tau * probe.g_s_norm;
    if (previous) {
        t.tau_x = std::min(p.c_tau * previous->tau_x, t.tau_x);
        t.tau_s = std::min(p.c_tau * previous->tau_s, t.tau_s);
        t.xi = std::min(p.c_xi * previous->xi, t.xi);
    }
    return t;
}

InnerTolerances geometric_tolerances(double epsilon, double b_x, double rho) {
    const double tau = epsilon / (4.0 * (b_x + rho));
    return {tau / std::sqrt(2.0), tau / std::sqrt(2.0), 0.5 * epsilon};
}

ScheduleValues schedule_geometric(const ScheduleValues& current, double nu, double b_x, double rho) {
    if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("schedule_geometric: nu must lie in (0, 1)");
    if (!(b_x > 0.0)) throw std::invalid_argument("schedule_geometric: B_X must be positive");
    ScheduleValues next;
    next.lambda = nu * current.lambda;
    next.epsilon = nu * nu * current.epsilon;
    next.tol = geometric_tolerances(next.epsilon, b_x, rho);
    return next;
}

DenseVector update_multiplier(std::span<const double> theta, std::span<const double> residual,
                              double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("update_multiplier: lambda must be positive");
    if (theta.size() != residual.size()) throw ShapeError("update_multiplier: length mismatch");
    DenseVector out(std::vector<double>(theta.begin(), theta.end()));
    axpy(-1.0 / lambda, residual, out);
    return out;
}

DenseMatrix least_norm_init(std::size_t m, std::size_t n, std::span<const ConstraintBlock> blocks) {
    std::size_t dim = 0;
    for (const auto& b : blocks) dim += b.map.out_dim();
    DenseMatrix x(m, n);
    if (dim == 0) return x;

    auto adjoint = [&](std::span<const double> w) {
        DenseMatrix out(m, n);
        std::size_t off = 0;
        for (const auto& b : blocks) {
            const std::size_t q = b.map.out_dim();
            b.map.adjoint_accumulate(w.subspan(off, q), 1.0, out);
            off += q;
        }
        return out;
    };
    auto forward = [&](const DenseMatrix& z, std::span<double> out) {
        std::size_t off = 0;
        for (const auto& b : blocks) {
            const std::size_t q = b.map.out_dim();
            b.map.apply_into(z, out.subspan(off, q));
            off += q;
        }
    };

    DenseVector rhs(dim);
    {
        std::size_t off = 0;
        for (const auto& b : blocks) {
            std::copy(b.rhs.begin(), b.rhs.end(), rhs.begin() + static_cast<std::ptrdiff_t>(off));
            off += b.rhs.size();
        }
    }
    const double rhs_norm = norm2(rhs);
    if (rhs_norm == 0.0) return x;

    DenseVector w(dim), r = rhs, p = rhs, ap(dim);
    double rr = dot(r, r);
    const double target = 1e-12 * rhs_norm;
    const std::size_t cap = 10 * dim + 100;
    std::size_t it = 0;
    while (std::sqrt(rr) > target) {
        if (it++ >= cap) {
            std::string names;
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                if (!names.empty()) names += ", ";
                names += blocks[i].name.empty() ? "block " + std::to_string(i) : blocks[i].name;
            }
            throw LeastNormError("least_norm_init: conjugate gradients did not converge for " + names +
                                 " (operator rank deficient or system inconsistent)");
        }
        forward(adjoint(p), ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) {
            it = cap;
            continue;
        }
        const double a = rr / pap;
        axpy(a, p, w);
        axpy(-a, ap, r);
        const double rr_new = dot(r, r);
        lincomb(1.0, r, rr_new / rr, p, p);
        rr = rr_new;
    }
    return adjoint(w);
}

InitialPoint initial_point(const ProblemSpec& spec) {
    std::vector<ConstraintBlock> eq;
    for (const auto& b : spec.blocks)
        if (!b.beta_slack) eq.push_back(b);
    if (eq.empty()) eq = spec.blocks;
    InitialPoint ip;
    ip.x = least_norm_init(spec.m, spec.n, eq);
    const SlackLayout layout = SlackLayout::of(spec.blocks);
    ip.s = DenseVector(layout.s_dim);
    ip.y = DenseVector(layout.y_dim);
    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        if (layout.s_offset[i] == SlackLayout::npos) continue;
        const auto& b = spec.blocks[i];
        DenseVector r = b.rhs;
        const DenseVector ax = b.map.apply(ip.x);
        axpy(-1.0, ax, r);
        std::copy(r.begin(), r.end(), ip.s.begin() + static_cast<std::ptrdiff_t>(layout.s_offset[i]));
    }
    return ip;
}

BoundReport diagnostic_bounds(const Subproblem& sub, const InnerResult& inner, double epsilon) {
    BoundReport b;
    const bool gap = inner.branch == InnerBranch::GapBound;
    const bool subgrad = inner.branch == InnerBranch::SubgradientBound;
    const Gradient g = smooth_gradient(sub, inner.x, inner.s, inner.y);
    b.grad_x_norm = frobenius_norm(g.x);
    b.grad_s_norm = norm2(g.s);
    const double root = std::sqrt(2.0 * sub.lipschitz * std::max(epsilon, 0.0));
    const double i_factor = norm_factor_I(dual(sub.alpha), sub.m, sub.n);
    const double j_factor = sub.layout.s_dim == 0 ? 1.0 : norm_factor_J(dual(sub.beta), sub.layout.s_dim);
    // A joint tolerance bounds each component by the same tau.
    b.grad_x_bound = (subgrad ? inner.tol.tau_x : root) + i_factor * sub.lambda * sub.mu1;
    b.grad_s_bound = (subgrad ? inner.tol.tau_s : root) + j_factor * sub.lambda * sub.mu2;
    b.checked = gap || subgrad;
    if (b.checked) {
        const auto ok = [](double v, double bound) { return v <= bound * (1.0 + 1e-9) + 1e-12; };
        b.holds = ok(b.grad_x_norm, b.grad_x_bound) && ok(b.grad_s_norm, b.grad_s_bound);
    }
    return b;
}

FalcSolver::FalcSolver(ProblemSpec spec, SolverParams params)
    : spec_(std::move(spec)), params_(params) {
    spec_.validate();
    params_.validate();
    const auto t0 = std::chrono::steady_clock::now();
    layout_ = SlackLayout::of(spec_.blocks);
    lipschitz_ = stacked_lipschitz(spec_);
    if (!(lipschitz_ > 0.0)) throw SolverError("stacked constraint matrix is zero");

    InitialPoint ip = initial_point(spec_);
    x0_ = ip.x;
    const DenseVector sv = singular_values(x0_);
    state_.svd_count = 1;
    x0_spectral_ = sv.empty() ? 0.0 : sv[0];
    x0_nuclear_ = vec_norm(sv, NormIndex::One);
    s0_l1_ = vec_norm(ip.s, NormIndex::One);
    state_.eta_base = spec_.mu1 * vec_norm(sv, spec_.alpha) + spec_.mu2 * vec_norm(ip.s, spec_.beta);

    state_.x = std::move(ip.x);
    state_.s = std::move(ip.s);
    state_.y = std::move(ip.y);
    state_.x_nuclear = x0_nuclear_;
    for (const auto& b : spec_.blocks)
        state_.thetas.push_back(b.multiplier.empty() ? DenseVector(b.rhs.size()) : b.multiplier);

    const double fro = frobenius_norm(x0_);
    state_.b_x = params_.b_x > 0.0 ? params_.b_x : (fro > 0.0 ? 2.0 * fro : 1.0);

    auto& sch = state_.schedule;
    sch.lambda = adaptive_lambda(params_, std::nullopt, x0_spectral_);
    const double eta1 = state_.eta_base + 0.5 * sch.lambda * sum_sq(state_.thetas);
    sch.epsilon = params_.eps_init_factor * sch.lambda * (eta1 > 0.0 ? eta1 : 1.0);
    if (params_.schedule == ScheduleMode::Geometric)
        sch.tol = geometric_tolerances(sch.epsilon, state_.b_x, spec_.rho);
    elapsed_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t FalcSolver::budget(double epsilon) const {
    double inv = 0.0;
    if (spec_.mu1 > 0.0) inv += 1.0 / (spec_.mu1 * spec_.mu1);
    if (spec_.mu2 > 0.0) inv += 1.0 / (spec_.mu2 * spec_.mu2);
    const double beta_k = spec_.mu1 * x0_nuclear_ + spec_.mu2 * s0_l1_ +
                          0.5 * state_.schedule.lambda * sum_sq(state_.thetas);
    const double term = beta_k + spec_.mu1 * state_.x_nuclear +
                        spec_.mu2 * vec_norm(state_.s, NormIndex::One);
    const double n = std::floor(std::sqrt(lipschitz_) * std::sqrt(inv) * term * std::sqrt(2.0 / epsilon));
    if (!(n >= 1.0)) return 1;
    if (n > 1e15) return static_cast<std::size_t>(1e15);
    return static_cast<std::size_t>(n);
}

double FalcSolver::primal_objective(const DenseMatrix& x, std::span<const double> s) const {
    double obj = 0.0;
    if (spec_.mu1 > 0.0) {
        obj += spec_.mu1 * (spec_.alpha == NormIndex::Two ? frobenius_norm(x)
                                                          : vec_norm(singular_values(x), spec_.alpha));
    }
    if (spec_.mu2 > 0.0) obj += spec_.mu2 * vec_norm(s, spec_.beta);
    return obj;
}

bool FalcSolver::step() {
    if (done()) return false;
    const auto t0 = std::chrono::steady_clock::now();
    auto& st = state_;
    ++st.k;
    if (st.k > 1) {
        if (params_.schedule == ScheduleMode::Adaptive) {
            st.schedule.lambda = adaptive_lambda(params_, st.schedule.lambda, x0_spectral_);
            st.schedule.epsilon *= params_.c_lambda * params_.c_lambda;
        } else {
            st.schedule = schedule_geometric(st.schedule, params_.nu, st.b_x, spec_.rho);
        }
    }
    const double lambda = st.schedule.lambda;
    const double epsilon = st.schedule.epsilon;
    st.eta = st.eta_base + 0.5 * lambda * sum_sq(st.thetas);

    Subproblem sub = make_subproblem(spec_, st.thetas, lambda,
                                     spec_.mu1 > 0.0 ? st.eta : kUnbounded, lipschitz_);
    InnerControls controls;
    controls.tol = st.schedule.tol;
    controls.budget = budget(epsilon);
    controls.max_steps = params_.max_inner;
    controls.stagnation = params_.stagnation;
    controls.stagnation_norm = params_.stagnation_norm;
    if (params_.subgradient_stop)
        controls.global = InnerTolerances{params_.varsigma_x, params_.varsigma_s, params_.varsigma_y};
    if (params_.schedule == ScheduleMode::Adaptive) {
        std::optional<InnerTolerances> previous;
        if (st.k > 1) previous = st.schedule.tol;
        controls.on_first_step = [this, previous](const ProbeResult& probe, InnerTolerances& tol) {
            tol = adaptive_tolerances(params_, previous, probe);
        };
    }

    InnerResult inner = run_inner(sub, st.x, st.s, st.y, controls, st.x_nuclear);
    st.schedule.tol = inner.tol;
    st.svd_count += inner.svd_count;
    st.inner_steps += inner.steps;

    IterationRecord rec;
    rec.k = st.k;
    rec.lambda = lambda;
    rec.epsilon = epsilon;
    rec.tau_x = inner.tol.tau_x;
    rec.tau_s = inner.tol.tau_s;
    rec.xi = inner.tol.xi;
    rec.eta = st.eta;
    rec.budget = controls.budget;
    rec.inner_steps = inner.steps;
    rec.branch = inner.branch;
    rec.g_x_norm = inner.g_x_norm;
    rec.g_s_norm = inner.g_s_norm;
    rec.phi = inner.phi;
    rec.bounds = diagnostic_bounds(sub, inner, epsilon);

    st.x = std::move(inner.x);
    st.s = std::move(inner.s);
    st.y = std::move(inner.y);
    st.x_nuclear = inner.x_nuclear;

    std::vector<DenseVector> rhs;
    rhs.reserve(spec_.blocks.size());
    for (const auto& b : spec_.blocks) rhs.push_back(b.rhs);
    const auto res = block_residuals(spec_.blocks, rhs, layout_, st.x, st.s, st.y);
    double sq = 0.0;
    for (const auto& r : res) {
        const double nr = norm2(r);
        rec.block_residuals.push_back(nr);
        sq += nr * nr;
    }
    rec.residual_norm = std::sqrt(sq);
    if (!inner.global_stop) {
        for (std::size_t i = 0; i < st.thetas.size(); ++i)
            st.thetas[i] = update_multiplier(st.thetas[i], res[i], lambda);
    }
    rec.multiplier_norm = std::sqrt(sum_sq(st.thetas));
    rec.objective = primal_objective(st.x, st.s);
    rec.svd_count = st.svd_count;

    if (params_.schedule == ScheduleMode::Geometric) {
        const double fro = frobenius_norm(st.x);
        if (fro > st.b_x) st.b_x = 2.0 * fro;
    }

    if (inner.global_stop) {
        st.termination = inner.branch == InnerBranch::StationaryIterates ? Termination::Stagnation
                                                                         : Termination::SubgradientThreshold;
    } else if (st.k >= params_.max_outer) {
        st.termination = Termination::MaxOuter;
    }
    st.history.push_back(std::move(rec));
    last_sub_ = std::move(sub);
    last_inner_ = std::move(inner);
    last_inner_->x = st.x;
    last_inner_->s = st.s;
    last_inner_->y = st.y;
    elapsed_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return !done();
}

SolveReport FalcSolver::report() const {
    SolveReport r;
    const auto& st = state_;
    r.x_final = st.x;
    r.multipliers = st.thetas;
    r.outer_iterations = st.k;
    r.total_inner_iterations = st.inner_steps;
    r.svd_count = st.svd_count;
    r.wall_time = elapsed_;
    r.lipschitz = lipschitz_;
    r.history = st.history;
    r.termination = st.termination.value_or(Termination::MaxOuter);
    r.objective = primal_objective(st.x, st.s);
    for (std::size_t i = 0; i < spec_.blocks.size(); ++i) {
        const std::size_t q = spec_.blocks[i].rhs.size();
        r.s_final.push_back(layout_.s_offset[i] == SlackLayout::npos
                                ? DenseVector{}
                                : DenseVector(std::vector<double>(
                                      slice(st.s, layout_.s_offset[i], q).begin(),
                                      slice(st.s, layout_.s_offset[i], q).end())));
        r.y_final.push_back(layout_.y_offset[i] == SlackLayout::npos
                                ? DenseVector{}
                                : DenseVector(std::vector<double>(
                                      slice(st.y, layout_.y_offset[i], q).begin(),
                                      slice(st.y, layout_.y_offset[i], q).end())));
    }
    std::vector<DenseVector> rhs;
    for (const auto& b : spec_.blocks) rhs.push_back(b.rhs);
    for (const auto& res : block_residuals(spec_.blocks, rhs, layout_, st.x, st.s, st.y))
        r.residuals.push_back(norm2(res));
    return r;
}

SolveReport solve(const ProblemSpec& spec, const SolverParams& params, const ProgressCallback& progress) {
    FalcSolver solver(spec, params);
    while (solver.step()) {
        if (progress) progress(solver.state().history.back());
    }
    if (progress && !solver.state().history.empty()) progress(solver.state().history.back());
    return solver.report();
}

}  // namespace falc
