#include "falc/inner_apg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "falc/linear_map.hpp"

namespace falc {

namespace {

std::span<const double> sub_span(std::span<const double> v, std::size_t off, std::size_t len) {
    return v.subspan(off, len);
}

struct StepNorms {
    double l2 = 0.0;
    double max = 0.0;
};

// a <- (1 - t) a + t b; returns the norms of a_new - a_old.
StepNorms blend(std::span<double> a, std::span<const double> b, double t) {
    double sq = 0.0;
    double mx = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = t * (b[i] - a[i]);
        a[i] += d;
        sq += d * d;
        mx = std::max(mx, std::abs(d));
    }
    return {std::sqrt(sq), mx};
}

void combine(std::span<const double> a, std::span<const double> b, double t, std::span<double> out) {
    lincomb(1.0 - t, a, t, b, out);
}

// start - sigma / L
void prox_center(std::span<const double> start, std::span<const double> sigma, double lip,
                 std::span<double> out) {
    lincomb(1.0, start, -1.0 / lip, sigma, out);
}

}  // namespace

Subproblem make_subproblem(const ProblemSpec& spec, std::span<const DenseVector> thetas,
                           double lambda, double eta, double lipschitz) {
    if (thetas.size() != spec.blocks.size())
        throw InnerError("make_subproblem: one multiplier per block required");
    if (!(lambda > 0.0)) throw InnerError("make_subproblem: lambda must be positive");
    if (!(lipschitz > 0.0)) throw InnerError("make_subproblem: Lipschitz constant must be positive");
    Subproblem sub;
    sub.m = spec.m;
    sub.n = spec.n;
    sub.blocks = spec.blocks;
    sub.layout = SlackLayout::of(spec.blocks);
    sub.alpha = spec.alpha;
    sub.beta = spec.beta;
    sub.gamma = spec.gamma;
    sub.mu1 = spec.mu1;
    sub.mu2 = spec.mu2;
    sub.rho = spec.rho;
    sub.lambda = lambda;
    sub.eta = eta;
    sub.lipschitz = lipschitz;
    sub.shifted_rhs.reserve(spec.blocks.size());
    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        DenseVector r = spec.blocks[i].rhs;
        if (thetas[i].size() != r.size())
            throw InnerError("make_subproblem: multiplier " + std::to_string(i) + " has wrong length");
        axpy(lambda, thetas[i], r);
        sub.shifted_rhs.push_back(std::move(r));
    }
    return sub;
}

double stacked_lipschitz(const ProblemSpec& spec) {
    std::vector<StackedRow> rows;
    rows.reserve(spec.blocks.size());
    for (const auto& b : spec.blocks) {
        rows.push_back({&b.map, static_cast<std::size_t>(b.beta_slack) +
                                    static_cast<std::size_t>(b.gamma_slack)});
    }
    const double s = sigma_max_stacked(rows);
    return s * s;
}

std::vector<DenseVector> block_residuals(const std::vector<ConstraintBlock>& blocks,
                                         std::span<const DenseVector> rhs,
                                         const SlackLayout& layout, const DenseMatrix& x,
                                         std::span<const double> s, std::span<const double> y) {
    std::vector<DenseVector> out;
    out.reserve(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::size_t q = blocks[i].rhs.size();
        DenseVector r(q);
        blocks[i].map.apply_into(x, r);
        if (layout.s_offset[i] != SlackLayout::npos) axpy(1.0, sub_span(s, layout.s_offset[i], q), r);
        if (layout.y_offset[i] != SlackLayout::npos) axpy(1.0, sub_span(y, layout.y_offset[i], q), r);
        axpy(-1.0, rhs[i], r);
        out.push_back(std::move(r));
    }
    return out;
}

Gradient smooth_gradient(const Subproblem& sub, const DenseMatrix& x, std::span<const double> s,
                         std::span<const double> y) {
    const auto res = block_residuals(sub.blocks, sub.shifted_rhs, sub.layout, x, s, y);
    Gradient g;
    g.x = DenseMatrix(sub.m, sub.n);
    g.s = DenseVector(sub.layout.s_dim);
    g.y = DenseVector(sub.layout.y_dim);
    double sq = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        sq += dot(res[i], res[i]);
        sub.blocks[i].map.adjoint_accumulate(res[i], 1.0, g.x);
        if (sub.layout.s_offset[i] != SlackLayout::npos)
            std::copy(res[i].begin(), res[i].end(), g.s.begin() + static_cast<std::ptrdiff_t>(sub.layout.s_offset[i]));
        if (sub.layout.y_offset[i] != SlackLayout::npos)
            std::copy(res[i].begin(), res[i].end(), g.y.begin() + static_cast<std::ptrdiff_t>(sub.layout.y_offset[i]));
    }
    g.value = 0.5 * sq;
    return g;
}

double subproblem_objective(const Subproblem& sub, const DenseMatrix& x, std::span<const double> s,
                            std::span<const double> y) {
    const auto res = block_residuals(sub.blocks, sub.shifted_rhs, sub.layout, x, s, y);
    double f = 0.0;
    for (const auto& r : res) f += 0.5 * dot(r, r);
    double pen = 0.0;
    if (sub.mu1 > 0.0) pen += sub.mu1 * schatten_norm(x, sub.alpha);
    if (sub.mu2 > 0.0) pen += sub.mu2 * vec_norm(s, sub.beta);
    return sub.lambda * pen + f;
}

double theta_next(double theta) {
    if (!(theta > 0.0)) throw InnerError("theta_next: theta must be positive");
    return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 / (theta * theta)));
}

InnerState InnerState::start(const Subproblem& sub, const DenseMatrix& x, const DenseVector& s,
                             const DenseVector& y, double x_nuclear) {
    if (x.rows() != sub.m || x.cols() != sub.n) throw ShapeError("InnerState: X has wrong shape");
    if (s.size() != sub.layout.s_dim || y.size() != sub.layout.y_dim)
        throw ShapeError("InnerState: slack vectors have wrong length");
    InnerState st;
    st.x_start = st.x1 = st.x2 = st.x3 = st.x2_free = x;
    st.sigma_x = DenseMatrix(sub.m, sub.n);
    st.s_start = st.s1 = st.s2 = st.s3 = s;
    st.sigma_s = DenseVector(s.size());
    st.y_start = st.y1 = st.y2 = st.y3 = y;
    st.sigma_y = DenseVector(y.size());
    st.x2_norm = sub.mu1 > 0.0 ? schatten_norm(x, sub.alpha) : 0.0;
    st.x1_nuclear = x_nuclear;
    return st;
}

void inner_step(const Subproblem& sub, InnerState& st) {
    const double t = st.theta;
    const double lip = sub.lipschitz;

    combine(st.x1.span(), st.x2.span(), t, st.x3.span());
    combine(st.s1, st.s2, t, st.s3);
    combine(st.y1, st.y2, t, st.y3);

    const Gradient g = smooth_gradient(sub, st.x3, st.s3, st.y3);
    axpy(1.0 / t, g.x.span(), st.sigma_x.span());
    axpy(1.0 / t, g.s, st.sigma_s);
    axpy(1.0 / t, g.y, st.sigma_y);
    st.weight += 1.0 / t;

    DenseMatrix xc(sub.m, sub.n);
    prox_center(st.x_start.span(), st.sigma_x.span(), lip, xc.span());
    if (sub.mu1 > 0.0) {
        const double delta = sub.lambda * sub.mu1 * st.weight / lip;
        const double eta = std::isinf(sub.eta) ? kUnbounded : sub.eta / sub.mu1;
        ShrinkResult r = shrink_matrix(xc, delta, sub.alpha, eta, &st.warm);
        st.svd_count += r.used_svd ? 1 : 0;
        st.x2 = std::move(r.constrained);
        st.x2_free = std::move(r.unconstrained);
        st.x2_norm = r.constrained_norm;
    } else {
        st.x2 = xc;
        st.x2_free = std::move(xc);
        st.x2_norm = 0.0;
    }

    if (!st.s2.empty()) {
        DenseVector sc(st.s2.size());
        prox_center(st.s_start, st.sigma_s, lip, sc);
        st.s2 = shrink_vec(sc, sub.lambda * sub.mu2 * st.weight / lip, sub.beta);
    }
    if (!st.y2.empty()) {
        DenseVector yc(st.y2.size());
        prox_center(st.y_start, st.sigma_y, lip, yc);
        st.y2 = project_ball(yc, sub.gamma, sub.rho);
    }

    const StepNorms dx = blend(st.x1.span(), st.x2.span(), t);
    const StepNorms ds = blend(st.s1, st.s2, t);
    blend(st.y1, st.y2, t);
    st.dx1_norm = dx.l2;
    st.dx1_max = dx.max;
    st.ds1_norm = ds.l2;
    st.ds1_max = ds.max;
    const double x2_nuclear =
        sub.alpha == NormIndex::One
            ? st.x2_norm
            : std::sqrt(static_cast<double>(std::min(sub.m, sub.n))) * frobenius_norm(st.x2);
    st.x1_nuclear = (1.0 - t) * st.x1_nuclear + t * x2_nuclear;

    st.theta = theta_next(t);
    ++st.step;
}

InnerCertificate inner_certificate(const Subproblem& sub, const InnerState& st) {
    const Gradient g = smooth_gradient(sub, st.x2, st.s2, st.y2);
    InnerCertificate c;
    c.g_x = g.x;
    // (L (x_start - x2_free) - sigma_x) / W + grad_X f(x2, s2, y2)
    const double inv_w = 1.0 / st.weight;
    auto gx = c.g_x.span();
    const auto xs = st.x_start.span();
    const auto xf = st.x2_free.span();
    const auto sg = st.sigma_x.span();
    for (std::size_t i = 0; i < gx.size(); ++i)
        gx[i] += (sub.lipschitz * (xs[i] - xf[i]) - sg[i]) * inv_w;
    c.g_x_norm = frobenius_norm(c.g_x);
    c.g_s = least_norm_subgradient(st.s2, g.s, sub.lambda * sub.mu2, sub.beta);
    c.g_s_norm = norm2(c.g_s);
    c.phi = g.y.empty() ? 0.0 : sub.rho * vec_norm(g.y, dual(sub.gamma)) + dot(g.y, st.y2);
    return c;
}

ProbeResult first_step_probe(const Subproblem& sub, const InnerState& st) {
    if (st.step != 1) throw InnerError("first_step_probe: state must be right after the first step");
    const Gradient g = smooth_gradient(sub, st.x2_free, st.s2, st.y2);
    DenseMatrix gx = g.x;
    auto out = gx.span();
    const auto xs = st.x_start.span();
    const auto xf = st.x2_free.span();
    const auto sg = st.sigma_x.span();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sub.lipschitz * (xs[i] - xf[i]) - sg[i];
    ProbeResult p;
    p.g_x_norm = frobenius_norm(gx);
    p.g_s_norm = norm2(least_norm_subgradient(st.s2, g.s, sub.lambda * sub.mu2, sub.beta));
    if (!g.y.empty()) {
        p.phi_scale = sub.rho * vec_norm(g.y, dual(sub.gamma));
        p.phi = p.phi_scale + dot(g.y, st.y2);
    }
    return p;
}

bool InnerTolerances::accepts(double g_x, double g_s, double p) const noexcept {
    if (p > xi) return false;
    if (joint) return std::hypot(g_x, g_s) <= tau_x;
    return g_x <= tau_x && g_s <= tau_s;
}

std::string_view to_string(InnerBranch b) noexcept {
    switch (b) {
    case InnerBranch::SubgradientBound: return "subgradient";
    case InnerBranch::GapBound: return "gap";
    case InnerBranch::BudgetExhausted: return "budget_exhausted";
    case InnerBranch::StationaryIterates: return "stationary";
    case InnerBranch::GlobalSubgradient: return "global_subgradient";
    }
    return "unknown";
}

InnerResult run_inner(const Subproblem& sub, const DenseMatrix& x, const DenseVector& s,
                      const DenseVector& y, const InnerControls& controls, double x_nuclear) {
    if (controls.budget == 0) throw InnerError("run_inner: iteration budget must be positive");
    if (controls.max_steps == 0) throw InnerError("run_inner: step cap must be positive");
    InnerState st = InnerState::start(sub, x, s, y, x_nuclear);
    InnerTolerances tol = controls.tol;
    // The budget test fires once the step counter exceeds N, i.e. after N + 1 steps.
    const std::size_t budget_steps = controls.budget + 1;
    const std::size_t limit = std::min(budget_steps, controls.max_steps);
    const double eta_slack = std::isinf(sub.eta) ? kUnbounded : sub.eta * (1.0 + 1e-12);

    InnerResult out;
    auto finish = [&](InnerBranch branch, bool averaged, const InnerCertificate& c) {
        out.branch = branch;
        out.tol = tol;
        out.steps = st.step;
        out.svd_count = st.svd_count;
        out.g_x_norm = c.g_x_norm;
        out.g_s_norm = c.g_s_norm;
        out.phi = c.phi;
        if (averaged) {
            out.x_nuclear = st.x1_nuclear;
            out.x = std::move(st.x1);
            out.s = std::move(st.s1);
            out.y = std::move(st.y1);
        } else {
            out.x_nuclear = sub.alpha == NormIndex::One
                                ? st.x2_norm
                                : std::sqrt(static_cast<double>(std::min(sub.m, sub.n))) *
                                      frobenius_norm(st.x2);
            out.x = std::move(st.x2);
            out.s = std::move(st.s2);
            out.y = std::move(st.y2);
        }
        return out;
    };

    while (true) {
        inner_step(sub, st);
        const InnerCertificate c = inner_certificate(sub, st);
        if (st.step == 1 && controls.on_first_step) controls.on_first_step(first_step_probe(sub, st), tol);

        const bool inf_norm = controls.stagnation_norm == NormIndex::Inf;
        const double dx = inf_norm ? st.dx1_max : st.dx1_norm;
        const double ds = inf_norm ? st.ds1_max : st.ds1_norm;
        if (dx <= controls.stagnation && ds <= controls.stagnation) {
            out.global_stop = true;
            return finish(InnerBranch::StationaryIterates, true, c);
        }
        if (controls.global && controls.global->accepts(c.g_x_norm, c.g_s_norm, c.phi)) {
            out.global_stop = true;
            return finish(InnerBranch::GlobalSubgradient, false, c);
        }
        const bool in_ball = sub.mu1 == 0.0 || sub.mu1 * st.x2_norm <= eta_slack;
        if (in_ball && tol.accepts(c.g_x_norm, c.g_s_norm, c.phi))
            return finish(InnerBranch::SubgradientBound, false, c);
        if (st.step >= limit) {
            return finish(budget_steps <= controls.max_steps ? InnerBranch::GapBound
                                                             : InnerBranch::BudgetExhausted,
                          true, c);
        }
    }
}

}  // namespace falc
