#include "falc/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "falc/rng.hpp"
#include "falc/svd.hpp"

namespace falc {

double SplitMix64::gaussian() noexcept {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    return r * std::cos(t);
}

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

DenseMatrix slack_matrix(const SolveReport& report, const ProblemSpec& spec) {
    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        if (!spec.blocks[i].beta_slack) continue;
        const DenseVector& s = report.s_final.at(i);
        if (s.size() != spec.m * spec.n)
            throw ShapeError("compute_metrics: beta slack does not have m*n entries");
        return unvec(s, spec.m, spec.n);
    }
    return DenseMatrix(spec.m, spec.n);
}

}  // namespace

SolverParams robust_pca_params() {
    return SolverParams{};
}

SolverParams basis_pursuit_params() {
    SolverParams p;
    p.stagnation = 1e-7;
    return p;
}

SolverParams stable_pcp_params() {
    SolverParams p;
    p.cbar_lambda = 1.5;
    p.stagnation_norm = NormIndex::Inf;
    p.subgradient_stop = true;
    p.varsigma_x = 5e-4;
    p.varsigma_s = 1e-3;
    p.varsigma_y = 1e-3;
    return p;
}

DenseVector sign_multiplier(const DenseMatrix& d, double mu1, double mu2) {
    DenseMatrix sg(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.size(); ++i) sg.data()[i] = sign(d.data()[i]);
    double scale = 0.0;
    if (mu1 > 0.0) scale = std::max(scale, spectral_norm(sg) / mu1);
    if (mu2 > 0.0) scale = std::max(scale, max_abs(sg.span()) / mu2);
    DenseVector out = vec(sg);
    if (scale > 0.0)
        for (double& v : out) v /= scale;
    return out;
}

ProblemSpec preset_robust_pca(const DenseMatrix& d, double mu2) {
    if (!(mu2 > 0.0)) throw SpecError("robust PCA: mu2 must be positive");
    require_finite(d.span(), "robust PCA data");
    ProblemSpec spec;
    spec.m = d.rows();
    spec.n = d.cols();
    spec.alpha = NormIndex::One;
    spec.beta = NormIndex::One;
    spec.gamma = NormIndex::Inf;
    spec.mu1 = 1.0;
    spec.mu2 = mu2;
    spec.rho = 0.0;
    ConstraintBlock b;
    b.map = LinearMap::vectorize(spec.m, spec.n);
    b.rhs = vec(d);
    b.beta_slack = true;
    b.multiplier = sign_multiplier(d, spec.mu1, mu2);
    b.name = "X + S = D";
    spec.blocks.push_back(std::move(b));
    spec.label = "robust_pca";
    spec.validate();
    return spec;
}

ProblemSpec preset_stable_pcp(const DenseMatrix& d, double mu2, double rho) {
    if (!(rho >= 0.0)) throw SpecError("stable PCP: rho must be nonnegative");
    ProblemSpec spec = preset_robust_pca(d, mu2);
    spec.rho = rho;
    spec.gamma = NormIndex::Inf;
    spec.blocks[0].gamma_slack = true;
    spec.blocks[0].name = "X + S + Y = D";
    spec.label = "stable_pcp";
    spec.validate();
    return spec;
}

ProblemSpec preset_matrix_completion(std::span<const std::pair<std::size_t, std::size_t>> omega,
                                     const DenseVector& vals, std::size_t m, std::size_t n) {
    if (omega.empty()) throw SpecError("matrix completion: empty sample set");
    if (vals.size() != omega.size()) throw SpecError("matrix completion: one value per sample required");
    ProblemSpec spec;
    spec.m = m;
    spec.n = n;
    spec.alpha = NormIndex::One;
    spec.mu1 = 1.0;
    spec.mu2 = 0.0;
    ConstraintBlock b;
    b.map = LinearMap::sampling(m, n, omega);
    b.rhs = vals;
    b.name = "P_omega(X) = b";
    spec.blocks.push_back(std::move(b));
    spec.label = "matrix_completion";
    spec.validate();
    return spec;
}

ProblemSpec preset_basis_pursuit(const DenseMatrix& a, const DenseVector& b) {
    if (a.rows() == 0 || a.cols() == 0) throw SpecError("basis pursuit: empty sensing matrix");
    if (b.size() != a.rows()) throw SpecError("basis pursuit: b length does not match rows of a");
    ProblemSpec spec;
    spec.m = a.cols();
    spec.n = 1;
    spec.mu1 = 0.0;
    spec.mu2 = 1.0;
    spec.beta = NormIndex::One;
    ConstraintBlock obj;
    obj.map = LinearMap::vectorize(spec.m, 1);
    obj.rhs = DenseVector(spec.m);
    obj.beta_slack = true;
    obj.name = "x + s = 0";
    ConstraintBlock eq;
    eq.map = LinearMap::dense(spec.m, 1, a);
    eq.rhs = b;
    eq.name = "a x = b";
    spec.blocks.push_back(std::move(obj));
    spec.blocks.push_back(std::move(eq));
    spec.label = "basis_pursuit";
    spec.validate();
    return spec;
}

Instance generate_instance(std::size_t n, double rank_frac, double sparse_frac, double rho_noise,
                           std::uint64_t seed, NoiseModel noise) {
    if (n == 0) throw std::invalid_argument("generate_instance: n must be positive");
    if (!(rank_frac > 0.0 && rank_frac < 1.0)) throw std::invalid_argument("generate_instance: rank_frac must lie in (0, 1)");
    if (!(sparse_frac > 0.0 && sparse_frac < 1.0)) throw std::invalid_argument("generate_instance: sparse_frac must lie in (0, 1)");
    if (!(rho_noise >= 0.0)) throw std::invalid_argument("generate_instance: rho_noise must be nonnegative");
    const auto r = static_cast<std::size_t>(std::floor(rank_frac * static_cast<double>(n) + 1e-9));
    if (r < 1) throw std::invalid_argument("generate_instance: n * rank_frac must be at least 1");

    SplitMix64 rng(seed);
    DenseMatrix u(n, r), v(n, r);
    for (double& e : u.span()) e = rng.gaussian();
    for (double& e : v.span()) e = rng.gaussian();

    Instance inst;
    inst.seed = seed;
    inst.rho_noise = rho_noise;
    auto& t = inst.truth;
    t.rank_true = r;
    t.x0 = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < r; ++k) {
            const double vjk = v(j, k);
            for (std::size_t i = 0; i < n; ++i) t.x0(i, j) += u(i, k) * vjk;
        }

    const std::size_t total = n * n;
    const auto p = static_cast<std::size_t>(std::floor(sparse_frac * static_cast<double>(total) + 1e-9));
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < p; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
        std::swap(idx[i], idx[j]);
    }
    t.support.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(p));
    std::sort(t.support.begin(), t.support.end());
    t.s0 = DenseMatrix(n, n);
    for (std::size_t k : t.support) {
        double val = 0.0;
        while (val == 0.0) val = rng.uniform(-1.0, 1.0);
        t.s0.data()[k] = val;
    }

    t.y0 = DenseMatrix(n, n);
    if (rho_noise > 0.0) {
        for (double& e : t.y0.span())
            e = rho_noise * (noise == NoiseModel::Uniform ? rng.uniform(-1.0, 1.0) : rng.gaussian());
    }
    inst.d = t.x0 + t.s0 + t.y0;
    return inst;
}

namespace {

std::vector<std::size_t> sample_indices(SplitMix64& rng, std::size_t total, std::size_t count) {
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

SparseInstance generate_sparse(std::size_t n, std::size_t k, std::size_t q, std::uint64_t seed) {
    if (n == 0 || q == 0) throw std::invalid_argument("generate_sparse: n and q must be positive");
    if (k == 0 || k > n) throw std::invalid_argument("generate_sparse: sparsity must lie in [1, n]");
    SplitMix64 rng(seed);
    SparseInstance inst;
    inst.seed = seed;
    inst.a = DenseMatrix(q, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(q));
    for (double& e : inst.a.span()) e = scale * rng.gaussian();
    inst.support = sample_indices(rng, n, k);
    inst.x0 = DenseVector(n);
    for (std::size_t j : inst.support) {
        double val = 0.0;
        while (val == 0.0) val = rng.gaussian();
        inst.x0[j] = val;
    }
    inst.b = DenseVector(q);
    for (std::size_t j : inst.support)
        for (std::size_t i = 0; i < q; ++i) inst.b[i] += inst.a(i, j) * inst.x0[j];
    return inst;
}

SparseRecovery sparse_recovery(const SolveReport& report, const SparseInstance& inst, double support_tol) {
    SparseRecovery out;
    const auto x = report.x_final.span();
    if (x.size() != inst.x0.size()) throw ShapeError("sparse_recovery: solution length mismatch");
    DenseVector diff(std::vector<double>(x.begin(), x.end()));
    axpy(-1.0, inst.x0, diff);
    out.rel_err = norm2(diff) / norm2(inst.x0);
    const double cut = support_tol * max_abs(x);
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (std::abs(x[j]) > cut) support.push_back(j);
    out.support_exact = support == inst.support;
    for (const auto& s : report.s_final) {
        if (s.size() != x.size()) continue;
        support.clear();
        for (std::size_t j = 0; j < s.size(); ++j)
            if (s[j] != 0.0) support.push_back(j);
        out.slack_support_exact = support == inst.support;
        break;
    }
    return out;
}

CompletionInstance generate_completion(std::size_t n, std::size_t r, double sample_frac,
                                       std::uint64_t seed) {
    if (n == 0 || r == 0 || r > n) throw std::invalid_argument("generate_completion: need 1 <= r <= n");
    if (!(sample_frac > 0.0 && sample_frac <= 1.0))
        throw std::invalid_argument("generate_completion: sample_frac must lie in (0, 1]");
    SplitMix64 rng(seed);
    DenseMatrix u(n, r), v(n, r);
    for (double& e : u.span()) e = rng.gaussian();
    for (double& e : v.span()) e = rng.gaussian();
    CompletionInstance inst;
    inst.seed = seed;
    inst.x0 = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t i = 0; i < n; ++i) inst.x0(i, j) += u(i, k) * v(j, k);
    const auto count = static_cast<std::size_t>(std::floor(sample_frac * static_cast<double>(n * n) + 1e-9));
    const auto idx = sample_indices(rng, n * n, std::max<std::size_t>(count, 1));
    inst.values = DenseVector(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) {
        inst.omega.emplace_back(idx[t] % n, idx[t] / n);
        inst.values[t] = inst.x0.data()[idx[t]];
    }
    return inst;
}

std::span<const std::string_view> metric_names() {
    static constexpr std::array<std::string_view, 12> names{
        "svd_count",        "rel_err_X",          "rel_err_S",         "rel_nuclear_gap",
        "max_sv_err_on_support", "max_sv_on_zero_svs", "rel_l1_gap",  "max_S_err_on_support",
        "max_S_on_zero_set", "rank_est",          "rel_infeasibility", "cpu_seconds"};
    return names;
}

std::vector<double> metric_values(const MetricsRow& r) {
    return {r.svd_count,       r.rel_err_X,          r.rel_err_S,         r.rel_nuclear_gap,
            r.max_sv_err_on_support, r.max_sv_on_zero_svs, r.rel_l1_gap, r.max_S_err_on_support,
            r.max_S_on_zero_set, r.rank_est,          r.rel_infeasibility, r.cpu_seconds};
}

MetricsRow metrics_from_values(std::span<const double> v) {
    if (v.size() != 12) throw std::invalid_argument("metrics_from_values: expected 12 values");
    MetricsRow r;
    r.svd_count = v[0];
    r.rel_err_X = v[1];
    r.rel_err_S = v[2];
    r.rel_nuclear_gap = v[3];
    r.max_sv_err_on_support = v[4];
    r.max_sv_on_zero_svs = v[5];
    r.rel_l1_gap = v[6];
    r.max_S_err_on_support = v[7];
    r.max_S_on_zero_set = v[8];
    r.rank_est = v[9];
    r.rel_infeasibility = v[10];
    r.cpu_seconds = v[11];
    return r;
}

MetricsRow compute_metrics(const SolveReport& report, const GroundTruth& truth, const ProblemSpec& spec) {
    const DenseMatrix& x = report.x_final;
    if (x.rows() != truth.x0.rows() || x.cols() != truth.x0.cols())
        throw ShapeError("compute_metrics: solution and ground truth shapes differ");
    const DenseMatrix s = slack_matrix(report, spec);
    auto rel = [](double num, double den) { return den > 0.0 ? num / den : num; };

    MetricsRow row;
    row.svd_count = static_cast<double>(report.svd_count);
    row.rel_err_X = rel(frobenius_norm(x - truth.x0), frobenius_norm(truth.x0));
    row.rel_err_S = rel(frobenius_norm(s - truth.s0), frobenius_norm(truth.s0));

    const DenseVector sv = svd_full(x).singular_values;
    const DenseVector sv0 = svd_full(truth.x0).singular_values;
    const double nuc = vec_norm(sv, NormIndex::One);
    const double nuc0 = vec_norm(sv0, NormIndex::One);
    row.rel_nuclear_gap = rel(std::abs(nuc - nuc0), nuc0);
    for (std::size_t i = 0; i < sv.size(); ++i) {
        if (i < truth.rank_true) {
            row.max_sv_err_on_support = std::max(row.max_sv_err_on_support, std::abs(sv[i] - sv0[i]));
        } else {
            row.max_sv_on_zero_svs = std::max(row.max_sv_on_zero_svs, std::abs(sv[i]));
        }
    }
    const double l1 = vec_norm(s.span(), NormIndex::One);
    const double l10 = vec_norm(truth.s0.span(), NormIndex::One);
    row.rel_l1_gap = rel(std::abs(l1 - l10), l10);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double s0 = truth.s0.data()[k];
        const double d = std::abs(s.data()[k] - s0);
        if (s0 != 0.0) {
            row.max_S_err_on_support = std::max(row.max_S_err_on_support, d);
        } else {
            row.max_S_on_zero_set = std::max(row.max_S_on_zero_set, std::abs(s.data()[k]));
        }
    }
    row.rank_est = static_cast<double>(estimate_rank_from_values(sv, x.rows(), x.cols()));

    double res_sq = 0.0, rhs_sq = 0.0;
    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        res_sq += report.residuals.at(i) * report.residuals.at(i);
        rhs_sq += dot(spec.blocks[i].rhs, spec.blocks[i].rhs);
    }
    row.rel_infeasibility = rel(std::sqrt(res_sq), std::sqrt(rhs_sq));
    row.cpu_seconds = report.wall_time;
    return row;
}

std::size_t estimate_rank_from_values(std::span<const double> sigma, std::size_t m, std::size_t n) {
    if (sigma.empty() || !(sigma[0] > 0.0)) return 0;
    const double tol = static_cast<double>(std::max(m, n)) * std::numeric_limits<double>::epsilon() * sigma[0];
    std::size_t r = 0;
    while (r < sigma.size() && sigma[r] > tol) ++r;
    std::size_t cut = r;
    double sharpest = 1e-3;
    for (std::size_t i = 0; i + 1 < r; ++i) {
        const double ratio = sigma[i + 1] / sigma[i];
        if (ratio < sharpest) {
            sharpest = ratio;
            cut = i + 1;
        }
    }
    return cut;
}

std::size_t estimate_rank(const DenseMatrix& x) {
    if (x.empty()) return 0;
    return estimate_rank_from_values(singular_values(x), x.rows(), x.cols());
}

double dual_objective(const ProblemSpec& spec, const DualPoint& pt) {
    if (pt.z.size() != spec.blocks.size()) throw ShapeError("dual_objective: one vector per block required");
    double obj = 0.0;
    std::vector<double> zg;
    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        const auto& b = spec.blocks[i];
        if (pt.z[i].size() != b.rhs.size()) throw ShapeError("dual_objective: block dimension mismatch");
        obj += dot(b.rhs, pt.z[i]);
        if (b.gamma_slack) zg.insert(zg.end(), pt.z[i].begin(), pt.z[i].end());
    }
    if (!zg.empty()) obj -= spec.rho * vec_norm(zg, dual(spec.gamma));
    return obj;
}

DualFeasibility dual_feasible(const ProblemSpec& spec, const DualPoint& pt) {
    if (pt.z.size() != spec.blocks.size()) throw ShapeError("dual_feasible: one vector per block required");
    DenseMatrix adj(spec.m, spec.n);
    std::vector<double> zb;
    for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
        const auto& b = spec.blocks[i];
        if (pt.z[i].size() != b.rhs.size()) throw ShapeError("dual_feasible: block dimension mismatch");
        b.map.adjoint_accumulate(pt.z[i], 1.0, adj);
        if (b.beta_slack) zb.insert(zb.end(), pt.z[i].begin(), pt.z[i].end());
    }
    DualFeasibility f;
    f.schatten = schatten_norm(adj, dual(spec.alpha));
    f.slack = zb.empty() ? 0.0 : vec_norm(zb, dual(spec.beta));
    f.feasible = f.schatten <= spec.mu1 + 1e-10 && f.slack <= spec.mu2 + 1e-10;
    return f;
}

DualPoint scale_to_dual_feasible(const ProblemSpec& spec, DualPoint pt) {
    const DualFeasibility f = dual_feasible(spec, pt);
    double scale = 1.0;
    if (spec.mu1 > 0.0) scale = std::max(scale, f.schatten / spec.mu1);
    if (spec.mu2 > 0.0) scale = std::max(scale, f.slack / spec.mu2);
    if (scale > 1.0)
        for (auto& z : pt.z)
            for (double& v : z) v /= scale;
    return pt;
}

double primal_objective_at(const ProblemSpec& spec, const DenseMatrix& x,
                           std::span<const DenseVector> y_blocks) {
    double obj = spec.mu1 > 0.0 ? spec.mu1 * schatten_norm(x, spec.alpha) : 0.0;
    if (spec.mu2 > 0.0) {
        std::vector<double> s;
        for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
            const auto& b = spec.blocks[i];
            if (!b.beta_slack) continue;
            DenseVector r = b.rhs;
            axpy(-1.0, b.map.apply(x), r);
            if (b.gamma_slack && i < y_blocks.size() && !y_blocks[i].empty()) axpy(-1.0, y_blocks[i], r);
            s.insert(s.end(), r.begin(), r.end());
        }
        obj += spec.mu2 * vec_norm(s, spec.beta);
    }
    return obj;
}

}  // namespace falc
