// Acceptance checks, one line per criterion. Tolerances are fixed below.
//
// A criterion can carry a known-open sub-check: it is printed and counted as
// FAIL, but does not change the exit code. Any other failing sub-check does.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "falc/falc.hpp"
#include "falc/linear_map.hpp"
#include "falc/problems.hpp"
#include "falc/prox.hpp"
#include "falc/svd.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "separable.hpp"

namespace {

using namespace falc;
using falc::testing::random_matrix;
using falc::testing::random_vector;
using Clock = std::chrono::steady_clock;

// Criteria 1, 2, 6
constexpr std::size_t kSeeds = 10;
constexpr std::size_t kRpcaN = 200;
constexpr double kRpcaRankFrac = 0.05;
constexpr double kSparseFrac = 0.05;
constexpr double kRelErrX = 1e-4;
constexpr double kRelErrXTight = 1e-7;
constexpr double kTightStagnation = 1e-8;
constexpr double kRelInfeasibility = 1e-6;
constexpr double kSecondsPerSeed = 120.0;
constexpr double kMaxSvd = 120.0;
constexpr double kSlopeWindow = 0.3;
constexpr std::size_t kSlopePoints = 5;
// Criterion 3
constexpr double kStableNoise = 1e-4;
constexpr double kStableRelErrX = 1e-3;
// Criterion 4
constexpr std::size_t kProxInstances = 200;
constexpr double kProxGap = 1e-7;
constexpr double kProxSeconds = 60.0;
constexpr int kOracleIterations = 800;
// Criterion 5
constexpr std::size_t kRateSteps = 500;
// Criterion 7
constexpr std::size_t kBpN = 256, kBpS = 8, kBpQ = 80;
constexpr double kBpRelErr = 1e-5;
constexpr std::size_t kBpMinSuccess = 9;
// Criterion 8
constexpr double kSvdRoundTrip = 1e-10;
constexpr double kAdjoint = 1e-12;
constexpr double kThetaIdentity = 1e-12;
constexpr double kFiniteDifference = 1e-6;

struct Check {
    std::string name;
    bool pass = false;
    bool known_open = false;
    std::string detail;
};

struct Criterion {
    int id = 0;
    std::string title;
    std::vector<Check> checks;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    bool blocking_failure() const {
        return std::any_of(checks.begin(), checks.end(), [](const Check& c) { return !c.pass && !c.known_open; });
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Least-squares slope of ys against xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct RpcaRun {
    std::uint64_t seed = 0;
    MetricsRow metrics;
    MetricsRow tight;
    double seconds = 0.0;
    double decay_slope = 0.0;
};

std::vector<RpcaRun> robust_pca_runs() {
    std::vector<RpcaRun> runs;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const Instance inst = generate_instance(kRpcaN, kRpcaRankFrac, kSparseFrac, 0.0, seed);
        const ProblemSpec spec = preset_robust_pca(inst.d, 1.0 / std::sqrt(static_cast<double>(kRpcaN)));
        RpcaRun r;
        r.seed = seed;
        const auto t0 = Clock::now();
        const SolveReport rep = solve(spec, robust_pca_params());
        r.seconds = seconds_since(t0);
        r.metrics = compute_metrics(rep, inst.truth, spec);
        std::vector<double> ks, logs;
        const std::size_t k = rep.history.size();
        for (std::size_t i = k >= kSlopePoints ? k - kSlopePoints : 0; i < k; ++i) {
            ks.push_back(static_cast<double>(rep.history[i].k));
            logs.push_back(std::log(rep.history[i].residual_norm));
        }
        r.decay_slope = ks.size() >= 2 ? slope(ks, logs) : std::nan("");
        SolverParams tight = robust_pca_params();
        tight.stagnation = kTightStagnation;
        r.tight = compute_metrics(solve(spec, tight), inst.truth, spec);
        std::printf("  robust_pca seed %2llu: rank %g rel_err_X %.2e infeas %.2e zero_set %.2e svd %g "
                    "slope %.3f time %.1fs | tight rel_err_X %.2e zero_set %.2e\n",
                    static_cast<unsigned long long>(seed), r.metrics.rank_est, r.metrics.rel_err_X,
                    r.metrics.rel_infeasibility, r.metrics.max_S_on_zero_set, r.metrics.svd_count, r.decay_slope,
                    r.seconds, r.tight.rel_err_X, r.tight.max_S_on_zero_set);
        std::fflush(stdout);
        runs.push_back(r);
    }
    return runs;
}

template <class Row, class Pred>
Check every_seed(std::string name, const std::vector<Row>& rows, Pred pred, std::string detail) {
    std::size_t ok = 0;
    for (const auto& r : rows) ok += pred(r) ? 1 : 0;
    return {std::move(name), ok == rows.size(), false,
            std::to_string(ok) + "/" + std::to_string(rows.size()) + " seeds" + (detail.empty() ? "" : ", " + detail)};
}

Criterion criterion1(const std::vector<RpcaRun>& runs) {
    Criterion c{1, "robust PCA recovery, n=200, 10 seeds", {}};
    double worst_x = 0, worst_inf = 0, worst_zero = 0, worst_tight = 0, worst_time = 0;
    for (const auto& r : runs) {
        worst_x = std::max(worst_x, r.metrics.rel_err_X);
        worst_inf = std::max(worst_inf, r.metrics.rel_infeasibility);
        worst_zero = std::max(worst_zero, r.metrics.max_S_on_zero_set);
        worst_tight = std::max(worst_tight, r.tight.rel_err_X);
        worst_time = std::max(worst_time, r.seconds);
    }
    c.checks.push_back(every_seed("rank_est = 10", runs, [](const RpcaRun& r) { return r.metrics.rank_est == 10.0; }, ""));
    Check zero = every_seed("max_S_on_zero_set = 0", runs,
                            [](const RpcaRun& r) { return r.metrics.max_S_on_zero_set == 0.0; },
                            fmt("worst %.2e", worst_zero));
    zero.known_open = true;
    c.checks.push_back(zero);
    c.checks.push_back(every_seed("rel_err_X <= 1e-4", runs,
                                  [](const RpcaRun& r) { return r.metrics.rel_err_X <= kRelErrX; },
                                  fmt("worst %.2e", worst_x)));
    c.checks.push_back(every_seed("rel_err_X <= 1e-7 at varrho = 1e-8", runs,
                                  [](const RpcaRun& r) { return r.tight.rel_err_X <= kRelErrXTight; },
                                  fmt("worst %.2e", worst_tight)));
    c.checks.push_back(every_seed("rel_infeasibility <= 1e-6", runs,
                                  [](const RpcaRun& r) { return r.metrics.rel_infeasibility <= kRelInfeasibility; },
                                  fmt("worst %.2e", worst_inf)));
    c.checks.push_back(every_seed("time <= 120 s", runs, [](const RpcaRun& r) { return r.seconds <= kSecondsPerSeed; },
                                  fmt("worst %.1f s", worst_time)));
    return c;
}

Criterion criterion2(const std::vector<RpcaRun>& runs) {
    Criterion c{2, "SVD count per solve <= 120", {}};
    double worst = 0;
    for (const auto& r : runs) worst = std::max(worst, r.metrics.svd_count);
    c.checks.push_back(every_seed("svd_count <= 120", runs, [](const RpcaRun& r) { return r.metrics.svd_count <= kMaxSvd; },
                                  fmt("worst %g", worst)));
    return c;
}

Criterion criterion6(const std::vector<RpcaRun>& runs) {
    const double center = std::log(robust_pca_params().c_lambda);
    Criterion c{6, "outer residual decays at rate c_lambda", {}};
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : runs) {
        lo = std::min(lo, r.decay_slope);
        hi = std::max(hi, r.decay_slope);
    }
    c.checks.push_back(every_seed(
        "slope of log residual vs k in log(0.4) +- 0.3", runs,
        [&](const RpcaRun& r) { return std::fabs(r.decay_slope - center) <= kSlopeWindow; },
        fmt("slopes in [%.3f, %.3f]", lo, hi) + fmt(", window [%.3f, %.3f]", center - kSlopeWindow, center + kSlopeWindow)));
    return c;
}

Criterion criterion3() {
    Criterion c{3, "stable PCP, n=200, noise 1e-4, 10 seeds", {}};
    std::vector<MetricsRow> rows;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const Instance inst = generate_instance(kRpcaN, kRpcaRankFrac, kSparseFrac, kStableNoise, seed);
        const ProblemSpec spec =
            preset_stable_pcp(inst.d, 1.0 / std::sqrt(static_cast<double>(kRpcaN)), kStableNoise);
        const auto t0 = Clock::now();
        const MetricsRow m = compute_metrics(solve(spec, stable_pcp_params()), inst.truth, spec);
        std::printf("  stable_pcp seed %2llu: rank %g rel_err_X %.2e zero_set %.2e svd %g time %.1fs\n",
                    static_cast<unsigned long long>(seed), m.rank_est, m.rel_err_X, m.max_S_on_zero_set,
                    m.svd_count, seconds_since(t0));
        std::fflush(stdout);
        rows.push_back(m);
    }
    double worst_x = 0, worst_zero = 0;
    for (const auto& m : rows) {
        worst_x = std::max(worst_x, m.rel_err_X);
        worst_zero = std::max(worst_zero, m.max_S_on_zero_set);
    }
    c.checks.push_back(every_seed("rank_est = 10", rows, [](const MetricsRow& m) { return m.rank_est == 10.0; }, ""));
    c.checks.push_back(every_seed("rel_err_X <= 1e-3", rows,
                                  [](const MetricsRow& m) { return m.rel_err_X <= kStableRelErrX; },
                                  fmt("worst %.2e", worst_x)));
    Check zero = every_seed("max_S_on_zero_set = 0", rows,
                            [](const MetricsRow& m) { return m.max_S_on_zero_set == 0.0; },
                            fmt("worst %.2e", worst_zero));
    zero.known_open = true;
    c.checks.push_back(zero);
    return c;
}

struct GapTally {
    std::size_t instances = 0;
    std::size_t violations = 0;
    double worst = -INFINITY;

    void add(double gap) {
        ++instances;
        worst = std::max(worst, gap);
        if (gap > kProxGap) ++violations;
    }
    Check check(std::string name) const {
        return {std::move(name), violations == 0, false,
                std::to_string(instances) + " instances, " + std::to_string(violations) + " violations, " +
                    fmt("worst gap %.2e", worst)};
    }
};

Criterion criterion4() {
    Criterion c{4, "prox operators vs subgradient oracle, dim <= 4", {}};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> unif_delta(0.0, 2.0), unif_eta(0.1, 3.0);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    const NormIndex norms[] = {NormIndex::One, NormIndex::Two, NormIndex::Inf};
    const std::pair<std::size_t, std::size_t> shapes[] = {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1},
                                                          {2, 2}, {1, 4}, {4, 1}};
    GapTally shrink, ball_shrink, project, mat_free, mat_ball, least_norm, simplex;
    for (NormIndex p : norms) {
        for (std::size_t t = 0; t < kProxInstances; ++t) {
            const std::size_t d = dim(rng);
            const DenseVector y = random_vector(d, rng, 2.0);
            const oracle::Vec yv = oracle::to_vec(y);
            const double delta = unif_delta(rng), eta = unif_eta(rng);

            const oracle::Vec u = oracle::to_vec(shrink_vec(y, delta, p));
            const auto ru = oracle::vector_prox(yv, delta, p, kUnbounded, rng, kOracleIterations, 3, {u});
            shrink.add(oracle::prox_objective(u, yv, delta, p) - ru.value);

            const oracle::Vec b = oracle::to_vec(shrink_vec_ball(y, delta, p, eta));
            const auto rb = oracle::vector_prox(yv, delta, p, eta, rng, kOracleIterations, 3, {b});
            const bool inside = oracle::norm_p(b, p) <= eta * (1.0 + 1e-12);
            ball_shrink.add(inside ? oracle::prox_objective(b, yv, delta, p) - rb.value : INFINITY);

            const oracle::Vec pr = oracle::to_vec(project_ball(y, p, eta));
            const auto rp = oracle::vector_prox(yv, 0.0, p, eta, rng, kOracleIterations, 3, {pr});
            const bool feasible = oracle::norm_p(pr, p) <= eta * (1.0 + 1e-12);
            project.add(feasible ? 0.5 * oracle::dist2(pr, yv) - rp.value : INFINITY);

            const auto [m, n] = shapes[t % std::size(shapes)];
            const DenseMatrix ym = random_matrix(m, n, rng, 2.0);
            const ShrinkResult r = shrink_matrix(ym, delta, p, eta);
            const oracle::Vec ymv = oracle::to_vec(ym.span());
            auto f = [&](const DenseMatrix& x) {
                return 0.5 * oracle::dist2(oracle::to_vec(x.span()), ymv) + delta * oracle::schatten(x, p);
            };
            const auto rmu = oracle::matrix_prox(ym, delta, p, kUnbounded, rng, kOracleIterations, 3,
                                                 {oracle::to_vec(r.unconstrained.span())});
            mat_free.add(f(r.unconstrained) - rmu.value);
            const auto rmc = oracle::matrix_prox(ym, delta, p, eta, rng, kOracleIterations, 3,
                                                 {oracle::to_vec(r.constrained.span())});
            const bool in_ball = oracle::schatten(r.constrained, p) <= eta * (1.0 + 1e-10);
            mat_ball.add(in_ball ? f(r.constrained) - rmc.value : INFINITY);

            DenseVector s = random_vector(d, rng);
            if (t % 3 == 0) s[0] = 0.0;
            if (t % 5 == 0) s.fill(0.0);
            const DenseVector grad = random_vector(d, rng);
            const double cw = 0.5 + static_cast<double>(t % 3);
            const DenseVector g = least_norm_subgradient(s, grad, cw, p);
            oracle::Vec sub(d);
            for (std::size_t i = 0; i < d; ++i) sub[i] = (g[i] - grad[i]) / cw;
            const bool member = oracle::in_subdifferential(oracle::to_vec(s), sub, p, 1e-10);
            const double ref = oracle::least_norm_subgradient_norm(oracle::to_vec(s), oracle::to_vec(grad), cw, p);
            least_norm.add(member ? norm2(g) - ref : INFINITY);
        }
    }
    for (std::size_t t = 0; t < kProxInstances; ++t) {
        const DenseVector a = random_vector(dim(rng), rng, 2.0);
        const oracle::Vec w = oracle::to_vec(project_simplex(a));
        const oracle::Vec ref = oracle::project_simplex(oracle::to_vec(a));
        double sum = 0.0, lowest = 0.0;
        for (double v : w) {
            sum += v;
            lowest = std::min(lowest, v);
        }
        const bool feasible = std::fabs(sum - 1.0) <= 1e-12 && lowest >= 0.0;
        simplex.add(feasible ? 0.5 * (oracle::dist2(w, oracle::to_vec(a)) - oracle::dist2(ref, oracle::to_vec(a)))
                             : INFINITY);
    }
    const double secs = seconds_since(t0);
    c.checks.push_back(shrink.check("vector shrinkage"));
    c.checks.push_back(ball_shrink.check("ball-constrained vector shrinkage"));
    c.checks.push_back(project.check("ball projection"));
    c.checks.push_back(mat_free.check("matrix shrinkage"));
    c.checks.push_back(mat_ball.check("ball-constrained matrix shrinkage"));
    c.checks.push_back(least_norm.check("least-norm subgradient"));
    c.checks.push_back(simplex.check("simplex projection"));
    c.checks.push_back({"runtime <= 60 s", secs <= kProxSeconds, false, fmt("%.1f s", secs)});
    return c;
}

Criterion criterion5() {
    Criterion c{5, "inner solver meets the 4 L h / (l+1)^2 bound", {}};
    struct Shape {
        std::size_t m, n;
        double lambda, mu2, rho;
    };
    const Shape shapes[] = {{6, 6, 0.3, 0.5, 0.0}, {5, 8, 0.2, 0.4, 0.1}, {8, 5, 0.5, 2.0, 0.0},
                            {7, 7, 0.1, 0.3, 0.05}, {4, 9, 1.0, 1.5, 0.2}};
    std::mt19937_64 rng(505);
    std::size_t violations = 0;
    double worst = 0.0;
    for (const Shape& s : shapes) {
        const falc::testing::SeparableCase sc = falc::testing::make_separable(s.m, s.n, s.lambda, s.mu2, s.rho, rng);
        const falc::testing::RateCheck rc = falc::testing::check_rate(sc, kRateSteps, rng);
        violations += rc.violations;
        worst = std::max(worst, rc.worst_ratio);
    }
    c.checks.push_back({"zero violations over 5 instances x 500 steps", violations == 0, false,
                        std::to_string(violations) + " violations, " + fmt("worst gap/bound %.3f", worst)});
    return c;
}

Criterion criterion7() {
    Criterion c{7, "basis pursuit n=256, s=8, q=80", {}};
    std::size_t success = 0, strict = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
        const SparseInstance inst = generate_sparse(kBpN, kBpS, kBpQ, seed);
        const SparseRecovery r = sparse_recovery(solve(preset_basis_pursuit(inst.a, inst.b), basis_pursuit_params()), inst);
        std::printf("  basis_pursuit seed %2llu: rel_err %.2e support %s, slack nonzeros %s\n",
                    static_cast<unsigned long long>(seed), r.rel_err, r.support_exact ? "exact" : "wrong",
                    r.slack_support_exact ? "exact" : "leak");
        success += r.support_exact && r.rel_err <= kBpRelErr;
        strict += r.slack_support_exact;
        worst = std::max(worst, r.rel_err);
    }
    c.checks.push_back({"exact support and rel_err <= 1e-5 on >= 9 of 10 seeds", success >= kBpMinSuccess, false,
                        std::to_string(success) + "/10 seeds, " + fmt("worst rel_err %.2e", worst) +
                            ", support cut at 1e-5 max|x|; exact slack nonzeros on " + std::to_string(strict) + "/10"});
    return c;
}

Criterion criterion8() {
    Criterion c{8, "invariant suites", {}};
    std::mt19937_64 rng(808);

    double svd_worst = 0.0;
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 3}, {7, 4}, {4, 7}, {20, 20}, {50, 30}}) {
        const DenseMatrix a = random_matrix(m, n, rng);
        const SvdResult s = svd_full(a);
        svd_worst = std::max(svd_worst, max_abs((reconstruct(s.u, s.singular_values, s.vt) - a).span()));
    }
    c.checks.push_back({"SVD round trip <= 1e-10", svd_worst <= kSvdRoundTrip, false, fmt("worst %.2e", svd_worst)});

    double adj_worst = 0.0;
    for (const LinearMap& a : falc::testing::all_variants(4, 3, rng)) {
        for (int t = 0; t < 50; ++t) {
            const DenseMatrix x = random_matrix(4, 3, rng);
            const DenseVector z = random_vector(a.out_dim(), rng);
            const double lhs = dot(a.apply(x), z);
            const double rhs = dot(x.span(), a.adjoint(z).span());
            adj_worst = std::max(adj_worst, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
        }
    }
    c.checks.push_back({"adjoint identity <= 1e-12", adj_worst <= kAdjoint, false, fmt("worst %.2e", adj_worst)});

    double theta_worst = 0.0, t = 1.0;
    for (int l = 0; l < 50; ++l) {
        const double next = theta_next(t);
        theta_worst = std::max(theta_worst, std::fabs((1.0 - next) / (next * next) - 1.0 / (t * t)) * t * t);
        t = next;
    }
    c.checks.push_back(
        {"theta recursion identity <= 1e-12", theta_worst <= kThetaIdentity, false, fmt("worst %.2e", theta_worst)});

    double fd_worst = 0.0;
    for (const ProblemSpec& spec : falc::testing::block_structures(rng)) {
        const Subproblem sub = falc::testing::subproblem_of(spec, rng);
        for (int probe = 0; probe < 10; ++probe) {
            const DenseMatrix x = random_matrix(sub.m, sub.n, rng), dx = random_matrix(sub.m, sub.n, rng);
            const DenseVector s = random_vector(sub.layout.s_dim, rng), ds = random_vector(sub.layout.s_dim, rng);
            const DenseVector y = random_vector(sub.layout.y_dim, rng), dy = random_vector(sub.layout.y_dim, rng);
            const Gradient g = smooth_gradient(sub, x, s, y);
            const double h = 1e-6;
            auto f = [&](double step) {
                return smooth_gradient(sub, x + step * dx, (s + step * ds).span(), (y + step * dy).span()).value;
            };
            const double fd = (f(h) - f(-h)) / (2.0 * h);
            const double an = dot(g.x.span(), dx.span()) + dot(g.s, ds) + dot(g.y, dy);
            fd_worst = std::max(fd_worst, std::fabs(fd - an) / std::max(1.0, std::fabs(an)));
        }
    }
    c.checks.push_back(
        {"gradient finite differences <= 1e-6", fd_worst <= kFiniteDifference, false, fmt("worst %.2e", fd_worst)});

    std::size_t dual_violations = 0, dual_points = 0;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double rho : {0.0, 0.05}) {
        const Instance inst = generate_instance(12, 0.2, 0.05, rho, 8);
        const ProblemSpec spec = rho > 0.0 ? preset_stable_pcp(inst.d, 0.3, rho) : preset_robust_pca(inst.d, 0.3);
        std::vector<DenseVector> y;
        if (rho > 0.0) y.push_back(vec(inst.truth.y0));
        const double primal = primal_objective_at(spec, inst.truth.x0, y);
        for (int k = 0; k < 200; ++k) {
            DualPoint z{{DenseVector(144)}};
            for (double& v : z.z[0]) v = gauss(rng);
            z = scale_to_dual_feasible(spec, z);
            ++dual_points;
            if (!dual_feasible(spec, z).feasible || dual_objective(spec, z) > primal + 1e-12 * std::fabs(primal))
                ++dual_violations;
        }
    }
    c.checks.push_back({"weak duality", dual_violations == 0, false,
                        std::to_string(dual_points) + " dual points, " + std::to_string(dual_violations) + " violations"});

    const Instance inst = generate_instance(40, 0.05, 0.05, 0.0, 3);
    const ProblemSpec spec = preset_robust_pca(inst.d, 1.0 / std::sqrt(40.0));
    const SolveReport a = solve(spec, robust_pca_params());
    const SolveReport b = solve(spec, robust_pca_params());
    bool same = a.x_final == b.x_final && a.s_final == b.s_final && a.multipliers == b.multipliers &&
                a.objective == b.objective && a.svd_count == b.svd_count && a.history.size() == b.history.size();
    for (std::size_t i = 0; same && i < a.history.size(); ++i)
        same = a.history[i].residual_norm == b.history[i].residual_norm &&
               a.history[i].objective == b.history[i].objective && a.history[i].lambda == b.history[i].lambda;
    c.checks.push_back({"determinism", same, false, "two solves compared bitwise"});
    return c;
}

void print(const Criterion& c) {
    std::printf("criterion %d: %s  %s\n", c.id, c.pass() ? "PASS" : "FAIL", c.title.c_str());
    for (const Check& k : c.checks)
        std::printf("    [%s] %s: %s%s\n", k.pass ? "ok" : "FAIL", k.name.c_str(), k.detail.c_str(),
                    !k.pass && k.known_open ? " (known open)" : "");
    std::fflush(stdout);
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    auto record = [&](Criterion c) {
        print(c);
        results.push_back(std::move(c));
    };
    record(criterion4());
    record(criterion5());
    record(criterion8());
    record(criterion7());
    const std::vector<RpcaRun> runs = robust_pca_runs();
    record(criterion1(runs));
    record(criterion2(runs));
    record(criterion6(runs));
    record(criterion3());

    std::sort(results.begin(), results.end(), [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    std::printf("\nsummary\n");
    std::size_t passed = 0;
    bool blocking = false;
    for (const Criterion& c : results) {
        std::printf("criterion %d: %s\n", c.id, c.pass() ? "PASS" : c.blocking_failure() ? "FAIL" : "FAIL (known open)");
        passed += c.pass();
        blocking = blocking || c.blocking_failure();
    }
    std::printf("%zu/%zu criteria pass\n", passed, results.size());
    return blocking ? 1 : 0;
}
