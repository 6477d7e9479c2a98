#pragma once

// Subproblems whose data sit on a generalized permutation pattern, so the
// minimizer decouples into scalar problems with a closed form.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "falc/inner_apg.hpp"
#include "falc/problems.hpp"
#include "oracles.hpp"

namespace falc::testing {

struct SeparableCase {
    ProblemSpec spec;
    Subproblem sub;
    DenseMatrix x_opt;
    DenseVector s_opt;
    DenseVector y_opt;
    double p_opt = 0.0;
};

/// min lam (||X||_* + mu2 ||s||_1) + 1/2 ||vec(X) + s + y - vec(R)||^2, ||y||_inf <= rho,
/// with R nonzero on min(m, n) positions of a random generalized permutation.
inline SeparableCase make_separable(std::size_t m, std::size_t n, double lam, double mu2, double rho,
                                    std::mt19937_64& rng) {
    std::vector<std::size_t> rows(m), cols(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    std::normal_distribution<double> g(0.0, 2.0 * lam);
    DenseMatrix r(m, n), xo(m, n), so(m, n), yo(m, n);
    for (std::size_t k = 0; k < std::min(m, n); ++k) {
        const std::size_t i = rows[k], j = cols[k];
        r(i, j) = g(rng);
        const oracle::ScalarOptimum o = oracle::scalar_optimum(r(i, j), lam, mu2, rho);
        xo(i, j) = o.x;
        so(i, j) = o.s;
        yo(i, j) = o.y;
    }
    SeparableCase c;
    c.spec = rho > 0.0 ? preset_stable_pcp(r, mu2, rho) : preset_robust_pca(r, mu2);
    const std::vector<DenseVector> zero{DenseVector(m * n)};
    c.sub = make_subproblem(c.spec, zero, lam, kUnbounded, stacked_lipschitz(c.spec));
    c.x_opt = xo;
    c.s_opt = vec(so);
    c.y_opt = rho > 0.0 ? vec(yo) : DenseVector();
    double p = 0.0;
    for (std::size_t t = 0; t < m * n; ++t) {
        const double x = xo.data()[t], s = so.data()[t], y = yo.data()[t];
        const double res = x + s + y - r.data()[t];
        p += lam * (std::fabs(x) + mu2 * std::fabs(s)) + 0.5 * res * res;
    }
    c.p_opt = p;
    return c;
}

/// 1/2 squared distance of (x, s, y) to the optimum.
inline double prox_distance(const SeparableCase& c, const DenseMatrix& x, const DenseVector& s,
                            const DenseVector& y) {
    double h = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) h += std::pow(x.data()[i] - c.x_opt.data()[i], 2);
    for (std::size_t i = 0; i < s.size(); ++i) h += std::pow(s[i] - c.s_opt[i], 2);
    for (std::size_t i = 0; i < y.size(); ++i) h += std::pow(y[i] - c.y_opt[i], 2);
    return 0.5 * h;
}

struct RateCheck {
    std::size_t violations = 0;
    double worst_ratio = 0.0;  // max over steps of gap / bound
};

/// Runs `steps` inner steps from a random start and compares P(x1) - P* with
/// 4 L h / (l + 1)^2 after every step.
inline RateCheck check_rate(const SeparableCase& c, std::size_t steps, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    DenseMatrix x0(c.sub.m, c.sub.n);
    for (double& v : x0.span()) v = g(rng);
    DenseVector s0(c.sub.layout.s_dim), y0(c.sub.layout.y_dim);
    for (double& v : s0) v = g(rng);
    const double h = prox_distance(c, x0, s0, y0);
    InnerState st = InnerState::start(c.sub, x0, s0, y0);
    RateCheck out;
    for (std::size_t l = 1; l <= steps; ++l) {
        inner_step(c.sub, st);
        const double gap = subproblem_objective(c.sub, st.x1, st.s1, st.y1) - c.p_opt;
        const double bound = 4.0 * c.sub.lipschitz * h / std::pow(l + 1.0, 2);
        const double slack = 1e-12 * (1.0 + std::fabs(c.p_opt));
        if (gap > bound + slack) ++out.violations;
        out.worst_ratio = std::max(out.worst_ratio, gap / bound);
    }
    return out;
}

}  // namespace falc::testing
