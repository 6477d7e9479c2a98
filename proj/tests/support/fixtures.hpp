#pragma once

// Random data and problem fixtures shared by the unit and acceptance tests.

#include <random>
#include <utility>
#include <vector>

#include "falc/inner_apg.hpp"
#include "falc/problems.hpp"

namespace falc::testing {

inline DenseMatrix random_matrix(std::size_t m, std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    DenseMatrix a(m, n);
    for (double& v : a.span()) v = g(rng);
    return a;
}

inline DenseVector random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    DenseVector v(n);
    for (double& x : v) x = g(rng);
    return v;
}

/// Every block structure the presets produce, plus a mixed two-block spec.
inline std::vector<ProblemSpec> block_structures(std::mt19937_64& rng) {
    std::vector<ProblemSpec> out;
    const DenseMatrix d = random_matrix(4, 3, rng);
    out.push_back(preset_robust_pca(d, 0.5));
    out.push_back(preset_stable_pcp(d, 0.5, 0.1));
    const std::pair<std::size_t, std::size_t> omega[] = {{0, 0}, {1, 2}, {3, 1}, {2, 0}, {0, 2}};
    out.push_back(preset_matrix_completion(omega, random_vector(5, rng), 4, 3));
    out.push_back(preset_basis_pursuit(random_matrix(3, 6, rng), random_vector(3, rng)));
    ProblemSpec mixed;
    mixed.m = 3;
    mixed.n = 2;
    mixed.mu1 = 1.0;
    mixed.mu2 = 0.7;
    mixed.rho = 0.2;
    mixed.gamma = NormIndex::Two;
    mixed.beta = NormIndex::Inf;
    ConstraintBlock a;
    a.map = LinearMap::dense(3, 2, random_matrix(4, 6, rng));
    a.rhs = random_vector(4, rng);
    a.gamma_slack = true;
    ConstraintBlock c;
    c.map = LinearMap::vectorize(3, 2);
    c.rhs = random_vector(6, rng);
    c.beta_slack = true;
    mixed.blocks = {a, c};
    out.push_back(mixed);
    return out;
}

inline Subproblem subproblem_of(const ProblemSpec& spec, std::mt19937_64& rng, double lambda = 0.3) {
    std::vector<DenseVector> thetas;
    for (const auto& b : spec.blocks) thetas.push_back(random_vector(b.rhs.size(), rng, 0.5));
    return make_subproblem(spec, thetas, lambda, kUnbounded, stacked_lipschitz(spec));
}

inline std::vector<LinearMap> all_variants(std::size_t m, std::size_t n, std::mt19937_64& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> entries{{0, 0}, {m - 1, n - 1}, {1, 2}, {0, n - 1}};
    return {LinearMap::zero(m, n), LinearMap::vectorize(m, n), LinearMap::sampling(m, n, entries),
            LinearMap::dense(m, n, random_matrix(5, m * n, rng)),
            LinearMap::scaled(LinearMap::vectorize(m, n), -2.5),
            LinearMap::scaled(LinearMap::dense(m, n, random_matrix(3, m * n, rng)), 0.5)};
}

}  // namespace falc::testing
