#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "falc/prox.hpp"
#include "falc/svd.hpp"
#include "oracles.hpp"

namespace falc {
namespace {

constexpr NormIndex kNorms[] = {NormIndex::One, NormIndex::Two, NormIndex::Inf};

DenseVector random_vector(std::size_t n, std::mt19937_64& rng, double scale = 2.0) {
    std::normal_distribution<double> g(0.0, scale);
    DenseVector v(n);
    for (double& x : v) x = g(rng);
    return v;
}

DenseMatrix random_matrix(std::size_t m, std::size_t n, std::mt19937_64& rng, double scale = 2.0) {
    std::normal_distribution<double> g(0.0, scale);
    DenseMatrix a(m, n);
    for (double& v : a.span()) v = g(rng);
    return a;
}

void expect_vec_near(const DenseVector& a, std::initializer_list<double> b, double tol) {
    ASSERT_EQ(a.size(), b.size());
    std::size_t i = 0;
    for (double v : b) EXPECT_NEAR(a[i++], v, tol);
}

TEST(ShrinkVec, Examples) {
    const DenseVector y1{3.0, -0.5, 0.0};
    expect_vec_near(shrink_vec(y1, 1.0, NormIndex::One), {2.0, 0.0, 0.0}, 0.0);
    const DenseVector y2{3.0, 4.0};
    expect_vec_near(shrink_vec(y2, 2.0, NormIndex::Two), {1.8, 2.4}, 1e-15);
    // beta = inf, y = (2, 1), delta = 1.5: fine grid plus refinement
    const DenseVector y3{2.0, 1.0};
    const DenseVector x = shrink_vec(y3, 1.5, NormIndex::Inf);
    const oracle::Vec yv{2.0, 1.0};
    double best = 1e300;
    oracle::Vec arg{0, 0};
    for (int i = -400; i <= 400; ++i)
        for (int j = -400; j <= 400; ++j) {
            const oracle::Vec p{i * 0.01, j * 0.01};
            const double f = oracle::prox_objective(p, yv, 1.5, NormIndex::Inf);
            if (f < best) { best = f; arg = p; }
        }
    for (double h = 0.005; h > 1e-10; h *= 0.5)
        for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j) {
                const oracle::Vec p{arg[0] + i * h, arg[1] + j * h};
                const double f = oracle::prox_objective(p, yv, 1.5, NormIndex::Inf);
                if (f < best) { best = f; arg = p; }
            }
    EXPECT_NEAR(x[0], arg[0], 1e-6);
    EXPECT_NEAR(x[1], arg[1], 1e-6);
}

TEST(ShrinkVec, ThresholdTiesMapToZero) {
    const DenseVector y{1.0, -1.0, 2.0};
    const DenseVector x = shrink_vec(y, 1.0, NormIndex::One);
    EXPECT_EQ(x[0], 0.0);
    EXPECT_EQ(x[1], 0.0);
    EXPECT_EQ(x[2], 1.0);
}

TEST(ProjectBall, Examples) {
    expect_vec_near(project_ball(DenseVector{3.0, 4.0}, NormIndex::Two, 1.0), {0.6, 0.8}, 1e-15);
    expect_vec_near(project_ball(DenseVector{3.0, -1.0}, NormIndex::Inf, 2.0), {2.0, -1.0}, 0.0);
    expect_vec_near(project_ball(DenseVector{1.0, 0.5}, NormIndex::One, 1.0), {0.75, 0.25}, 1e-15);
    expect_vec_near(project_ball(DenseVector{1.0, -2.0}, NormIndex::One, 0.0), {0.0, 0.0}, 0.0);
}

TEST(ShrinkVecBall, Examples) {
    const DenseVector y{3.0, -1.0, 0.5};
    expect_vec_near(shrink_vec_ball(y, 0.1, NormIndex::Inf, 1.0), {1.0, -1.0, 0.5}, 1e-15);
    std::mt19937_64 rng(1);
    const DenseVector z = random_vector(4, rng);
    for (NormIndex b : kNorms)
        EXPECT_EQ(shrink_vec_ball(z, 0.3, b, kUnbounded), shrink_vec(z, 0.3, b));
    // beta = 1, y = (4, 2, 1), delta = 0.5, eta = 2
    const DenseVector w{4.0, 2.0, 1.0};
    const DenseVector x = shrink_vec_ball(w, 0.5, NormIndex::One, 2.0);
    const oracle::Vec wv{4.0, 2.0, 1.0};
    const auto ref = oracle::vector_prox(wv, 0.5, NormIndex::One, 2.0, rng, 100000);
    const double ours = oracle::prox_objective(oracle::to_vec(x), wv, 0.5, NormIndex::One);
    EXPECT_LE(ours, ref.value + 1e-8);
    EXPECT_NEAR(vec_norm(x, NormIndex::One), 2.0, 1e-12);
}

TEST(ProxOracle, VectorOperatorsMatchSubgradientOracle) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        const std::size_t d = 1 + t % 4;
        const DenseVector y = random_vector(d, rng);
        const oracle::Vec yv = oracle::to_vec(y);
        const double delta = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        const double eta = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
        for (NormIndex b : kNorms) {
            const DenseVector u = shrink_vec(y, delta, b);
            const auto ru = oracle::vector_prox(yv, delta, b, kUnbounded, rng, 5000, 3);
            EXPECT_LE(oracle::prox_objective(oracle::to_vec(u), yv, delta, b), ru.value + 1e-7);

            const DenseVector c = shrink_vec_ball(y, delta, b, eta);
            EXPECT_LE(vec_norm(c, b), eta + 1e-12);
            const auto rc = oracle::vector_prox(yv, delta, b, eta, rng, 5000, 3);
            EXPECT_LE(oracle::prox_objective(oracle::to_vec(c), yv, delta, b), rc.value + 1e-7);

            const DenseVector p = project_ball(y, b, eta);
            const oracle::Vec pr = oracle::project_ball(yv, b, eta);
            for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(p[i], pr[i], 1e-9);
        }
    }
}

TEST(ProxProperties, NonexpansiveIdempotentMoreau) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const DenseVector a = random_vector(5, rng), b = random_vector(5, rng);
        const double delta = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        for (NormIndex p : kNorms) {
            const DenseVector pa = shrink_vec(a, delta, p), pb = shrink_vec(b, delta, p);
            EXPECT_LE(norm2((pa - pb).span()), norm2((a - b).span()) + 1e-12);
            // Moreau: y = prox_{delta||.||}(y) + Pi_{delta B_{p*}}(y)
            const DenseVector q = project_ball(a, dual(p), delta);
            EXPECT_LE(max_abs((pa + q - a).span()), 1e-12);
            const DenseVector ball = project_ball(a, p, delta);
            EXPECT_LE(vec_norm(ball, p), delta * (1 + 1e-12) + 1e-15);
            const DenseVector twice = project_ball(ball, p, delta);
            EXPECT_LE(max_abs((twice - ball).span()), 1e-12);
        }
    }
}

TEST(ShrinkMatrix, DiagonalExampleAndIdentity) {
    const DenseMatrix y = DenseMatrix::from_rows({{3, 0}, {0, 1}});
    const ShrinkResult r = shrink_matrix(y, 1.5, NormIndex::One, kUnbounded);
    EXPECT_LE(max_abs((r.constrained - DenseMatrix::from_rows({{1.5, 0}, {0, 0}})).span()), 1e-14);
    EXPECT_TRUE(r.used_svd);
    std::mt19937_64 rng(4);
    const DenseMatrix z = random_matrix(3, 4, rng);
    const ShrinkResult id = shrink_matrix(z, 0.0, NormIndex::One, kUnbounded);
    EXPECT_LE(max_abs((id.constrained - z).span()), 1e-12);
    const ShrinkResult fro = shrink_matrix(z, 0.5, NormIndex::Two, kUnbounded);
    EXPECT_FALSE(fro.used_svd);
}

TEST(ShrinkMatrix, NuclearOptimalityConditions) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const DenseMatrix y = random_matrix(3, 3, rng);
        const double delta = 0.7;
        const DenseMatrix x = shrink_matrix(y, delta, NormIndex::One, kUnbounded).constrained;
        const DenseMatrix r = y - x;
        EXPECT_LE(oracle::schatten(r, NormIndex::Inf), delta + 1e-8);
        const double inner = dot(r.span(), x.span());
        EXPECT_NEAR(inner, delta * oracle::schatten(x, NormIndex::One), 1e-8 * (1.0 + std::fabs(inner)));
    }
}

TEST(ShrinkMatrix, DiagonalConsistencyWithVectorShrink) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 50; ++t) {
        DenseVector d = random_vector(4, rng);
        for (double& v : d) v = std::fabs(v);
        const DenseMatrix y = DenseMatrix::diagonal(d);
        for (NormIndex a : kNorms) {
            const ShrinkResult r = shrink_matrix(y, 0.8, a, 1.5);
            const DenseVector ref = shrink_vec_ball(d, 0.8, a, 1.5);
            for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::fabs(r.constrained(i, i)), ref[i], 1e-10);
            EXPECT_LE(r.constrained_norm, 1.5 + 1e-12);
        }
    }
}

TEST(ShrinkMatrix, BallInactiveGivesSameSolutions) {
    std::mt19937_64 rng(7);
    const DenseMatrix y = random_matrix(3, 2, rng);
    for (NormIndex a : kNorms) {
        const ShrinkResult r = shrink_matrix(y, 0.3, a, 1e6);
        EXPECT_LE(max_abs((r.constrained - r.unconstrained).span()), 1e-14);
        EXPECT_NEAR(r.unconstrained_norm, oracle::schatten(r.unconstrained, a), 1e-10);
    }
}

TEST(ProxOracle, MatrixShrinkMatchesSubgradientOracle) {
    std::mt19937_64 rng(8);
    const std::pair<std::size_t, std::size_t> shapes[] = {{2, 2}, {1, 4}, {4, 1}, {2, 1}};
    for (int t = 0; t < 8; ++t) {
        const auto [m, n] = shapes[t % 4];
        const DenseMatrix y = random_matrix(m, n, rng);
        const oracle::Vec yv = oracle::to_vec(y.span());
        const double delta = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        const double eta = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
        for (NormIndex a : kNorms) {
            const ShrinkResult r = shrink_matrix(y, delta, a, eta);
            auto f = [&](const DenseMatrix& x) {
                return 0.5 * oracle::dist2(oracle::to_vec(x.span()), yv) + delta * oracle::schatten(x, a);
            };
            EXPECT_LE(oracle::schatten(r.constrained, a), eta + 1e-10);
            const auto rc = oracle::matrix_prox(y, delta, a, eta, rng, 5000, 3);
            EXPECT_LE(f(r.constrained), rc.value + 1e-7);
            const auto ru = oracle::matrix_prox(y, delta, a, kUnbounded, rng, 5000, 3);
            EXPECT_LE(f(r.unconstrained), ru.value + 1e-7);
        }
    }
}

TEST(LeastNormSubgradient, ZeroCoordinateClipsGradient) {
    const DenseVector s{0.0, 2.0};
    const DenseVector grad{0.3, -0.1};
    const DenseVector g = least_norm_subgradient(s, grad, 1.0, NormIndex::One);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_NEAR(g[1], 0.9, 1e-15);
    const DenseVector big = least_norm_subgradient(DenseVector{0.0}, DenseVector{-3.0}, 1.0, NormIndex::One);
    EXPECT_NEAR(big[0], -2.0, 1e-15);
}

TEST(LeastNormSubgradient, MatchesProjectionOracle) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
        const std::size_t d = 1 + t % 4;
        DenseVector s = random_vector(d, rng);
        if (t % 3 == 0) s[0] = 0.0;
        if (t % 5 == 0) s.fill(0.0);
        if (t % 7 == 0 && d > 1) s[1] = -s[0];
        const DenseVector grad = random_vector(d, rng);
        const double c = 0.5 + t % 3;
        for (NormIndex p : kNorms) {
            const DenseVector g = least_norm_subgradient(s, grad, c, p);
            oracle::Vec sub(d);
            for (std::size_t i = 0; i < d; ++i) sub[i] = (g[i] - grad[i]) / c;
            EXPECT_TRUE(oracle::in_subdifferential(oracle::to_vec(s), sub, p, 1e-10));
            const double ref = oracle::least_norm_subgradient_norm(oracle::to_vec(s), oracle::to_vec(grad), c, p);
            EXPECT_LE(norm2(g), ref + 1e-9);
        }
    }
}

TEST(ProjectSimplex, MatchesBisectionOracle) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 200; ++t) {
        const DenseVector a = random_vector(1 + t % 6, rng);
        const DenseVector w = project_simplex(a);
        const oracle::Vec ref = oracle::project_simplex(oracle::to_vec(a));
        double sum = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            EXPECT_GE(w[i], 0.0);
            EXPECT_NEAR(w[i], ref[i], 1e-12);
            sum += w[i];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

}  // namespace
}  // namespace falc
