#pragma once

#include <limits>
#include <optional>
#include <span>

#include "falc/dense.hpp"
#include "falc/svd.hpp"

namespace falc {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// argmin_x 1/2||x - y||^2 + delta ||x||_beta.
///
/// beta = 1 is the componentwise soft threshold, beta = 2 the radial shrink
/// y * max(1 - delta/||y||_2, 0), and beta = inf is y minus the projection of
/// y onto the l1 ball of radius delta. Coordinates landing exactly on the
/// threshold map to zero.
DenseVector shrink_vec(std::span<const double> y, double delta, NormIndex beta);

/// Euclidean projection of y onto {x : ||x||_gamma <= radius}.
DenseVector project_ball(std::span<const double> y, NormIndex gamma, double radius);

/// argmin_x 1/2||x - y||^2 + delta ||x||_beta subject to ||x||_beta <= eta.
/// eta = kUnbounded reduces to shrink_vec.
DenseVector shrink_vec_ball(std::span<const double> y, double delta, NormIndex beta, double eta);

/// Solution of the Schatten-norm shrinkage, with and without the eta ball.
struct ShrinkResult {
    DenseMatrix constrained;
    DenseMatrix unconstrained;
    double constrained_norm = 0.0;    // ||sigma(constrained)||_alpha
    double unconstrained_norm = 0.0;  // ||sigma(unconstrained)||_alpha
    bool used_svd = false;
};

/// Reuses the previous decomposition as a starting rotation for the next
/// Jacobi SVD of a same-shaped matrix.
struct SvdWarmStart {
    std::optional<SvdResult> previous;
};

/// argmin_X 1/2||X - Y||_F^2 + delta ||sigma(X)||_alpha s.t. ||sigma(X)||_alpha <= eta,
/// together with the unconstrained minimizer. One SVD for alpha in {1, inf},
/// none for alpha = 2.
ShrinkResult shrink_matrix(const DenseMatrix& y, double delta, NormIndex alpha, double eta,
                           SvdWarmStart* warm = nullptr);

/// Least 2-norm element of c * d||.||_beta(s) + grad.
DenseVector least_norm_subgradient(std::span<const double> s, std::span<const double> grad,
                                   double c, NormIndex beta);

/// Euclidean projection onto the probability simplex {w >= 0, sum w = 1}.
DenseVector project_simplex(std::span<const double> a);

}  // namespace falc
