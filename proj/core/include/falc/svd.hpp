#pragma once

#include <cstddef>
#include <stdexcept>

#include "falc/dense.hpp"

namespace falc {

/// Raised when the Jacobi sweep cap is reached without convergence.
class SvdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thin SVD a = u * diag(singular_values) * vt with r = min(rows, cols) triplets,
/// singular values nonincreasing.
struct SvdResult {
    DenseMatrix u;                 // m x r, orthonormal columns
    DenseVector singular_values;   // r, nonincreasing, >= 0
    DenseMatrix vt;                // r x n, orthonormal rows
};

struct SvdOptions {
    int max_sweeps = 60;
    double tolerance = 1e-14;  // relative off-diagonal threshold
};

/// One-sided (Hestenes) Jacobi SVD.
SvdResult svd_full(const DenseMatrix& a, const SvdOptions& options = {});

/// Same as svd_full, but starts the rotations from the singular vectors of
/// `previous`, a full SVD of a nearby matrix with the same shape. Converges in
/// fewer sweeps when the singular subspaces change little between calls. Falls
/// back to a cold start when the shapes do not match.
SvdResult svd_full_warm(const DenseMatrix& a, const SvdResult& previous,
                        const SvdOptions& options = {});

/// Top-k triplets. Full SVD plus truncation when min(m, n) < 500, otherwise
/// randomized subspace iteration (oversampling 8, 4 power passes).
SvdResult svd_truncated(const DenseMatrix& a, std::size_t k, const SvdOptions& options = {});

/// Singular values only (no vector accumulation).
DenseVector singular_values(const DenseMatrix& a, const SvdOptions& options = {});

/// u * diag(s) * vt; s may be shorter than the thin rank (trailing zeros implied).
DenseMatrix reconstruct(const DenseMatrix& u, std::span<const double> s, const DenseMatrix& vt);

/// ||sigma(x)||_alpha. Frobenius (alpha = 2) is computed without an SVD.
double schatten_norm(const DenseMatrix& x, NormIndex alpha);

/// Largest singular value via the SVD.
double spectral_norm(const DenseMatrix& x);

}  // namespace falc
