#include "falc/svd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace falc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Rotates column pairs of `w` (m >= n) until all pairs are numerically
// orthogonal. Applies the same rotations to `v` when given.
void jacobi_orthogonalize(DenseMatrix& w, DenseMatrix* v, const SvdOptions& options) {
    const std::size_t m = w.rows();
    const std::size_t n = w.cols();
    const double tol = std::max(options.tolerance, std::sqrt(static_cast<double>(m)) * kEps);
    std::vector<double> sq(n);

    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
        for (std::size_t j = 0; j < n; ++j) {
            const double nj = norm2(w.column(j));
            sq[j] = nj * nj;
        }
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            double* wp = w.column(p).data();
            for (std::size_t q = p + 1; q < n; ++q) {
                const double a = sq[p];
                const double b = sq[q];
                if (a == 0.0 || b == 0.0) continue;
                double* wq = w.column(q).data();
                double c = 0.0;
                for (std::size_t i = 0; i < m; ++i) c += wp[i] * wq[i];
                if (std::abs(c) <= tol * std::sqrt(a) * std::sqrt(b)) continue;
                rotated = true;

                const double zeta = (b - a) / (2.0 * c);
                double t;
                if (std::abs(zeta) > 1e150) {
                    t = 0.5 / zeta;
                } else {
                    t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                }
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double x = wp[i];
                    const double y = wq[i];
                    wp[i] = cs * x - sn * y;
                    wq[i] = sn * x + cs * y;
                }
                sq[p] = std::max(a - t * c, 0.0);
                sq[q] = b + t * c;
                if (v != nullptr) {
                    double* vp = v->column(p).data();
                    double* vq = v->column(q).data();
                    for (std::size_t i = 0; i < v->rows(); ++i) {
                        const double x = vp[i];
                        const double y = vq[i];
                        vp[i] = cs * x - sn * y;
                        vq[i] = sn * x + cs * y;
                    }
                }
            }
        }
        if (!rotated) return;
    }
    throw SvdError("Jacobi SVD did not converge within " + std::to_string(options.max_sweeps) +
                   " sweeps (" + std::to_string(m) + "x" + std::to_string(n) + ")");
}

// Replaces columns flagged in `missing` by unit vectors orthogonal to every
// other column of `u` (which must already be orthonormal elsewhere).
void complete_orthonormal(DenseMatrix& u, const std::vector<bool>& missing) {
    const std::size_t m = u.rows();
    std::size_t next_basis = 0;
    std::vector<double> cand(m);
    for (std::size_t j = 0; j < u.cols(); ++j) {
        if (!missing[j]) continue;
        bool placed = false;
        while (!placed && next_basis < m) {
            std::fill(cand.begin(), cand.end(), 0.0);
            cand[next_basis++] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < u.cols(); ++k) {
                    if (k == j || (missing[k] && k > j)) continue;
                    const auto uk = u.column(k);
                    const double proj = dot(uk, cand);
                    axpy(-proj, uk, cand);
                }
            }
            const double nrm = norm2(cand);
            if (nrm > 1e-8) {
                auto uj = u.column(j);
                for (std::size_t i = 0; i < m; ++i) uj[i] = cand[i] / nrm;
                placed = true;
            }
        }
        if (!placed) throw SvdError("failed to complete orthonormal basis");
    }
}

// Core routine for m >= n. `v` holds the starting rotation (identity for a
// cold start) and `w` = a * v.
SvdResult finish_tall(DenseMatrix w, DenseMatrix v, const SvdOptions& options) {
    const std::size_t m = w.rows();
    const std::size_t n = w.cols();
    jacobi_orthogonalize(w, &v, options);

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(w.column(j));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

    SvdResult out{DenseMatrix(m, n), DenseVector(n), DenseMatrix(n, v.rows())};
    std::vector<bool> missing(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        const double s = sigma[j];
        out.singular_values[k] = s;
        auto uk = out.u.column(k);
        const auto wj = w.column(j);
        if (s > 0.0 && std::isfinite(1.0 / s)) {
            for (std::size_t i = 0; i < m; ++i) uk[i] = wj[i] / s;
        } else {
            out.singular_values[k] = 0.0;
            missing[k] = true;
        }
        const auto vj = v.column(j);
        for (std::size_t i = 0; i < v.rows(); ++i) out.vt(k, i) = vj[i];
    }
    if (std::any_of(missing.begin(), missing.end(), [](bool b) { return b; })) {
        complete_orthonormal(out.u, missing);
    }
    return out;
}

SvdResult transpose_result(SvdResult r) {
    return SvdResult{r.vt.transpose(), std::move(r.singular_values), r.u.transpose()};
}

void check_input(const DenseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw ShapeError("svd: empty matrix");
    require_finite(a.span(), "svd input");
}

// Orthonormalizes the columns of `q` in place (modified Gram-Schmidt, two passes).
void orthonormalize_columns(DenseMatrix& q) {
    for (std::size_t j = 0; j < q.cols(); ++j) {
        auto qj = q.column(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                const auto qk = q.column(k);
                axpy(-dot(qk, qj), qk, qj);
            }
        }
        const double nrm = norm2(qj);
        if (nrm > 0.0) {
            for (double& x : qj) x /= nrm;
        }
    }
}

// Deterministic standard normal stream for the randomized range finder.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : state_(seed) {}
    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

private:
    double uniform() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

SvdResult randomized_svd(const DenseMatrix& a, std::size_t k, const SvdOptions& options) {
    constexpr std::size_t kOversample = 8;
    constexpr int kPowerPasses = 4;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t l = std::min(k + kOversample, std::min(m, n));

    GaussianStream rng(0x5EEDF00DULL + m * 1315423911ULL + n);
    DenseMatrix omega(n, l);
    for (double& x : omega.span()) x = rng.next();

    DenseMatrix q = matmul(a, omega);
    orthonormalize_columns(q);
    for (int pass = 0; pass < kPowerPasses; ++pass) {
        DenseMatrix z = matmul_tn(a, q);  // n x l
        orthonormalize_columns(z);
        q = matmul(a, z);
        orthonormalize_columns(q);
    }
    DenseMatrix b = matmul_tn(q, a);  // l x n
    SvdResult small = svd_full(b, options);
    DenseMatrix u = matmul(q, small.u);  // m x l

    SvdResult out{DenseMatrix(m, k), DenseVector(k), DenseMatrix(k, n)};
    for (std::size_t j = 0; j < k; ++j) {
        out.singular_values[j] = small.singular_values[j];
        std::copy(u.column(j).begin(), u.column(j).end(), out.u.column(j).begin());
        for (std::size_t i = 0; i < n; ++i) out.vt(j, i) = small.vt(j, i);
    }
    return out;
}

}  // namespace

SvdResult svd_full(const DenseMatrix& a, const SvdOptions& options) {
    check_input(a);
    if (a.rows() < a.cols()) return transpose_result(svd_full(a.transpose(), options));
    return finish_tall(a, DenseMatrix::identity(a.cols()), options);
}

SvdResult svd_full_warm(const DenseMatrix& a, const SvdResult& previous,
                        const SvdOptions& options) {
    check_input(a);
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t r = std::min(m, n);
    if (m >= n) {
        if (previous.vt.rows() != r || previous.vt.cols() != n) return svd_full(a, options);
        DenseMatrix v = previous.vt.transpose();  // n x n
        DenseMatrix w = matmul(a, v);
        return finish_tall(std::move(w), std::move(v), options);
    }
    if (previous.u.rows() != m || previous.u.cols() != r) return svd_full(a, options);
    DenseMatrix at = a.transpose();  // n x m
    DenseMatrix v = previous.u;      // m x m
    DenseMatrix w = matmul(at, v);
    return transpose_result(finish_tall(std::move(w), std::move(v), options));
}

SvdResult svd_truncated(const DenseMatrix& a, std::size_t k, const SvdOptions& options) {
    check_input(a);
    const std::size_t r = std::min(a.rows(), a.cols());
    if (k < 1 || k > r) {
        throw ShapeError("svd_truncated: k must satisfy 1 <= k <= min(rows, cols)");
    }
    if (r >= 500 && k < r) return randomized_svd(a, k, options);

    SvdResult full = svd_full(a, options);
    if (k == r) return full;
    SvdResult out{DenseMatrix(a.rows(), k), DenseVector(k), DenseMatrix(k, a.cols())};
    for (std::size_t j = 0; j < k; ++j) {
        out.singular_values[j] = full.singular_values[j];
        std::copy(full.u.column(j).begin(), full.u.column(j).end(), out.u.column(j).begin());
        for (std::size_t i = 0; i < a.cols(); ++i) out.vt(j, i) = full.vt(j, i);
    }
    return out;
}

DenseVector singular_values(const DenseMatrix& a, const SvdOptions& options) {
    check_input(a);
    DenseMatrix w = a.rows() >= a.cols() ? a : a.transpose();
    jacobi_orthogonalize(w, nullptr, options);
    std::vector<double> s(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) s[j] = norm2(w.column(j));
    std::sort(s.begin(), s.end(), std::greater<>());
    return DenseVector(std::move(s));
}

DenseMatrix reconstruct(const DenseMatrix& u, std::span<const double> s, const DenseMatrix& vt) {
    if (s.size() > u.cols() || s.size() > vt.rows()) throw ShapeError("reconstruct: rank mismatch");
    DenseMatrix out(u.rows(), vt.cols());
    for (std::size_t j = 0; j < vt.cols(); ++j) {
        auto oc = out.column(j);
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double w = s[k] * vt(k, j);
            if (w == 0.0) continue;
            axpy(w, u.column(k), oc);
        }
    }
    return out;
}

double schatten_norm(const DenseMatrix& x, NormIndex alpha) {
    if (alpha == NormIndex::Two) return frobenius_norm(x);
    if (x.empty()) return 0.0;
    return vec_norm(singular_values(x), alpha);
}

double spectral_norm(const DenseMatrix& x) {
    if (x.empty()) return 0.0;
    return singular_values(x)[0];
}

}  // namespace falc
