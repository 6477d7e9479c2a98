#include "falc/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace falc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

LinearMap::LinearMap(std::size_t m, std::size_t n, std::size_t out_dim, Payload payload)
    : rows_(m), cols_(n), out_dim_(out_dim),
      payload_(std::make_shared<const Payload>(std::move(payload))) {}

LinearMap LinearMap::zero(std::size_t m, std::size_t n) { return {m, n, 0, Zero{}}; }

LinearMap LinearMap::vectorize(std::size_t m, std::size_t n) { return {m, n, m * n, Vectorize{}}; }

LinearMap LinearMap::sampling(std::size_t m, std::size_t n,
                              std::span<const std::pair<std::size_t, std::size_t>> entries) {
    Sampling s;
    s.linear_index.reserve(entries.size());
    for (const auto& [i, j] : entries) {
        if (i >= m || j >= n) {
            throw ShapeError("LinearMap::sampling: entry (" + std::to_string(i) + ", " +
                             std::to_string(j) + ") outside " + std::to_string(m) + "x" +
                             std::to_string(n));
        }
        s.linear_index.push_back(i + j * m);
    }
    const std::size_t q = s.linear_index.size();
    return {m, n, q, std::move(s)};
}

LinearMap LinearMap::dense(std::size_t m, std::size_t n, DenseMatrix matrix) {
    if (matrix.cols() != m * n) {
        throw ShapeError("LinearMap::dense: operator has " + std::to_string(matrix.cols()) +
                         " columns, expected m*n = " + std::to_string(m * n));
    }
    require_finite(matrix.span(), "dense operator");
    const std::size_t q = matrix.rows();
    return {m, n, q, DenseOperator{std::move(matrix)}};
}

LinearMap LinearMap::scaled(LinearMap inner, double scale) {
    if (!std::isfinite(scale)) throw NonFiniteError("LinearMap::scaled: non-finite scale");
    const std::size_t m = inner.rows();
    const std::size_t n = inner.cols();
    const std::size_t q = inner.out_dim();
    return {m, n, q, Scaled{std::make_shared<const LinearMap>(std::move(inner)), scale}};
}

bool LinearMap::is_zero() const noexcept { return std::holds_alternative<Zero>(*payload_); }

bool LinearMap::is_vectorize() const noexcept {
    return std::holds_alternative<Vectorize>(*payload_);
}

void LinearMap::check_input(const DenseMatrix& x) const {
    if (x.rows() != rows_ || x.cols() != cols_) {
        throw ShapeError("LinearMap: expected " + std::to_string(rows_) + "x" +
                         std::to_string(cols_) + " input, got " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
    }
}

DenseVector LinearMap::apply(const DenseMatrix& x) const {
    DenseVector out(out_dim_);
    apply_into(x, out);
    return out;
}

void LinearMap::apply_into(const DenseMatrix& x, std::span<double> out) const {
    check_input(x);
    if (out.size() != out_dim_) throw ShapeError("LinearMap::apply_into: output length mismatch");
    const auto xs = x.span();
    std::visit(overloaded{
                   [](const Zero&) {},
                   [&](const Vectorize&) { std::copy(xs.begin(), xs.end(), out.begin()); },
                   [&](const Sampling& s) {
                       for (std::size_t k = 0; k < s.linear_index.size(); ++k)
                           out[k] = xs[s.linear_index[k]];
                   },
                   [&](const DenseOperator& d) {
                       std::fill(out.begin(), out.end(), 0.0);
                       for (std::size_t j = 0; j < d.matrix.cols(); ++j) {
                           if (xs[j] == 0.0) continue;
                           axpy(xs[j], d.matrix.column(j), out);
                       }
                   },
                   [&](const Scaled& s) {
                       s.inner->apply_into(x, out);
                       for (double& v : out) v *= s.scale;
                   },
               },
               *payload_);
}

DenseMatrix LinearMap::adjoint(std::span<const double> z) const {
    DenseMatrix out(rows_, cols_);
    adjoint_accumulate(z, 1.0, out);
    return out;
}

void LinearMap::adjoint_accumulate(std::span<const double> z, double c, DenseMatrix& out) const {
    check_input(out);
    if (z.size() != out_dim_) {
        throw ShapeError("LinearMap::adjoint: expected vector of length " +
                         std::to_string(out_dim_) + ", got " + std::to_string(z.size()));
    }
    auto os = out.span();
    std::visit(overloaded{
                   [](const Zero&) {},
                   [&](const Vectorize&) { axpy(c, z, os); },
                   [&](const Sampling& s) {
                       for (std::size_t k = 0; k < s.linear_index.size(); ++k)
                           os[s.linear_index[k]] += c * z[k];
                   },
                   [&](const DenseOperator& d) {
                       for (std::size_t j = 0; j < d.matrix.cols(); ++j)
                           os[j] += c * dot(d.matrix.column(j), z);
                   },
                   [&](const Scaled& s) { s.inner->adjoint_accumulate(z, c * s.scale, out); },
               },
               *payload_);
}

DenseMatrix LinearMap::to_dense() const {
    const std::size_t mn = rows_ * cols_;
    DenseMatrix out(out_dim_, mn);
    DenseMatrix probe(rows_, cols_);
    DenseVector col(out_dim_);
    for (std::size_t j = 0; j < mn; ++j) {
        probe.span()[j] = 1.0;
        apply_into(probe, col);
        std::copy(col.begin(), col.end(), out.column(j).begin());
        probe.span()[j] = 0.0;
    }
    return out;
}

namespace {

struct StackedShape {
    std::size_t total_rows = 0;
    std::size_t m = 0;
    std::size_t n = 0;
};

StackedShape stacked_shape(std::span<const StackedRow> rows) {
    if (rows.empty()) throw ShapeError("sigma_max_stacked: no blocks");
    StackedShape s;
    s.m = rows.front().map->rows();
    s.n = rows.front().map->cols();
    for (const auto& r : rows) {
        if (r.map == nullptr) throw ShapeError("sigma_max_stacked: null map");
        if (r.map->rows() != s.m || r.map->cols() != s.n)
            throw ShapeError("sigma_max_stacked: blocks act on different shapes");
        s.total_rows += r.map->out_dim();
    }
    return s;
}

// out = M Mᵀ z; the row-block i of M Mᵀ z is c_i z_i + L_i(sum_j L_j*(z_j)).
void apply_mmt(std::span<const StackedRow> rows, const StackedShape& shape,
               std::span<const double> z, std::span<double> out, DenseMatrix& scratch,
               DenseVector& tmp) {
    scratch.fill(0.0);
    std::size_t off = 0;
    for (const auto& r : rows) {
        const std::size_t q = r.map->out_dim();
        r.map->adjoint_accumulate(z.subspan(off, q), 1.0, scratch);
        off += q;
    }
    off = 0;
    for (const auto& r : rows) {
        const std::size_t q = r.map->out_dim();
        auto seg = out.subspan(off, q);
        tmp = DenseVector(q);
        r.map->apply_into(scratch, tmp);
        for (std::size_t i = 0; i < q; ++i)
            seg[i] = static_cast<double>(r.slack_count) * z[off + i] + tmp[i];
        off += q;
    }
    (void)shape;
}

}  // namespace

double sigma_max_stacked(std::span<const StackedRow> rows) {
    const StackedShape shape = stacked_shape(rows);
    if (shape.total_rows == 0) return 0.0;

    DenseMatrix scratch(shape.m, shape.n);
    DenseVector tmp;
    DenseVector z(shape.total_rows);
    DenseVector w(shape.total_rows);
    // Deterministic, non-symmetric start so no eigenvector is missed by accident.
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = 1.0 + 0.5 * std::sin(1.0 + 0.7 * i);
    double nz = norm2(z);
    for (double& v : z) v /= nz;

    double lambda = 0.0;
    constexpr int kMaxIter = 20000;
    constexpr double kTol = 1e-8;
    for (int it = 0; it < kMaxIter; ++it) {
        apply_mmt(rows, shape, z, w, scratch, tmp);
        const double rayleigh = dot(z, w);
        const double nw = norm2(w);
        if (nw == 0.0) return 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = w[i] / nw;
        // Rayleigh quotient and ||w|| bracket the top eigenvalue; stop when both agree.
        const bool settled = std::abs(nw - rayleigh) <= kTol * 1e-2 * nw &&
                             std::abs(nw - lambda) <= kTol * 1e-2 * nw;
        lambda = nw;
        if (settled) break;
    }
    return std::sqrt(lambda);
}

DenseMatrix stacked_dense(std::span<const StackedRow> rows) {
    const StackedShape shape = stacked_shape(rows);
    std::size_t slack_cols = 0;
    for (const auto& r : rows) slack_cols += r.slack_count * r.map->out_dim();
    const std::size_t mn = shape.m * shape.n;
    DenseMatrix out(shape.total_rows, slack_cols + mn);
    std::size_t row_off = 0;
    std::size_t col_off = 0;
    for (const auto& r : rows) {
        const std::size_t q = r.map->out_dim();
        for (std::size_t c = 0; c < r.slack_count; ++c) {
            for (std::size_t i = 0; i < q; ++i) out(row_off + i, col_off + i) = 1.0;
            col_off += q;
        }
        const DenseMatrix op = r.map->to_dense();
        for (std::size_t j = 0; j < mn; ++j)
            for (std::size_t i = 0; i < q; ++i) out(row_off + i, slack_cols + j) = op(i, j);
        row_off += q;
    }
    return out;
}

}  // namespace falc
