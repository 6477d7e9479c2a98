#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "falc/dense.hpp"

namespace falc {

/// Linear map from m x n matrices to vectors.
///
/// The variant set is closed: zero map, column stacking, entry sampling, an
/// explicit (q x mn) matrix acting on vec(X), and a scalar multiple of another
/// map. Payloads are shared, so copies are cheap.
class LinearMap {
public:
    struct Zero {};
    struct Vectorize {};
    struct Sampling {
        std::vector<std::size_t> linear_index;  // column-major index i + j*m
    };
    struct DenseOperator {
        DenseMatrix matrix;  // q x (m*n)
    };
    struct Scaled {
        std::shared_ptr<const LinearMap> inner;
        double scale = 1.0;
    };

    static LinearMap zero(std::size_t m, std::size_t n);
    static LinearMap vectorize(std::size_t m, std::size_t n);
    /// `entries` are (row, col) pairs, 0-based.
    static LinearMap sampling(std::size_t m, std::size_t n,
                              std::span<const std::pair<std::size_t, std::size_t>> entries);
    static LinearMap dense(std::size_t m, std::size_t n, DenseMatrix matrix);
    static LinearMap scaled(LinearMap inner, double scale);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t out_dim() const noexcept { return out_dim_; }

    bool is_zero() const noexcept;
    bool is_vectorize() const noexcept;

    DenseVector apply(const DenseMatrix& x) const;
    DenseMatrix adjoint(std::span<const double> z) const;

    /// out = L(x)
    void apply_into(const DenseMatrix& x, std::span<double> out) const;
    /// out += c * L*(z)
    void adjoint_accumulate(std::span<const double> z, double c, DenseMatrix& out) const;

    /// Explicit q x mn matrix (tests and small problems).
    DenseMatrix to_dense() const;

    template <class Visitor>
    decltype(auto) visit(Visitor&& v) const {
        return std::visit(std::forward<Visitor>(v), *payload_);
    }

private:
    using Payload = std::variant<Zero, Vectorize, Sampling, DenseOperator, Scaled>;
    LinearMap(std::size_t m, std::size_t n, std::size_t out_dim, Payload payload);

    void check_input(const DenseMatrix& x) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t out_dim_ = 0;
    std::shared_ptr<const Payload> payload_;
};

/// One row-block of the stacked matrix M: `slack_count` identity blocks
/// (one per slack variable attached to the constraint) beside the operator.
struct StackedRow {
    const LinearMap* map = nullptr;
    std::size_t slack_count = 1;
};

/// sigma_max of M, where each row-block of M is [I ... I | map]. Power
/// iteration on M Mᵀ to relative tolerance 1e-8.
double sigma_max_stacked(std::span<const StackedRow> rows);

/// Explicit dense M (tests and small problems); columns are ordered
/// [slacks of row 0, slacks of row 1, ..., vec(X)].
DenseMatrix stacked_dense(std::span<const StackedRow> rows);

}  // namespace falc
