#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace falc {

/// Thrown when operand dimensions do not agree.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a NaN or Inf would enter a solver path.
class NonFiniteError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Real vector with value semantics.
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(std::size_t len, double fill = 0.0) : data_(len, fill) {}
    explicit DenseVector(std::vector<double> data) : data_(std::move(data)) {}
    DenseVector(std::initializer_list<double> values) : data_(values) {}

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    std::span<double> span() noexcept { return data_; }
    std::span<const double> span() const noexcept { return data_; }
    operator std::span<const double>() const noexcept { return data_; }
    operator std::span<double>() noexcept { return data_; }

    const std::vector<double>& values() const noexcept { return data_; }

    void fill(double v);
    bool operator==(const DenseVector&) const = default;

private:
    std::vector<double> data_;
};

/// Column-major real matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    /// `col_major` must hold rows*cols entries.
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> col_major);

    /// Row-wise literal, convenient in tests.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> d);
    static DenseMatrix diagonal(std::size_t rows, std::size_t cols, std::span<const double> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    std::span<double> column(std::size_t j) noexcept {
        return {data_.data() + j * rows_, rows_};
    }
    std::span<const double> column(std::size_t j) const noexcept {
        return {data_.data() + j * rows_, rows_};
    }
    std::span<double> span() noexcept { return data_; }
    std::span<const double> span() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    DenseMatrix transpose() const;
    void fill(double v);
    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Elementwise helpers on flat storage.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double frobenius_norm(const DenseMatrix& a);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// out = a * x + b * y
void lincomb(double a, std::span<const double> x, double b, std::span<const double> y,
             std::span<double> out);
double max_abs(std::span<const double> a);

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double c, const DenseMatrix& a);
DenseVector operator+(const DenseVector& a, const DenseVector& b);
DenseVector operator-(const DenseVector& a, const DenseVector& b);
DenseVector operator*(double c, const DenseVector& a);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseVector matvec(const DenseMatrix& a, std::span<const double> x);
/// aᵀ x
DenseVector matvec_t(const DenseMatrix& a, std::span<const double> x);

/// Column-stacked copy of `x`.
DenseVector vec(const DenseMatrix& x);
/// Inverse of vec().
DenseMatrix unvec(const DenseVector& v, std::size_t rows, std::size_t cols);

bool all_finite(std::span<const double> a);
/// Throws NonFiniteError naming `what` if any entry is NaN or Inf.
void require_finite(std::span<const double> a, std::string_view what);

/// Norm index p in {1, 2, inf}.
enum class NormIndex { One, Two, Inf };

/// Hölder conjugate: 1 <-> inf, 2 <-> 2.
constexpr NormIndex dual(NormIndex p) noexcept {
    switch (p) {
    case NormIndex::One: return NormIndex::Inf;
    case NormIndex::Inf: return NormIndex::One;
    case NormIndex::Two: break;
    }
    return NormIndex::Two;
}

std::string_view to_string(NormIndex p) noexcept;
/// Accepts "1", "2", "inf" (also "one", "two", "infinity").
NormIndex parse_norm_index(std::string_view text);

double vec_norm(std::span<const double> v, NormIndex p);

/// I(alpha): sqrt(min(m,n)) for the spectral norm, else 1.
double norm_factor_I(NormIndex alpha, std::size_t m, std::size_t n);
/// J(beta): sqrt(p) for the l-inf norm, else 1.
double norm_factor_J(NormIndex beta, std::size_t p);

}  // namespace falc
