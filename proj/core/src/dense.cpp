#include "falc/dense.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace falc {

namespace {

void check_same(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": length mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
    }
}

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(what) + ": shape mismatch");
    }
}

}  // namespace

void DenseVector::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> col_major)
    : rows_(rows), cols_(cols), data_(std::move(col_major)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("DenseMatrix: data length " + std::to_string(data_.size()) +
                         " does not equal rows*cols = " + std::to_string(rows_ * cols_));
    }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.begin()->size();
    DenseMatrix out(m, n);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n) throw ShapeError("DenseMatrix::from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : row) out(i, j++) = v;
        ++i;
    }
    return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
    return diagonal(d.size(), d.size(), d);
}

DenseMatrix DenseMatrix::diagonal(std::size_t rows, std::size_t cols, std::span<const double> d) {
    if (d.size() > std::min(rows, cols)) throw ShapeError("DenseMatrix::diagonal: too many entries");
    DenseMatrix out(rows, cols);
    for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
    return out;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) out(j, i) = (*this)(i, j);
    return out;
}

void DenseMatrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double dot(std::span<const double> a, std::span<const double> b) {
    check_same(a.size(), b.size(), "dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) {
    // Scaled accumulation so that huge or tiny entries do not over/underflow.
    double scale = 0.0;
    double ssq = 1.0;
    for (double v : a) {
        if (v != 0.0) {
            const double av = std::abs(v);
            if (scale < av) {
                ssq = 1.0 + ssq * (scale / av) * (scale / av);
                scale = av;
            } else {
                ssq += (av / scale) * (av / scale);
            }
        }
    }
    return scale * std::sqrt(ssq);
}

double frobenius_norm(const DenseMatrix& a) { return norm2(a.span()); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
    check_same(x.size(), y.size(), "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void lincomb(double a, std::span<const double> x, double b, std::span<const double> y,
             std::span<double> out) {
    check_same(x.size(), y.size(), "lincomb");
    check_same(x.size(), out.size(), "lincomb");
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b, "operator+");
    DenseMatrix out(a.rows(), a.cols());
    lincomb(1.0, a.span(), 1.0, b.span(), out.span());
    return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b, "operator-");
    DenseMatrix out(a.rows(), a.cols());
    lincomb(1.0, a.span(), -1.0, b.span(), out.span());
    return out;
}

DenseMatrix operator*(double c, const DenseMatrix& a) {
    DenseMatrix out = a;
    for (double& v : out.span()) v *= c;
    return out;
}

DenseVector operator+(const DenseVector& a, const DenseVector& b) {
    check_same(a.size(), b.size(), "operator+");
    DenseVector out(a.size());
    lincomb(1.0, a, 1.0, b, out);
    return out;
}

DenseVector operator-(const DenseVector& a, const DenseVector& b) {
    check_same(a.size(), b.size(), "operator-");
    DenseVector out(a.size());
    lincomb(1.0, a, -1.0, b, out);
    return out;
}

DenseVector operator*(double c, const DenseVector& a) {
    DenseVector out = a;
    for (double& v : out) v *= c;
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto oc = out.column(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            if (bkj == 0.0) continue;
            const auto ac = a.column(k);
            for (std::size_t i = 0; i < a.rows(); ++i) oc[i] += ac[i] * bkj;
        }
    }
    return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw ShapeError("matmul_tn: row counts differ");
    DenseMatrix out(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) out(i, j) = dot(a.column(i), b.column(j));
    return out;
}

DenseVector matvec(const DenseMatrix& a, std::span<const double> x) {
    check_same(a.cols(), x.size(), "matvec");
    DenseVector out(a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        if (x[j] == 0.0) continue;
        axpy(x[j], a.column(j), out);
    }
    return out;
}

DenseVector matvec_t(const DenseMatrix& a, std::span<const double> x) {
    check_same(a.rows(), x.size(), "matvec_t");
    DenseVector out(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] = dot(a.column(j), x);
    return out;
}

DenseVector vec(const DenseMatrix& x) { return DenseVector(x.values()); }

DenseMatrix unvec(const DenseVector& v, std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols, v.values());
}

bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

void require_finite(std::span<const double> a, std::string_view what) {
    if (!all_finite(a)) throw NonFiniteError(std::string(what) + " contains NaN or Inf");
}

std::string_view to_string(NormIndex p) noexcept {
    switch (p) {
    case NormIndex::One: return "1";
    case NormIndex::Two: return "2";
    case NormIndex::Inf: return "inf";
    }
    return "?";
}

NormIndex parse_norm_index(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "1" || t == "one" || t == "l1" || t == "nuclear") return NormIndex::One;
    if (t == "2" || t == "two" || t == "l2" || t == "frobenius") return NormIndex::Two;
    if (t == "inf" || t == "infinity" || t == "linf" || t == "spectral") return NormIndex::Inf;
    throw std::invalid_argument("unknown norm index '" + std::string(text) + "'");
}

double vec_norm(std::span<const double> v, NormIndex p) {
    switch (p) {
    case NormIndex::One: {
        double acc = 0.0;
        for (double x : v) acc += std::abs(x);
        return acc;
    }
    case NormIndex::Two: return norm2(v);
    case NormIndex::Inf: return max_abs(v);
    }
    return 0.0;
}

double norm_factor_I(NormIndex alpha, std::size_t m, std::size_t n) {
    return alpha == NormIndex::Inf ? std::sqrt(static_cast<double>(std::min(m, n))) : 1.0;
}

double norm_factor_J(NormIndex beta, std::size_t p) {
    return beta == NormIndex::Inf ? std::sqrt(static_cast<double>(p)) : 1.0;
}

}  // namespace falc
