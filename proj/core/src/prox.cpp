#include "falc/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace falc {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Threshold t such that sum_i (|y_i| - t)_+ = radius, assuming ||y||_1 > radius > 0.
double l1_projection_threshold(std::span<const double> y, double radius) {
    std::vector<double> u(y.size());
    std::transform(y.begin(), y.end(), u.begin(), [](double v) { return std::abs(v); });
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0;
    double t = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cumsum += u[k];
        const double cand = (cumsum - radius) / static_cast<double>(k + 1);
        if (u[k] - cand > 0.0) {
            t = cand;
        } else {
            break;
        }
    }
    return std::max(t, 0.0);
}

DenseVector soft_threshold(std::span<const double> y, double t) {
    DenseVector out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double a = std::abs(y[i]) - t;
        out[i] = a > 0.0 ? sign(y[i]) * a : 0.0;
    }
    return out;
}

void check_nonnegative(double v, const char* what) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be nonnegative");
}

}  // namespace

DenseVector shrink_vec(std::span<const double> y, double delta, NormIndex beta) {
    check_nonnegative(delta, "shrink_vec: delta");
    switch (beta) {
    case NormIndex::One: return soft_threshold(y, delta);
    case NormIndex::Two: {
        const double ny = norm2(y);
        DenseVector out(y.size());
        if (ny == 0.0) return out;
        const double f = std::max(1.0 - delta / ny, 0.0);
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = f * y[i];
        return out;
    }
    case NormIndex::Inf: {
        // y - P_{l1, delta}(y) = sign(y) * min(|y|, t); zero when ||y||_1 <= delta.
        DenseVector out(y.size());
        if (vec_norm(y, NormIndex::One) <= delta) return out;
        const double t = delta == 0.0 ? kUnbounded : l1_projection_threshold(y, delta);
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = sign(y[i]) * std::min(std::abs(y[i]), t);
        return out;
    }
    }
    return DenseVector(y.size());
}

DenseVector project_ball(std::span<const double> y, NormIndex gamma, double radius) {
    check_nonnegative(radius, "project_ball: radius");
    DenseVector out(std::vector<double>(y.begin(), y.end()));
    if (std::isinf(radius)) return out;
    if (radius == 0.0) return DenseVector(y.size());
    switch (gamma) {
    case NormIndex::One: {
        if (vec_norm(y, NormIndex::One) <= radius) return out;
        return soft_threshold(y, l1_projection_threshold(y, radius));
    }
    case NormIndex::Two: {
        const double ny = norm2(y);
        if (ny <= radius) return out;
        const double f = radius / ny;
        for (double& v : out) v *= f;
        return out;
    }
    case NormIndex::Inf:
        for (double& v : out) v = std::clamp(v, -radius, radius);
        return out;
    }
    return out;
}

DenseVector shrink_vec_ball(std::span<const double> y, double delta, NormIndex beta, double eta) {
    check_nonnegative(eta, "shrink_vec_ball: eta");
    DenseVector u = shrink_vec(y, delta, beta);
    if (std::isinf(eta) || vec_norm(u, beta) <= eta) return u;
    // With the ball active the penalty is the constant delta*eta on the sphere,
    // so the minimizer is the nearest point of the eta-ball: radial scaling for
    // beta = 2, clipping for beta = inf, and for beta = 1 the soft threshold at
    // the shift theta* >= delta that lands exactly on ||x||_1 = eta.
    return project_ball(y, beta, eta);
}

ShrinkResult shrink_matrix(const DenseMatrix& y, double delta, NormIndex alpha, double eta,
                           SvdWarmStart* warm) {
    check_nonnegative(delta, "shrink_matrix: delta");
    if (!(eta > 0.0)) throw std::invalid_argument("shrink_matrix: eta must be positive");
    ShrinkResult out;

    if (alpha == NormIndex::Two) {
        DenseVector uncon = shrink_vec(y.span(), delta, NormIndex::Two);
        DenseVector con = shrink_vec_ball(y.span(), delta, NormIndex::Two, eta);
        out.unconstrained_norm = norm2(uncon);
        out.constrained_norm = norm2(con);
        out.unconstrained = DenseMatrix(y.rows(), y.cols(), uncon.values());
        out.constrained = DenseMatrix(y.rows(), y.cols(), con.values());
        return out;
    }
    if (delta == 0.0 && std::isinf(eta)) {
        out.constrained = y;
        out.unconstrained = y;
        out.constrained_norm = out.unconstrained_norm = schatten_norm(y, alpha);
        return out;
    }

    SvdResult svd = (warm != nullptr && warm->previous) ? svd_full_warm(y, *warm->previous)
                                                        : svd_full(y);
    out.used_svd = true;
    const DenseVector d_plus = shrink_vec(svd.singular_values, delta, alpha);
    const DenseVector d_pi = shrink_vec_ball(svd.singular_values, delta, alpha, eta);
    out.unconstrained_norm = vec_norm(d_plus, alpha);
    out.constrained_norm = vec_norm(d_pi, alpha);
    out.unconstrained = reconstruct(svd.u, d_plus, svd.vt);
    out.constrained = d_pi == d_plus ? out.unconstrained : reconstruct(svd.u, d_pi, svd.vt);
    if (warm != nullptr) warm->previous = std::move(svd);
    return out;
}

DenseVector least_norm_subgradient(std::span<const double> s, std::span<const double> grad,
                                   double c, NormIndex beta) {
    if (s.size() != grad.size()) throw ShapeError("least_norm_subgradient: length mismatch");
    DenseVector out(std::vector<double>(grad.begin(), grad.end()));
    if (c == 0.0 || s.empty()) return out;
    switch (beta) {
    case NormIndex::One:
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s[j] != 0.0) {
                out[j] = c * sign(s[j]) + grad[j];
            } else {
                const double a = std::abs(grad[j]) - c;
                out[j] = a > 0.0 ? sign(grad[j]) * a : 0.0;
            }
        }
        return out;
    case NormIndex::Two: {
        const double ns = norm2(s);
        if (ns == 0.0) return shrink_vec(grad, c, NormIndex::Two);
        for (std::size_t j = 0; j < s.size(); ++j) out[j] = c * s[j] / ns + grad[j];
        return out;
    }
    case NormIndex::Inf: {
        const double ns = max_abs(s);
        if (ns == 0.0) return shrink_vec(grad, c, NormIndex::Inf);
        // d||s||_inf = conv{sign(s_j) e_j : |s_j| = ||s||_inf}; minimize over the
        // simplex weights w of sum_j (c sign_j w_j + grad_j)^2.
        std::vector<std::size_t> active;
        for (std::size_t j = 0; j < s.size(); ++j)
            if (std::abs(s[j]) >= ns * (1.0 - 1e-12)) active.push_back(j);
        std::vector<double> a(active.size());
        for (std::size_t k = 0; k < active.size(); ++k) {
            const std::size_t j = active[k];
            a[k] = -sign(s[j]) * grad[j] / c;
        }
        const DenseVector w = project_simplex(a);
        for (std::size_t k = 0; k < active.size(); ++k) {
            const std::size_t j = active[k];
            out[j] = c * sign(s[j]) * w[k] + grad[j];
        }
        return out;
    }
    }
    return out;
}

DenseVector project_simplex(std::span<const double> a) {
    if (a.empty()) return DenseVector{};
    std::vector<double> u(a.begin(), a.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0;
    double t = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cumsum += u[k];
        const double cand = (cumsum - 1.0) / static_cast<double>(k + 1);
        if (u[k] - cand > 0.0) t = cand;
    }
    DenseVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i] - t, 0.0);
    return out;
}

}  // namespace falc
