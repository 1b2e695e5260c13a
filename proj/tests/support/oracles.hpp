#pragma once

// Test-only numerical oracles. Everything here is deliberately independent of
// the library code paths it is used to check: plain quadrature, empirical
// CDF statistics, and finite-difference Jacobians.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

// --------------------------------------------------------------------------
// Adaptive Simpson quadrature
// --------------------------------------------------------------------------

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    const double m = 0.5 * (a + b);
    return detail::adapt(f, a, b, f(a), f(m), f(b), detail::simpson(f, a, b, f(a), f(m), f(b)),
                         tol, 48);
}

// --------------------------------------------------------------------------
// Kolmogorov-Smirnov statistics
// --------------------------------------------------------------------------

/// One-sample KS statistic against a reference CDF. Sorts in place.
inline double ks_statistic(std::vector<double>& samples,
                           const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double fx = cdf(samples[i]);
        d = std::max(d, std::abs(fx - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - fx));
    }
    return d;
}

/// Two-sample KS statistic. Sorts both inputs in place.
inline double ks_two_sample(std::vector<double>& a, std::vector<double>& b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Asymptotic 1% critical values.
inline double ks_crit_1pct(double n) { return 1.63 / std::sqrt(n); }
inline double ks_crit_two_1pct(double n, double m) {
    return 1.63 * std::sqrt((n + m) / (n * m));
}

/// Beta(a, 1) CDF: x^a on [0,1].
inline double beta_a1_cdf(double x, double a) {
    return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : std::pow(x, a));
}

/// Beta(1, b) CDF: 1 - (1-x)^b on [0,1].
inline double beta_1b_cdf(double x, double b) {
    return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : 1.0 - std::pow(1.0 - x, b));
}

// --------------------------------------------------------------------------
// Real <-> complex packing and finite-difference Jacobians
// --------------------------------------------------------------------------

inline Eigen::VectorXd pack_real(const Eigen::VectorXcd& z) {
    Eigen::VectorXd v(2 * z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        v[2 * k] = z[k].real();
        v[2 * k + 1] = z[k].imag();
    }
    return v;
}

inline Eigen::VectorXcd unpack_real(const Eigen::VectorXd& v) {
    Eigen::VectorXcd z(v.size() / 2);
    for (Eigen::Index k = 0; k < z.size(); ++k)
        z[k] = std::complex<double>(v[2 * k], v[2 * k + 1]);
    return z;
}

inline Eigen::VectorXd pack_real_mat(const Eigen::MatrixXcd& m) {
    Eigen::VectorXd v(2 * m.size());
    Eigen::Index p = 0;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            v[p++] = m(r, c).real();
            v[p++] = m(r, c).imag();
        }
    return v;
}

inline Eigen::MatrixXcd unpack_real_mat(const Eigen::VectorXd& v, Eigen::Index rows,
                                        Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    Eigen::Index p = 0;
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) {
            m(r, c) = std::complex<double>(v[p], v[p + 1]);
            p += 2;
        }
    return m;
}

/// Central-difference Jacobian matrix of a map R^n -> R^m.
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x0, double h = 1e-5) {
    const Eigen::VectorXd f0 = f(x0);
    Eigen::MatrixXd jac(f0.size(), x0.size());
    for (Eigen::Index k = 0; k < x0.size(); ++k) {
        Eigen::VectorXd xp = x0, xm = x0;
        xp[k] += h;
        xm[k] -= h;
        jac.col(k) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return jac;
}

/// |det| of the square central-difference Jacobian of a map R^n -> R^n.
inline double fd_jacobian_det(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                              const Eigen::VectorXd& x0, double h = 1e-5) {
    const Eigen::MatrixXd jac = fd_jacobian(f, x0, h);
    if (jac.rows() != jac.cols()) throw std::invalid_argument("fd_jacobian_det: map not square");
    return std::abs(jac.determinant());
}

/// |det| of a finite-difference Jacobian restricted to an orthonormal frame
/// on the image side: columns of `frame` (m x n real, orthonormal) span the
/// target tangent space of the map R^n -> R^m.
inline double fd_jacobian_det_framed(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
    const Eigen::MatrixXd& frame, double h = 1e-5) {
    const Eigen::MatrixXd jac = fd_jacobian(f, x0, h);
    const Eigen::MatrixXd restricted = frame.transpose() * jac;
    if (restricted.rows() != restricted.cols())
        throw std::invalid_argument("fd_jacobian_det_framed: frame/domain mismatch");
    return std::abs(restricted.determinant());
}

// --------------------------------------------------------------------------
// Simple sample statistics
// --------------------------------------------------------------------------

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

/// Standard error of a binomial proportion estimate.
inline double proportion_stderr(double p, double n) {
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
}

}  // namespace oracles
