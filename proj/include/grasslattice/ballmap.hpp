#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace grasslattice {

namespace detail {

/// log of the regularized lower incomplete gamma P(d, x) for integer d >= 1.
/// Uses the ascending power series below x = d+1 (no cancellation for small
/// x, where the alternating closed form 1 - e^{-x} sum x^k/k! loses all
/// digits) and the complement of the finite Poisson tail sum above it.
inline double log_gamma_p_int(int d, double x) {
    if (d < 1) throw std::invalid_argument("log_gamma_p_int: d must be >= 1");
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();

    if (x < d + 1.0) {
        double term = 1.0, sum = 1.0;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (d + n);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return d * std::log(x) - x - std::lgamma(d + 1.0) + std::log(sum);
    }
    if (x > 745.0) return 0.0;  // e^{-x} underflows; P == 1 in double
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < d; ++k) {
        term *= x / k;
        sum += term;
    }
    return std::log1p(-std::exp(-x) * sum);
}

inline double gamma_p_int(int d, double x) {
    return x <= 0.0 ? 0.0 : std::exp(log_gamma_p_int(d, x));
}

}  // namespace detail

/// Radial rescaling profile of the Gaussian-to-ball map:
/// f_d(t) = (1/t) * (1 - e^{-t^2} sum_{k<d} t^{2k}/k!)^{1/(2d)},
/// evaluated as P(d, t^2)^{1/(2d)} / t through the incomplete gamma function
/// so small arguments do not cancel. f_d(0) is the limit (d!)^{-1/(2d)}.
inline double radial_profile(double t, int d) {
    if (d < 1) throw std::invalid_argument("radial_profile: dimension must be >= 1");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::domain_error("radial_profile: t must be finite and >= 0");
    if (t == 0.0) return std::exp(-std::lgamma(d + 1.0) / (2.0 * d));
    return std::exp(detail::log_gamma_p_int(d, t * t) / (2.0 * d) - std::log(t));
}

/// Radius map g(t) = t * f_d(t) = P(d, t^2)^{1/(2d)}: strictly increasing
/// from 0 onto [0, 1).
inline double ball_radius_map(double t, int d) {
    if (t <= 0.0) return 0.0;
    return std::exp(detail::log_gamma_p_int(d, t * t) / (2.0 * d));
}

/// Chi-squared CDF for even degrees of freedom, via the closed form
/// F(y) = 1 - e^{-y/2} sum_{k<m} (y/2)^k / k!  with m = dof/2.
inline double chi2_cdf(double y, int dof) {
    if (dof < 2 || dof % 2 != 0)
        throw std::invalid_argument("chi2_cdf: dof must be a positive even integer");
    if (!(y >= 0.0)) throw std::domain_error("chi2_cdf: y must be >= 0");
    return detail::gamma_p_int(dof / 2, 0.5 * y);
}

/// Rescales a complex Gaussian vector onto the open unit ball: w = z f_d(|z|)
/// with d the complex dimension. CN(0, I_d) inputs become uniform on the ball.
inline Eigen::VectorXcd gauss_to_ball(const Eigen::VectorXcd& z) {
    if (z.size() < 1) throw std::invalid_argument("gauss_to_ball: empty input");
    if (!z.allFinite()) throw std::domain_error("gauss_to_ball: non-finite input");
    const double t = z.norm();
    if (t == 0.0) return Eigen::VectorXcd::Zero(z.size());
    return z * radial_profile(t, static_cast<int>(z.size()));
}

/// Chi-squared construction of the same map: scale the unit direction z/|z|
/// by F_{chi^2_{2d}}(2|z|^2)^{1/(2d)}. Algebraically identical to
/// gauss_to_ball; kept as an independent route for cross-checking.
inline Eigen::VectorXcd gauss_to_ball_chi2(const Eigen::VectorXcd& z) {
    if (z.size() < 1) throw std::invalid_argument("gauss_to_ball_chi2: empty input");
    if (!z.allFinite()) throw std::domain_error("gauss_to_ball_chi2: non-finite input");
    const double t = z.norm();
    if (t == 0.0) throw std::domain_error("gauss_to_ball_chi2: z must be nonzero");
    const int d = static_cast<int>(z.size());
    const double r = std::pow(chi2_cdf(2.0 * t * t, 2 * d), 1.0 / (2.0 * d));
    return (z / t) * r;
}

/// Inverts the ball map: solves s f_d(s) = |w| by bisection and returns
/// z = s w / |w|. The radius map is strictly increasing with range [0,1), so
/// doubling the upper end always brackets the root for |w| < 1.
inline Eigen::VectorXcd ball_to_gauss(const Eigen::VectorXcd& w) {
    if (w.size() < 1) throw std::invalid_argument("ball_to_gauss: empty input");
    if (!w.allFinite()) throw std::domain_error("ball_to_gauss: non-finite input");
    const double r = w.norm();
    if (r == 0.0) return Eigen::VectorXcd::Zero(w.size());
    if (r >= 1.0) throw std::domain_error("ball_to_gauss: |w| must be < 1");

    const int d = static_cast<int>(w.size());
    double lo = 0.0, hi = 1.0;
    while (ball_radius_map(hi, d) < r) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ball_radius_map(mid, d) < r ? lo : hi) = mid;
    }
    const double s = 0.5 * (lo + hi);
    return w * (s / r);
}

}  // namespace grasslattice
