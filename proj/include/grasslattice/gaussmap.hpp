#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace grasslattice {

/// Message-domain coordinates: a point of the open unit hypercube
/// (0,1)^{2(T-1)}, split into in-phase components a_k and quadrature
/// components b_k.
struct HypercubePoint {
    Eigen::VectorXd a;
    Eigen::VectorXd b;

    int dim() const { return static_cast<int>(a.size()); }

    void validate() const {
        if (a.size() < 1 || a.size() != b.size())
            throw std::invalid_argument("HypercubePoint: a and b must have equal size >= 1");
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            if (!(a[k] > 0.0 && a[k] < 1.0) || !(b[k] > 0.0 && b[k] < 1.0))
                throw std::domain_error("HypercubePoint: components must lie strictly inside (0,1)");
        }
    }
};

/// CDF of a real N(0, 1/2) Gaussian:
/// F(t) = (1/sqrt(pi)) * integral_{-inf}^{t} exp(-s^2) ds = erfc(-t) / 2.
inline double gauss_cdf(double t) {
    return 0.5 * std::erfc(-t);
}

namespace detail {

// Acklam's rational approximation of the standard normal quantile
// (relative error ~1.2e-9); seeds the Newton refinement in gauss_icdf.
inline double std_normal_quantile_approx(double p) {
    static constexpr double a1 = -39.69683028665376, a2 = 220.9460984245205,
                            a3 = -275.9285104469687, a4 = 138.3577518672690,
                            a5 = -30.66479806614716, a6 = 2.506628277459239;
    static constexpr double b1 = -54.47609879822406, b2 = 161.5858368580409,
                            b3 = -155.6989798598866, b4 = 66.80131188771972,
                            b5 = -13.28068155288572;
    static constexpr double c1 = -7.784894002430293e-03, c2 = -3.223964580411365e-01,
                            c3 = -2.400758277161838, c4 = -2.549732539343734,
                            c5 = 4.374664141464968, c6 = 2.938163982698783;
    static constexpr double d1 = 7.784695709041462e-03, d2 = 3.224671290700398e-01,
                            d3 = 2.445134137142996, d4 = 3.754408661907416;
    static constexpr double plow = 0.02425;

    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c1 * q + c2) * q + c3) * q + c4) * q + c5) * q + c6) /
               ((((d1 * q + d2) * q + d3) * q + d4) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c1 * q + c2) * q + c3) * q + c4) * q + c5) * q + c6) /
               ((((d1 * q + d2) * q + d3) * q + d4) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a1 * r + a2) * r + a3) * r + a4) * r + a5) * r + a6) * q /
           (((((b1 * r + b2) * r + b3) * r + b4) * r + b5) * r + 1.0);
}

}  // namespace detail

/// Inverse of gauss_cdf on the open interval (0,1). A rational first guess is
/// polished by two Newton steps on gauss_cdf, which brings the roundtrip
/// error well below 1e-12 away from the endpoints. Arguments outside (0,1)
/// are rejected, not clamped.
inline double gauss_icdf(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("gauss_icdf: argument must lie strictly inside (0,1)");
    if (u > 0.5) return -gauss_icdf(1.0 - u);  // 1-u is exact here (Sterbenz)

    static constexpr double inv_sqrt_pi = 0.56418958354775628695;
    static constexpr double inv_sqrt_2 = 0.70710678118654752440;
    double t = detail::std_normal_quantile_approx(u) * inv_sqrt_2;
    for (int i = 0; i < 2; ++i) {
        const double density = inv_sqrt_pi * std::exp(-t * t);
        if (!(density > 0.0)) break;
        t -= (gauss_cdf(t) - u) / density;
    }
    return t;
}

/// Componentwise inverse transform sampling: z_k = F^{-1}(a_k) + j F^{-1}(b_k).
/// Uniform inputs on the hypercube yield i.i.d. CN(0,1) outputs.
inline Eigen::VectorXcd cube_to_gauss(const HypercubePoint& p) {
    p.validate();
    Eigen::VectorXcd z(p.a.size());
    for (Eigen::Index k = 0; k < z.size(); ++k)
        z[k] = std::complex<double>(gauss_icdf(p.a[k]), gauss_icdf(p.b[k]));
    return z;
}

/// Inverse of cube_to_gauss: a_k = F(Re z_k), b_k = F(Im z_k). Outputs are
/// nudged into the open interval so extreme arguments cannot produce an exact
/// 0 or 1 (F saturates in double precision beyond |t| ~ 6).
inline HypercubePoint gauss_to_cube(const Eigen::VectorXcd& z) {
    if (z.size() < 1) throw std::invalid_argument("gauss_to_cube: empty input");
    if (!z.allFinite()) throw std::domain_error("gauss_to_cube: non-finite input");

    static constexpr double lo = 1e-300;
    static constexpr double hi = 0.99999999999999989;  // nextafter(1, 0)
    HypercubePoint p{Eigen::VectorXd(z.size()), Eigen::VectorXd(z.size())};
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        p.a[k] = std::clamp(gauss_cdf(z[k].real()), lo, hi);
        p.b[k] = std::clamp(gauss_cdf(z[k].imag()), lo, hi);
    }
    return p;
}

}  // namespace grasslattice
