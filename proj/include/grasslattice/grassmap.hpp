#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "grasslattice/ballmap.hpp"
#include "grasslattice/gaussmap.hpp"
#include "grasslattice/rng.hpp"

namespace grasslattice {

/// Chordal distance between lines: d(x, y) = sqrt(1 - |x^H y|^2) for unit
/// representatives. Invariant to per-vector phase.
inline double chordal_distance(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    const double c = std::abs(x.dot(y));
    const double s = 1.0 - c * c;
    return s > 0.0 ? std::sqrt(s) : 0.0;
}

/// Canonical subspace representative: unit norm, first coordinate real and
/// nonnegative. Externally supplied representatives go through this before
/// comparisons.
inline Eigen::VectorXcd canonical_representative(Eigen::VectorXcd x) {
    const double n = x.norm();
    if (n == 0.0) throw std::domain_error("canonical_representative: zero vector");
    x /= n;
    const std::complex<double> x0 = x[0];
    if (std::abs(x0) > 0.0) x *= std::conj(x0) / std::abs(x0);
    return x;
}

/// Lifts a ball point onto the unit sphere: x = [sqrt(1 - |w|^2); w]. The
/// first coordinate is real positive, so the output is already canonical.
inline Eigen::VectorXcd ball_to_sphere(const Eigen::VectorXcd& w) {
    const double r2 = w.squaredNorm();
    if (!(r2 < 1.0)) throw std::domain_error("ball_to_sphere: |w| must be < 1");
    Eigen::VectorXcd x(w.size() + 1);
    x[0] = std::sqrt(1.0 - r2);
    x.tail(w.size()) = w;
    return x;
}

/// Exact inverse of ball_to_sphere for canonical representatives: drops the
/// leading coordinate.
inline Eigen::VectorXcd sphere_to_ball(const Eigen::VectorXcd& x) {
    if (x.size() < 2) throw std::invalid_argument("sphere_to_ball: need at least 2 coordinates");
    if (std::abs(x[0].imag()) > 1e-12)
        throw std::domain_error("sphere_to_ball: first coordinate must be real");
    if (!(x[0].real() > 0.0))
        throw std::domain_error("sphere_to_ball: first coordinate must be positive");
    return x.tail(x.size() - 1);
}

namespace detail {

/// Hermitian p.s.d. matrix power via eigendecomposition; eigenvalues are
/// clamped below at `floor` (callers reject genuinely singular inputs first).
inline Eigen::MatrixXcd hermitian_power(const Eigen::MatrixXcd& s, double expo,
                                        double floor = 1e-14) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_power: eigendecomposition failed");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(floor);
    return es.eigenvectors() * lam.array().pow(expo).matrix().asDiagonal() *
           es.eigenvectors().adjoint();
}

}  // namespace detail

/// Largest singular value, from the smaller Gram matrix.
inline double operator_norm(const Eigen::MatrixXcd& w) {
    if (w.size() == 0) throw std::invalid_argument("operator_norm: empty matrix");
    const Eigen::MatrixXcd gram =
        w.rows() < w.cols() ? (w * w.adjoint()).eval() : (w.adjoint() * w).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// A -> A (I + A^H A)^{-1/2}: bijection from (T-M) x M complex matrices onto
/// the open operator-norm unit ball.
inline Eigen::MatrixXcd matrix_to_opball(const Eigen::MatrixXcd& a) {
    if (a.size() == 0) throw std::invalid_argument("matrix_to_opball: empty matrix");
    if (!a.allFinite()) throw std::domain_error("matrix_to_opball: non-finite input");
    const auto m = a.cols();
    return a * detail::hermitian_power(
                   Eigen::MatrixXcd::Identity(m, m) + a.adjoint() * a, -0.5);
}

/// W -> W (I - W^H W)^{-1/2}, inverse of matrix_to_opball. Rejects inputs so
/// close to the ball boundary that I - W^H W is numerically singular.
inline Eigen::MatrixXcd opball_to_matrix(const Eigen::MatrixXcd& w) {
    if (w.size() == 0) throw std::invalid_argument("opball_to_matrix: empty matrix");
    if (operator_norm(w) >= 1.0 - 1e-12)
        throw std::domain_error("opball_to_matrix: operator norm must be < 1");
    const auto m = w.cols();
    return w * detail::hermitian_power(
                   Eigen::MatrixXcd::Identity(m, m) - w.adjoint() * w, -0.5);
}

/// Jacobian of matrix_to_opball at A, as a map of real dimension 2M(T-M):
/// det(I_M + A^H A)^{-T} with T = rows(A) + cols(A). Evaluated at the domain
/// point A (verified against finite differences in the test suite).
inline double opball_map_jacobian(const Eigen::MatrixXcd& a) {
    if (a.size() == 0) throw std::invalid_argument("opball_map_jacobian: empty matrix");
    const auto m = a.cols();
    const double t = static_cast<double>(a.rows() + a.cols());
    const Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(m, m) + a.adjoint() * a;
    return std::pow(s.determinant().real(), -t);
}

/// Stiefel representative [sqrt(I_M - W^H W); W] of the subspace attached to
/// an operator-norm ball point; columns come out orthonormal.
inline Eigen::MatrixXcd lift_to_stiefel(const Eigen::MatrixXcd& w) {
    if (w.size() == 0) throw std::invalid_argument("lift_to_stiefel: empty matrix");
    if (operator_norm(w) >= 1.0 - 1e-12)
        throw std::domain_error("lift_to_stiefel: operator norm must be < 1");
    const auto m = w.cols();
    Eigen::MatrixXcd x(w.rows() + m, m);
    x.topRows(m) = detail::hermitian_power(
        Eigen::MatrixXcd::Identity(m, m) - w.adjoint() * w, 0.5);
    x.bottomRows(w.rows()) = w;
    return x;
}

/// Uniform sample from the open operator-norm unit ball of (T-M) x M complex
/// matrices: every entry proposed uniformly on the complex unit square,
/// rejected on operator norm >= 1. Acceptance is fine at the small sizes this
/// is meant for (M(T-M) <= 8 or so).
inline Eigen::MatrixXcd sample_uniform_opball(int t, int m, Rng& rng) {
    if (!(m >= 1 && m < t))
        throw std::invalid_argument("sample_uniform_opball: need 1 <= M < T");
    const int rows = t - m;
    Eigen::MatrixXcd w(rows, m);
    for (;;) {
        for (int c = 0; c < m; ++c)
            for (int r = 0; r < rows; ++r)
                w(r, c) = std::complex<double>(2.0 * rng.uniform01() - 1.0,
                                               2.0 * rng.uniform01() - 1.0);
        if (operator_norm(w) < 1.0) return w;
    }
}

/// Full measure-preserving chain: hypercube -> Gaussian -> ball -> sphere.
inline Eigen::VectorXcd cube_to_grassmann(const HypercubePoint& p) {
    return ball_to_sphere(gauss_to_ball(cube_to_gauss(p)));
}

/// Inverse chain for canonical representatives.
inline HypercubePoint grassmann_to_cube(const Eigen::VectorXcd& x) {
    return gauss_to_cube(ball_to_gauss(sphere_to_ball(x)));
}

}  // namespace grasslattice
