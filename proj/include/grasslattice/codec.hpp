#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grasslattice/grassmap.hpp"

namespace grasslattice {

using BitWord = std::vector<std::uint8_t>;

/// Lattice and codebook parameters: coherence time T, bits per real
/// component B, lattice margin alpha. The codebook has 2^{2B(T-1)} codewords
/// at rate 2B(T-1)/T bits per channel use.
struct CodecConfig {
    int T = 2;
    int B = 1;
    double alpha = 0.1;

    void validate() const {
        if (T < 2) throw std::invalid_argument("CodecConfig: T must be >= 2");
        if (B < 1 || B > 20) throw std::invalid_argument("CodecConfig: B must be in [1, 20]");
        if (!(alpha > 0.0 && alpha < 0.5))
            throw std::invalid_argument("CodecConfig: alpha must lie in (0, 0.5)");
        if (2 * B * (T - 1) > 62)
            throw std::invalid_argument("CodecConfig: cardinality exceeds 2^62");
    }

    int word_bits() const { return 2 * B * (T - 1); }
    std::uint64_t cardinality() const { return std::uint64_t{1} << word_bits(); }
    double rate() const { return static_cast<double>(word_bits()) / T; }
};

/// The 2^B equispaced quantizer points alpha + p (1-2alpha)/(2^B - 1) on
/// [alpha, 1-alpha].
inline std::vector<double> lattice_points(const CodecConfig& cfg) {
    cfg.validate();
    const int n = 1 << cfg.B;
    const double spacing = (1.0 - 2.0 * cfg.alpha) / (n - 1);
    std::vector<double> pts(n);
    for (int p = 0; p < n; ++p) pts[p] = cfg.alpha + p * spacing;
    return pts;
}

inline double lattice_spacing(const CodecConfig& cfg) {
    return (1.0 - 2.0 * cfg.alpha) / ((1 << cfg.B) - 1);
}

/// Index of the nearest lattice point; exact midpoints round to the upper
/// index, out-of-range values clamp to the end points.
inline int lattice_snap(double u, const CodecConfig& cfg) {
    const int n = 1 << cfg.B;
    const double q = std::floor((u - cfg.alpha) / lattice_spacing(cfg) + 0.5);
    return std::clamp(static_cast<int>(q), 0, n - 1);
}

/// Binary-reflected Gray code of `index`, MSB first.
inline BitWord gray_encode(std::uint32_t index, int nbits) {
    if (nbits < 1 || nbits > 31)
        throw std::invalid_argument("gray_encode: nbits must be in [1, 31]");
    if (index >= (std::uint32_t{1} << nbits))
        throw std::out_of_range("gray_encode: index out of range");
    const std::uint32_t g = index ^ (index >> 1);
    BitWord bits(nbits);
    for (int i = 0; i < nbits; ++i) bits[i] = (g >> (nbits - 1 - i)) & 1u;
    return bits;
}

/// Inverse of gray_encode.
inline std::uint32_t gray_decode(const BitWord& bits) {
    if (bits.empty() || bits.size() > 31)
        throw std::invalid_argument("gray_decode: bit count must be in [1, 31]");
    std::uint32_t g = 0;
    for (auto b : bits) g = (g << 1) | (b & 1u);
    std::uint32_t idx = g;
    while (g >>= 1) idx ^= g;
    return idx;
}

inline BitWord bitword_from_string(const std::string& s) {
    BitWord bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bitword_from_string: only '0'/'1' allowed");
        bits.push_back(c == '1');
    }
    return bits;
}

inline std::string bitword_to_string(const BitWord& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

/// Maps a word of 2B(T-1) bits to its unit-norm codeword. Each group of B
/// bits Gray-decodes to a lattice index; the lattice values fill the
/// hypercube coordinates (a_1..a_{T-1}, b_1..b_{T-1}), which then travel the
/// cube -> Gaussian -> ball -> sphere chain. No codebook table is built.
inline Eigen::VectorXcd encode(const BitWord& bits, const CodecConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(bits.size()) != cfg.word_bits())
        throw std::invalid_argument("encode: word must have exactly 2B(T-1) bits");
    const auto pts = lattice_points(cfg);
    const int d = cfg.T - 1;
    HypercubePoint p{Eigen::VectorXd(d), Eigen::VectorXd(d)};
    for (int k = 0; k < 2 * d; ++k) {
        const BitWord group(bits.begin() + static_cast<std::ptrdiff_t>(k) * cfg.B,
                            bits.begin() + static_cast<std::ptrdiff_t>(k + 1) * cfg.B);
        const double v = pts[gray_decode(group)];
        if (k < d)
            p.a[k] = v;
        else
            p.b[k - d] = v;
    }
    return ball_to_sphere(gauss_to_ball(cube_to_gauss(p)));
}

/// Best unit-norm rank-1 direction of a received block: the dominant left
/// singular vector, from a Hermitian eigendecomposition of the smaller Gram
/// matrix (exact at the block sizes this library targets).
inline Eigen::VectorXcd denoise(const Eigen::MatrixXcd& y) {
    if (y.rows() < 1 || y.cols() < 1) throw std::invalid_argument("denoise: empty block");
    if (!y.allFinite()) throw std::domain_error("denoise: non-finite block");
    if (y.norm() == 0.0) throw std::domain_error("denoise: zero block");
    if (y.cols() == 1) return y.col(0) / y.col(0).norm();
    if (y.rows() <= y.cols()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(y * y.adjoint());
        return es.eigenvectors().col(y.rows() - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(y.adjoint() * y);
    const Eigen::VectorXcd u = y * es.eigenvectors().col(y.cols() - 1);
    return u / u.norm();
}

namespace detail {

/// Decoder pipeline down to per-component lattice indices:
/// denoise, strip the first coordinate's phase, invert the radius map,
/// pull back through the Gaussian CDF, snap to the lattice.
inline void decode_indices(const Eigen::MatrixXcd& y, const CodecConfig& cfg,
                           std::vector<int>& idx) {
    if (y.rows() != cfg.T)
        throw std::invalid_argument("decode: block must have T rows");
    const Eigen::VectorXcd r = denoise(y);
    const std::complex<double> v0 = r[0];
    Eigen::VectorXcd w = r.tail(cfg.T - 1);
    if (std::abs(v0) >= 1e-12) w *= std::abs(v0) / v0;
    const double n = w.norm();
    if (n >= 1.0 - 1e-9) w *= (1.0 - 1e-9) / n;  // keeps the radius inversion bracketed
    const Eigen::VectorXcd z = ball_to_gauss(w);
    const int d = cfg.T - 1;
    idx.resize(2 * d);
    for (int k = 0; k < d; ++k) {
        idx[k] = lattice_snap(gauss_cdf(z[k].real()), cfg);
        idx[d + k] = lattice_snap(gauss_cdf(z[k].imag()), cfg);
    }
}

}  // namespace detail

/// Decodes a received T x N block back to a bit word. This is the
/// symbol-by-symbol detector whose cost does not grow with the codebook size;
/// it is total (never throws on noisy data, only on malformed blocks).
inline BitWord decode(const Eigen::MatrixXcd& y, const CodecConfig& cfg) {
    cfg.validate();
    std::vector<int> idx;
    detail::decode_indices(y, cfg, idx);
    BitWord bits;
    bits.reserve(cfg.word_bits());
    for (int v : idx) {
        const BitWord g = gray_encode(static_cast<std::uint32_t>(v), cfg.B);
        bits.insert(bits.end(), g.begin(), g.end());
    }
    return bits;
}

}  // namespace grasslattice
