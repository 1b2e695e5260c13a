#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "grasslattice/codec.hpp"
#include "grasslattice/rng.hpp"

namespace grasslattice {

/// Eb/N0 in dB from SNR in dB at spectral efficiency `rate` (b/s/Hz).
inline double ebn0_from_snr(double snr_db, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("ebn0_from_snr: rate must be positive");
    return snr_db - 10.0 * std::log10(rate);
}

inline double snr_db_to_linear(double snr_db) {
    return std::pow(10.0, snr_db / 10.0);
}

/// One Rayleigh block-fading channel use: Y = x h^T + sqrt(1/(T rho)) W with
/// h ~ CN(0, I_N) and i.i.d. CN(0,1) noise entries. rho = +inf transmits
/// noiseless blocks. Draw order is fixed (h first, then noise row-major), so
/// a given stream always produces the same block.
inline Eigen::MatrixXcd transmit(const Eigen::VectorXcd& x, int num_rx, double rho, Rng& rng) {
    if (num_rx < 1) throw std::invalid_argument("transmit: need at least one receive antenna");
    if (!(rho > 0.0)) throw std::invalid_argument("transmit: rho must be positive");
    const auto t = x.size();
    Eigen::VectorXcd h(num_rx);
    for (int n = 0; n < num_rx; ++n) h[n] = rng.cnormal();
    Eigen::MatrixXcd y = x * h.transpose();
    if (!std::isinf(rho)) {
        const double scale = std::sqrt(1.0 / (static_cast<double>(t) * rho));
        for (Eigen::Index i = 0; i < t; ++i)
            for (int n = 0; n < num_rx; ++n) y(i, n) += scale * rng.cnormal();
    }
    return y;
}

/// Per-SNR-point Monte Carlo tallies. `blocks` counts decision units: coded
/// blocks for the Grassmannian schemes, data symbols for the pilot scheme.
struct ErrorStats {
    double snr_db = 0.0;
    double ebn0_db = 0.0;
    std::uint64_t blocks = 0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t bit_errors = 0;
    double ser = 0.0;
    double ber = 0.0;
};

/// A point stops at min_symbol_errors or max_blocks, whichever comes first.
struct StopRule {
    std::uint64_t min_symbol_errors = 100;
    std::uint64_t max_blocks = 10'000'000;
};

namespace detail {

inline int hamming_gray(std::uint32_t a, std::uint32_t b) {
    return std::popcount((a ^ (a >> 1)) ^ (b ^ (b >> 1)));
}

inline double safe_ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

/// SER/BER of the Grass-Lattice codec under the block-fading channel, one
/// ErrorStats per SNR point. Each point runs on its own substream keyed by
/// the SNR value, so results do not depend on the order of the list.
/// Codewords are generated on the fly; the decoder is the symbol-by-symbol
/// detector from the codec, not ML.
inline std::vector<ErrorStats> run_error_rate(const CodecConfig& cfg, int num_rx,
                                              const std::vector<double>& snr_db_list,
                                              StopRule stop, std::uint64_t seed) {
    cfg.validate();
    if (num_rx < 1) throw std::invalid_argument("run_error_rate: need at least one antenna");
    const int d = cfg.T - 1;
    const int n_lat = 1 << cfg.B;
    const auto pts = lattice_points(cfg);
    // Gaussian coordinates of the lattice points; identical doubles to what
    // encode() computes, so this path is bit-equal to encode-then-transmit.
    std::vector<double> gauss_pts(n_lat);
    for (int i = 0; i < n_lat; ++i) gauss_pts[i] = gauss_icdf(pts[i]);

    const Rng master(seed);
    std::vector<ErrorStats> out;
    out.reserve(snr_db_list.size());
    std::vector<int> tx(2 * d), rx(2 * d);
    Eigen::VectorXcd z(d);
    for (double snr_db : snr_db_list) {
        Rng rng = master.substream(Rng::tag(snr_db), 0x6c617474);
        const double rho = snr_db_to_linear(snr_db);
        ErrorStats st;
        st.snr_db = snr_db;
        st.ebn0_db = ebn0_from_snr(snr_db, cfg.rate());
        while (st.symbol_errors < stop.min_symbol_errors && st.blocks < stop.max_blocks) {
            for (int k = 0; k < 2 * d; ++k)
                tx[k] = static_cast<int>(rng.uniform_below(n_lat));
            for (int k = 0; k < d; ++k)
                z[k] = std::complex<double>(gauss_pts[tx[k]], gauss_pts[tx[d + k]]);
            const Eigen::VectorXcd x = ball_to_sphere(gauss_to_ball(z));
            const Eigen::MatrixXcd y = transmit(x, num_rx, rho, rng);
            detail::decode_indices(y, cfg, rx);
            int bit_errs = 0;
            for (int k = 0; k < 2 * d; ++k)
                bit_errs += detail::hamming_gray(static_cast<std::uint32_t>(tx[k]),
                                                 static_cast<std::uint32_t>(rx[k]));
            st.blocks += 1;
            st.bit_errors += bit_errs;
            st.symbol_errors += bit_errs > 0 ? 1 : 0;
        }
        st.ser = detail::safe_ratio(st.symbol_errors, st.blocks);
        st.ber = detail::safe_ratio(st.bit_errors, st.blocks * cfg.word_bits());
        out.push_back(st);
    }
    return out;
}

struct AlphaSweepPoint {
    double alpha = 0.0;
    ErrorStats stats;
};

struct AlphaSweepResult {
    std::vector<AlphaSweepPoint> points;
    double best_alpha = 0.0;  // lowest SER; ties keep the earliest grid value
};

/// SER/BER over a grid of lattice margins at a single SNR. Every grid point
/// gets a substream keyed by (alpha, snr), so the grid order is irrelevant.
inline AlphaSweepResult sweep_alpha(CodecConfig cfg, const std::vector<double>& alpha_grid,
                                    double snr_db, int num_rx, StopRule stop,
                                    std::uint64_t seed) {
    if (alpha_grid.empty()) throw std::invalid_argument("sweep_alpha: empty grid");
    AlphaSweepResult res;
    res.points.reserve(alpha_grid.size());
    const Rng master(seed);
    for (double alpha : alpha_grid) {
        cfg.alpha = alpha;
        cfg.validate();
        const std::uint64_t point_seed = master.substream(Rng::tag(alpha), 0x616c7068).seed();
        auto stats = run_error_rate(cfg, num_rx, {snr_db}, stop, point_seed);
        res.points.push_back({alpha, stats.front()});
    }
    res.best_alpha = res.points.front().alpha;
    double best_ser = res.points.front().stats.ser;
    for (const auto& p : res.points) {
        if (p.stats.ser < best_ser) {
            best_ser = p.stats.ser;
            res.best_alpha = p.alpha;
        }
    }
    return res;
}

/// Exhaustive minimum pairwise chordal distance of the full codebook.
/// O(K^2) pair scan, guarded at K <= 2^20.
inline double min_chordal_distance(const CodecConfig& cfg) {
    cfg.validate();
    if (cfg.word_bits() > 20)
        throw std::invalid_argument("min_chordal_distance: codebook larger than 2^20");
    const std::uint64_t k_total = cfg.cardinality();
    const int d = cfg.T - 1;
    const int n_lat = 1 << cfg.B;
    const auto pts = lattice_points(cfg);
    std::vector<double> gauss_pts(n_lat);
    for (int i = 0; i < n_lat; ++i) gauss_pts[i] = gauss_icdf(pts[i]);

    std::vector<Eigen::VectorXcd> book;
    book.reserve(k_total);
    Eigen::VectorXcd z(d);
    for (std::uint64_t word = 0; word < k_total; ++word) {
        std::uint64_t rem = word;
        for (int k = 0; k < d; ++k) {
            const double re = gauss_pts[rem % n_lat];
            rem /= n_lat;
            const double im = gauss_pts[rem % n_lat];
            rem /= n_lat;
            z[k] = std::complex<double>(re, im);
        }
        book.push_back(ball_to_sphere(gauss_to_ball(z)));
    }
    double best = 1.0;
    for (std::size_t i = 0; i < book.size(); ++i)
        for (std::size_t j = i + 1; j < book.size(); ++j)
            best = std::min(best, chordal_distance(book[i], book[j]));
    return best;
}

// ---------------------------------------------------------------------------
// Externally supplied codebooks under ML detection
// ---------------------------------------------------------------------------

/// A stored constellation: unit-norm entries, optionally bit labels (all of
/// the same length). Used for evaluating constellations designed elsewhere.
struct Codebook {
    std::vector<Eigen::VectorXcd> entries;
    std::vector<BitWord> labels;  // empty, or one label per entry

    bool has_labels() const { return !labels.empty(); }

    int block_length() const {
        return entries.empty() ? 0 : static_cast<int>(entries.front().size());
    }

    void validate() const {
        if (entries.empty()) throw std::invalid_argument("Codebook: no entries");
        const auto t = entries.front().size();
        for (const auto& e : entries)
            if (e.size() != t) throw std::invalid_argument("Codebook: mixed block lengths");
        if (!labels.empty()) {
            if (labels.size() != entries.size())
                throw std::invalid_argument("Codebook: label count mismatch");
            for (const auto& l : labels)
                if (l.size() != labels.front().size())
                    throw std::invalid_argument("Codebook: mixed label lengths");
        }
    }
};

/// Maximum-likelihood detection for equiprobable codewords:
/// argmax_k ||Y^H x_k||^2, ties broken toward the lowest index.
inline int ml_detect(const Eigen::MatrixXcd& y, const Codebook& cb) {
    if (cb.entries.empty()) throw std::invalid_argument("ml_detect: empty codebook");
    int best = 0;
    double best_metric = -1.0;
    for (std::size_t k = 0; k < cb.entries.size(); ++k) {
        const double metric = (y.adjoint() * cb.entries[k]).squaredNorm();
        if (metric > best_metric) {
            best_metric = metric;
            best = static_cast<int>(k);
        }
    }
    return best;
}

/// Monte Carlo SER/BER of a stored codebook under ML detection, uniform
/// codeword draws. BER is reported only when labels exist (NaN otherwise).
inline std::vector<ErrorStats> run_ml_error_rate(const Codebook& cb, int num_rx,
                                                 const std::vector<double>& snr_db_list,
                                                 StopRule stop, std::uint64_t seed) {
    cb.validate();
    if (num_rx < 1) throw std::invalid_argument("run_ml_error_rate: need at least one antenna");
    const double k_total = static_cast<double>(cb.entries.size());
    const double rate = std::log2(k_total) / cb.block_length();
    const std::size_t label_bits = cb.has_labels() ? cb.labels.front().size() : 0;

    const Rng master(seed);
    std::vector<ErrorStats> out;
    out.reserve(snr_db_list.size());
    for (double snr_db : snr_db_list) {
        Rng rng = master.substream(Rng::tag(snr_db), 0x6d6c6462);
        const double rho = snr_db_to_linear(snr_db);
        ErrorStats st;
        st.snr_db = snr_db;
        st.ebn0_db = rate > 0.0 ? ebn0_from_snr(snr_db, rate) : snr_db;
        while (st.symbol_errors < stop.min_symbol_errors && st.blocks < stop.max_blocks) {
            const auto tx = static_cast<std::size_t>(rng.uniform_below(cb.entries.size()));
            const Eigen::MatrixXcd y = transmit(cb.entries[tx], num_rx, rho, rng);
            const auto rx = static_cast<std::size_t>(ml_detect(y, cb));
            st.blocks += 1;
            if (rx != tx) {
                st.symbol_errors += 1;
                if (cb.has_labels()) {
                    const BitWord& lt = cb.labels[tx];
                    const BitWord& lr = cb.labels[rx];
                    for (std::size_t i = 0; i < label_bits; ++i)
                        st.bit_errors += lt[i] != lr[i];
                }
            }
        }
        st.ser = detail::safe_ratio(st.symbol_errors, st.blocks);
        st.ber = cb.has_labels()
                     ? detail::safe_ratio(st.bit_errors, st.blocks * label_bits)
                     : std::numeric_limits<double>::quiet_NaN();
        out.push_back(st);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coherent pilot-based baseline
// ---------------------------------------------------------------------------

/// Gray-labeled square QAM with unit average energy. The table is indexed by
/// the label: the high half of the bits Gray-labels the I level, the low half
/// the Q level, so lattice neighbors differ in exactly one bit.
inline std::vector<std::complex<double>> gray_qam(int order) {
    if (order < 4 || (order & (order - 1)) != 0)
        throw std::invalid_argument("gray_qam: order must be a power of 4, >= 4");
    int m = 0;
    while ((1 << m) < order) ++m;
    if (m % 2 != 0) throw std::invalid_argument("gray_qam: order must be a power of 4");
    const int half = m / 2;
    const int levels = 1 << half;
    const double norm = std::sqrt(2.0 * (levels * levels - 1) / 3.0);
    std::vector<std::complex<double>> table(order);
    for (std::uint32_t li = 0; li < static_cast<std::uint32_t>(levels); ++li) {
        for (std::uint32_t lq = 0; lq < static_cast<std::uint32_t>(levels); ++lq) {
            const std::uint32_t label =
                ((li ^ (li >> 1)) << half) | (lq ^ (lq >> 1));
            const double re = (2.0 * li - (levels - 1)) / norm;
            const double im = (2.0 * lq - (levels - 1)) / norm;
            table[label] = {re, im};
        }
    }
    return table;
}

/// Nearest-point label for a Gray QAM estimate.
inline std::uint32_t gray_qam_slice(std::complex<double> v, int order) {
    int m = 0;
    while ((1 << m) < order) ++m;
    const int half = m / 2;
    const int levels = 1 << half;
    const double norm = std::sqrt(2.0 * (levels * levels - 1) / 3.0);
    const auto level = [&](double a) {
        const int l = static_cast<int>(std::floor((a * norm + (levels - 1)) / 2.0 + 0.5));
        return static_cast<std::uint32_t>(std::clamp(l, 0, levels - 1));
    };
    const std::uint32_t li = level(v.real());
    const std::uint32_t lq = level(v.imag());
    return ((li ^ (li >> 1)) << half) | (lq ^ (lq >> 1));
}

/// Pilot scheme block layout: one known pilot symbol, then T-1 Gray-QAM data
/// symbols, total average block energy 1.
struct PilotConfig {
    int T = 2;
    int qam_order = 16;
    double power_split = 0.5;  // fraction of the block energy on the pilot

    void validate() const {
        if (T < 2) throw std::invalid_argument("PilotConfig: T must be >= 2");
        if (qam_order < 4 || (qam_order & (qam_order - 1)) != 0)
            throw std::invalid_argument("PilotConfig: qam_order must be a power of 4");
        int m = 0;
        while ((1 << m) < qam_order) ++m;
        if (m % 2 != 0)
            throw std::invalid_argument("PilotConfig: qam_order must be a power of 4");
        if (!(power_split > 0.0 && power_split < 1.0))
            throw std::invalid_argument("PilotConfig: power_split must lie in (0,1)");
    }

    int bits_per_symbol() const {
        int m = 0;
        while ((1 << m) < qam_order) ++m;
        return m;
    }

    double rate() const {
        return static_cast<double>((T - 1) * bits_per_symbol()) / T;
    }

    double data_symbol_energy() const { return (1.0 - power_split) / (T - 1); }
};

/// Transmitted pilot-scheme block for the given data labels:
/// x = [sqrt(power_split), sqrt(Es_d) q_1, ..., sqrt(Es_d) q_{T-1}]^T.
inline Eigen::VectorXcd pilot_block(const PilotConfig& pcfg,
                                    const std::vector<std::uint32_t>& labels,
                                    const std::vector<std::complex<double>>& qam_table) {
    if (static_cast<int>(labels.size()) != pcfg.T - 1)
        throw std::invalid_argument("pilot_block: need T-1 data labels");
    Eigen::VectorXcd x(pcfg.T);
    x[0] = std::sqrt(pcfg.power_split);
    const double amp = std::sqrt(pcfg.data_symbol_energy());
    for (int i = 0; i < pcfg.T - 1; ++i) x[i + 1] = amp * qam_table[labels[i]];
    return x;
}

/// Coherent baseline: MMSE channel estimate from the pilot row, MMSE-combined
/// and unbiased data estimates, nearest-point QAM decisions. `blocks` in the
/// returned stats counts data symbols (the decision units), which coincides
/// with coherence blocks at T = 2.
inline std::vector<ErrorStats> pilot_error_rate(const PilotConfig& pcfg, int num_rx,
                                                const std::vector<double>& snr_db_list,
                                                StopRule stop, std::uint64_t seed) {
    pcfg.validate();
    if (num_rx < 1) throw std::invalid_argument("pilot_error_rate: need at least one antenna");
    const auto qam = gray_qam(pcfg.qam_order);
    const int n_data = pcfg.T - 1;
    const int m_bits = pcfg.bits_per_symbol();
    const double es_d = pcfg.data_symbol_energy();
    const double pilot_amp = std::sqrt(pcfg.power_split);

    const Rng master(seed);
    std::vector<ErrorStats> out;
    out.reserve(snr_db_list.size());
    std::vector<std::uint32_t> labels(n_data);
    for (double snr_db : snr_db_list) {
        Rng rng = master.substream(Rng::tag(snr_db), 0x70696c74);
        const double rho = snr_db_to_linear(snr_db);
        const double sigma2 = std::isinf(rho) ? 0.0 : 1.0 / (pcfg.T * rho);
        ErrorStats st;
        st.snr_db = snr_db;
        st.ebn0_db = ebn0_from_snr(snr_db, pcfg.rate());
        while (st.symbol_errors < stop.min_symbol_errors && st.blocks < stop.max_blocks) {
            for (auto& l : labels)
                l = static_cast<std::uint32_t>(rng.uniform_below(pcfg.qam_order));
            const Eigen::VectorXcd x = pilot_block(pcfg, labels, qam);
            const Eigen::MatrixXcd y = transmit(x, num_rx, rho, rng);
            // MMSE channel estimate from the pilot row (prior h ~ CN(0, I))
            const Eigen::VectorXcd hhat =
                y.row(0).transpose() * (pilot_amp / (pilot_amp * pilot_amp + sigma2));
            const double hnorm2 = std::max(hhat.squaredNorm(), 1e-300);
            for (int i = 0; i < n_data; ++i) {
                // MMSE combining, rescaled to an unbiased estimate before slicing
                const std::complex<double> shat = hhat.dot(y.row(i + 1).transpose()) / hnorm2;
                const std::uint32_t rx = gray_qam_slice(shat / std::sqrt(es_d), pcfg.qam_order);
                st.blocks += 1;
                if (rx != labels[i]) {
                    st.symbol_errors += 1;
                    st.bit_errors += std::popcount(rx ^ labels[i]);
                }
            }
        }
        st.ser = detail::safe_ratio(st.symbol_errors, st.blocks);
        st.ber = detail::safe_ratio(st.bit_errors, st.blocks * static_cast<std::uint64_t>(m_bits));
        out.push_back(st);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Visualization helpers
// ---------------------------------------------------------------------------

/// Hopf projection of a unit vector in C^2 onto the real 2-sphere:
/// (x1, x2) -> (Re 2 x1 x2*, Im 2 x1 x2*, |x2|^2 - |x1|^2).
inline Eigen::Vector3d hopf_project(const Eigen::VectorXcd& x) {
    if (x.size() != 2) throw std::invalid_argument("hopf_project: needs a length-2 vector");
    if (std::abs(x.squaredNorm() - 1.0) > 1e-9)
        throw std::domain_error("hopf_project: vector must be unit norm");
    const std::complex<double> c = 2.0 * x[0] * std::conj(x[1]);
    return {c.real(), c.imag(), std::norm(x[1]) - std::norm(x[0])};
}

}  // namespace grasslattice
