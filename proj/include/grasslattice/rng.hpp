#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <random>

#include "grasslattice/gaussmap.hpp"

namespace grasslattice {

namespace detail {

// splitmix64 finalizer; whitens seed material for substream derivation
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic random source for the simulation harness. All variates are
/// derived from raw mt19937_64 words in-library, so identical seeds produce
/// identical streams regardless of the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Child stream keyed by up to two tags. Derived from the constructor
    /// seed only, so it does not depend on what the parent has drawn.
    Rng substream(std::uint64_t tag0, std::uint64_t tag1 = 0) const {
        return Rng(detail::mix64(detail::mix64(detail::mix64(seed_) ^ tag0) ^ tag1));
    }

    /// Stream tag from a double (e.g. an SNR value), so per-point streams
    /// depend on the point itself rather than its position in a list.
    static std::uint64_t tag(double v) { return std::bit_cast<std::uint64_t>(v); }

    /// Uniform on the open interval (0,1).
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
        for (;;) {
            const std::uint64_t r = gen_();
            if (r < limit) return r % n;
        }
    }

    /// Real N(0, 1/2) draw: one quadrature component of a CN(0,1) variable.
    double normal_half() { return gauss_icdf(uniform01()); }

    /// Circularly symmetric complex Gaussian CN(0,1).
    std::complex<double> cnormal() {
        const double re = normal_half();
        const double im = normal_half();
        return {re, im};
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace grasslattice
