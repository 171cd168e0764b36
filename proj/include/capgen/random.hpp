#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace capgen {

/// Random source used by every generator in the library.
///
/// Wraps a 64-bit Mersenne twister and provides the handful of draws the
/// generators need with bit-exact, platform-independent results (the
/// standard library distributions are implementation-defined, so uniform
/// reals, bounded integers and shuffles are computed here by hand).
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform01();

    /// Uniform on [lo, hi]; returns lo when the interval is degenerate.
    double uniform(double lo, double hi);

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Exact Gamma(shape, 1) draw (Marsaglia-Tsang).
    double gamma(double shape);

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Derives an independent seed for worker `stream` from a master seed.
/// Worker streams are reproducible given the master seed and thread count.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace capgen
