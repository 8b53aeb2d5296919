#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace scanstat {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream. Draw `index` of stream `stream` under `seed`
/// is a pure function of the triple, so replicate r, coordinate i can be
/// regenerated anywhere, in any order, on any thread.
class CounterStream {
public:
    using result_type = std::uint64_t;

    constexpr CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix64(mix64(seed) ^ mix64(stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL))) {}

    constexpr std::uint64_t bits(std::uint64_t index) const noexcept {
        return mix64(key_ ^ mix64(index + 0xd1b54a32d192ed03ULL));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t index) const noexcept {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    /// Unit exponential as -log(1 - U); finite because U < 1.
    double exponential(std::uint64_t index) const noexcept {
        return -std::log1p(-uniform(index));
    }

    // UniformRandomBitGenerator interface, consuming indices sequentially.
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept { return bits(cursor_++); }

private:
    std::uint64_t key_;
    std::uint64_t cursor_ = 0;
};

} // namespace scanstat
