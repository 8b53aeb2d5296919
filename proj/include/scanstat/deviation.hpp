#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace scanstat {

/// Selects the increment X = 1 - E (plus) or its negation (minus), where E
/// is a unit exponential. X has mean 0, variance 1 and X <= 1.
enum class DeviationSign { plus, minus };

/// Returned where a rate or cumulant is infinite; exp(-k * kInfiniteRate) is exactly 0.
inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

/// I+(s) = -s - log(1 - s) on [0, 1), infinite from 1 on; I-(s) = s - log(1 + s).
double rate(DeviationSign sign, double s);

/// phi+(t) = t - log(1 + t); phi-(t) = -t - log(1 - t) on [0, 1), infinite from 1 on.
double cumulant(DeviationSign sign, double t);

/// x / sqrt(1 - x) for x < 1.
double phi_map(double x);

/// Inverse of phi_map: (x sqrt(x^2 + 4) - x^2) / 2.
double g_plus(double x);

/// (a sqrt(a^2 + 4) + a^2) / 2 for a >= 0.
double g_minus(double a);

/// exp(-k I(x / sqrt(k))), an upper bound on P(S_k / sqrt(k) >= x).
double chernoff_tail_bound(DeviationSign sign, std::size_t k, double x);

struct ModerateDeviation {
    double value;
    /// False when x lies outside [2, sqrt(k)/4], where the approximation is not meant to hold.
    bool in_range;
};

/// exp(-k I(x / sqrt(k))) / (sqrt(2 pi) x).
ModerateDeviation moderate_dev_approx(DeviationSign sign, std::size_t k, double x);

/// One draw of X (plus) or -X (minus), coordinate `index` of CounterStream(seed, stream).
double sample_increment(DeviationSign sign, std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// S_k for replicate `stream`: the sum of k consecutive increments.
double sample_partial_sum(DeviationSign sign, std::size_t k, std::uint64_t seed, std::uint64_t stream);

} // namespace scanstat
