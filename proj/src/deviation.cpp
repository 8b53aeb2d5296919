#include "scanstat/deviation.hpp"

#include "scanstat/error.hpp"
#include "scanstat/rng.hpp"

#include <cmath>
#include <numbers>

namespace scanstat {

double rate(DeviationSign sign, double s) {
    if (!(s >= 0.0)) {
        throw Error(ErrorCode::DomainError, "rate functions are evaluated on s >= 0");
    }
    if (sign == DeviationSign::plus) {
        if (s >= 1.0) return kInfiniteRate;
        return -s - std::log1p(-s);
    }
    return s - std::log1p(s);
}

double cumulant(DeviationSign sign, double t) {
    if (!(t >= 0.0)) {
        throw Error(ErrorCode::DomainError, "cumulant functions are evaluated on t >= 0");
    }
    if (sign == DeviationSign::plus) {
        return t - std::log1p(t);
    }
    if (t >= 1.0) return kInfiniteRate;
    return -t - std::log1p(-t);
}

double phi_map(double x) {
    if (!(x < 1.0)) {
        throw Error(ErrorCode::DomainError, "phi_map needs x < 1");
    }
    return x / std::sqrt(1.0 - x);
}

double g_plus(double x) {
    if (std::isnan(x)) {
        throw Error(ErrorCode::DomainError, "g_plus of NaN");
    }
    // Equivalent to (x sqrt(x^2 + 4) - x^2) / 2 = 2x / (x + sqrt(x^2 + 4))
    // for x >= 0, which avoids cancellation for large x.
    const double root = std::sqrt(x * x + 4.0);
    if (x >= 0.0) return 2.0 * x / (x + root);
    return 0.5 * (x * root - x * x);
}

double g_minus(double a) {
    if (!(a >= 0.0)) {
        throw Error(ErrorCode::DomainError, "g_minus needs a >= 0");
    }
    return 0.5 * (a * std::sqrt(a * a + 4.0) + a * a);
}

double chernoff_tail_bound(DeviationSign sign, std::size_t k, double x) {
    if (k == 0 || !(x > 0.0)) {
        throw Error(ErrorCode::DomainError, "Chernoff bound needs k >= 1 and x > 0");
    }
    const double kk = static_cast<double>(k);
    const double r = rate(sign, x / std::sqrt(kk));
    if (r == kInfiniteRate) return 0.0;
    return std::exp(-kk * r);
}

ModerateDeviation moderate_dev_approx(DeviationSign sign, std::size_t k, double x) {
    if (k == 0 || !(x > 0.0)) {
        throw Error(ErrorCode::DomainError, "moderate deviation approximation needs k >= 1 and x > 0");
    }
    const double bound = chernoff_tail_bound(sign, k, x);
    const double kk = static_cast<double>(k);
    return {bound / (std::sqrt(2.0 * std::numbers::pi) * x), x >= 2.0 && x <= std::sqrt(kk) / 4.0};
}

double sample_increment(DeviationSign sign, std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const double x = 1.0 - CounterStream(seed, stream).exponential(index);
    return sign == DeviationSign::plus ? x : -x;
}

double sample_partial_sum(DeviationSign sign, std::size_t k, std::uint64_t seed, std::uint64_t stream) {
    const CounterStream rng(seed, stream);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sum += 1.0 - rng.exponential(i);
    }
    return sign == DeviationSign::plus ? sum : -sum;
}

} // namespace scanstat
