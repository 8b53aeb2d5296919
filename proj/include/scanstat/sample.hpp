#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace scanstat {

/// Ascending sample on [0, 1] with the virtual endpoints u(0) = 0 and
/// u(n + 1) = 1. Ties are allowed; they show up as zero spacings.
class SortedSample {
public:
    /// Validates and sorts `values` (stable for duplicates).
    static SortedSample from_values(std::span<const double> values);

    /// Takes ownership of already-sorted values; validates order and range.
    static SortedSample from_sorted(std::vector<double> sorted);

    std::size_t size() const noexcept { return padded_.size() - 2; }

    /// u(0) = 0, u(1..n) the data, u(n + 1) = 1.
    double u(std::size_t i) const noexcept { return padded_[i]; }

    std::span<const double> values() const noexcept {
        return std::span<const double>(padded_).subspan(1, size());
    }

    /// All n + 2 points including both endpoints.
    std::span<const double> padded() const noexcept { return padded_; }

private:
    explicit SortedSample(std::vector<double> padded) : padded_(std::move(padded)) {}

    std::vector<double> padded_;
};

SortedSample sort_sample(std::span<const double> values);

class NullDistribution {
public:
    enum class Kind { uniform, normal, exponential, quantile_table };

    static NullDistribution uniform(double lo = 0.0, double hi = 1.0);
    static NullDistribution normal(double mean, double sd);
    static NullDistribution exponential(double rate);
    /// Piecewise-linear CDF through (quantile[k], probability[k]). Quantiles
    /// must be strictly increasing and probabilities nondecreasing in [0, 1].
    static NullDistribution quantile_table(std::vector<double> probabilities,
                                           std::vector<double> quantiles);

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& parameters() const noexcept { return params_; }

    /// Throws DomainError outside the support.
    double cdf(double x) const;
    double quantile(double p) const;

    /// Canonical "family:p1,p2" form, as accepted by parse_null_spec.
    std::string describe() const;

private:
    NullDistribution(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

    Kind kind_;
    std::vector<double> params_;
    std::vector<double> table_p_;
    std::vector<double> table_x_;
};

/// Maps data through the null CDF and sorts the result.
SortedSample cdf_transform(std::span<const double> data, const NullDistribution& null);

/// Uniform order statistics from n + 1 unit exponentials, U_(i) = (Y_1 + ... + Y_i) / (Y_1 + ... + Y_{n+1}).
/// Exponential i of the draw is coordinate i of CounterStream(seed, stream).
SortedSample sample_uniform_order_stats(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

} // namespace scanstat
