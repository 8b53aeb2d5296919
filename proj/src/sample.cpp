#include "scanstat/sample.hpp"

#include "scanstat/error.hpp"
#include "scanstat/rng.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <sstream>

namespace scanstat {

namespace {

void check_unit_value(double v, std::size_t index) {
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteValue, "value at position " + std::to_string(index) + " is not finite");
    }
    if (v < 0.0 || v > 1.0) {
        std::ostringstream os;
        os << "value " << v << " at position " << index << " lies outside [0, 1]";
        throw Error(ErrorCode::OutOfUnitInterval, os.str());
    }
}

std::vector<double> pad(std::vector<double> sorted) {
    sorted.insert(sorted.begin(), 0.0);
    sorted.push_back(1.0);
    return sorted;
}

} // namespace

SortedSample SortedSample::from_values(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::EmptyInput, "sample is empty");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        check_unit_value(values[i], i);
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::stable_sort(sorted.begin(), sorted.end());
    return SortedSample(pad(std::move(sorted)));
}

SortedSample SortedSample::from_sorted(std::vector<double> sorted) {
    if (sorted.empty()) {
        throw Error(ErrorCode::EmptyInput, "sample is empty");
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        check_unit_value(sorted[i], i);
        if (i > 0 && sorted[i] < sorted[i - 1]) {
            throw Error(ErrorCode::DomainError, "values are not sorted at position " + std::to_string(i));
        }
    }
    return SortedSample(pad(std::move(sorted)));
}

SortedSample sort_sample(std::span<const double> values) { return SortedSample::from_values(values); }

NullDistribution NullDistribution::uniform(double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        throw Error(ErrorCode::DomainError, "uniform null needs finite lo < hi");
    }
    return NullDistribution(Kind::uniform, {lo, hi});
}

NullDistribution NullDistribution::normal(double mean, double sd) {
    if (!(std::isfinite(mean) && std::isfinite(sd) && sd > 0.0)) {
        throw Error(ErrorCode::DomainError, "normal null needs finite mean and sd > 0");
    }
    return NullDistribution(Kind::normal, {mean, sd});
}

NullDistribution NullDistribution::exponential(double rate) {
    if (!(std::isfinite(rate) && rate > 0.0)) {
        throw Error(ErrorCode::DomainError, "exponential null needs rate > 0");
    }
    return NullDistribution(Kind::exponential, {rate});
}

NullDistribution NullDistribution::quantile_table(std::vector<double> probabilities, std::vector<double> quantiles) {
    if (probabilities.size() != quantiles.size() || probabilities.size() < 2) {
        throw Error(ErrorCode::DomainError, "quantile table needs at least two (probability, quantile) rows");
    }
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        const double p = probabilities[k];
        const double x = quantiles[k];
        if (!std::isfinite(p) || !std::isfinite(x) || p < 0.0 || p > 1.0) {
            throw Error(ErrorCode::DomainError, "quantile table row " + std::to_string(k) + " is invalid");
        }
        if (k > 0 && (x <= quantiles[k - 1] || p < probabilities[k - 1])) {
            throw Error(ErrorCode::DomainError,
                        "quantile table must have increasing quantiles and nondecreasing probabilities");
        }
    }
    NullDistribution null(Kind::quantile_table, {});
    null.table_p_ = std::move(probabilities);
    null.table_x_ = std::move(quantiles);
    return null;
}

double NullDistribution::cdf(double x) const {
    if (!std::isfinite(x)) {
        throw Error(ErrorCode::NonFiniteValue, "data point is not finite");
    }
    switch (kind_) {
    case Kind::uniform: {
        const double lo = params_[0];
        const double hi = params_[1];
        if (x < lo || x > hi) {
            throw Error(ErrorCode::DomainError, "data point outside the uniform support");
        }
        return (x - lo) / (hi - lo);
    }
    case Kind::normal:
        return 0.5 * std::erfc(-(x - params_[0]) / (params_[1] * std::sqrt(2.0)));
    case Kind::exponential:
        if (x < 0.0) {
            throw Error(ErrorCode::DomainError, "data point outside the exponential support");
        }
        return -std::expm1(-params_[0] * x);
    case Kind::quantile_table: {
        if (x < table_x_.front() || x > table_x_.back()) {
            throw Error(ErrorCode::DomainError, "data point outside the tabulated quantile range");
        }
        const auto hi = std::upper_bound(table_x_.begin(), table_x_.end(), x);
        if (hi == table_x_.end()) {
            return table_p_.back();
        }
        const auto k = static_cast<std::size_t>(hi - table_x_.begin());
        const double t = (x - table_x_[k - 1]) / (table_x_[k] - table_x_[k - 1]);
        return table_p_[k - 1] + t * (table_p_[k] - table_p_[k - 1]);
    }
    }
    return 0.0;
}

double NullDistribution::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::DomainError, "probability outside [0, 1]");
    }
    switch (kind_) {
    case Kind::uniform:
        return params_[0] + p * (params_[1] - params_[0]);
    case Kind::normal:
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return params_[0] - params_[1] * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
    case Kind::exponential:
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        return -std::log1p(-p) / params_[0];
    case Kind::quantile_table: {
        if (p < table_p_.front() || p > table_p_.back()) {
            throw Error(ErrorCode::DomainError, "probability outside the tabulated range");
        }
        // First row whose probability reaches p; flat segments map to their left end.
        const auto hi = std::lower_bound(table_p_.begin(), table_p_.end(), p);
        const auto k = static_cast<std::size_t>(hi - table_p_.begin());
        if (k == 0 || table_p_[k] == p) {
            return table_x_[k];
        }
        const double t = (p - table_p_[k - 1]) / (table_p_[k] - table_p_[k - 1]);
        return table_x_[k - 1] + t * (table_x_[k] - table_x_[k - 1]);
    }
    }
    return 0.0;
}

std::string NullDistribution::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case Kind::uniform: os << "uniform:" << params_[0] << ',' << params_[1]; break;
    case Kind::normal: os << "normal:" << params_[0] << ',' << params_[1]; break;
    case Kind::exponential: os << "exponential:" << params_[0]; break;
    case Kind::quantile_table: os << "quantiles:<" << table_p_.size() << " rows>"; break;
    }
    return os.str();
}

SortedSample cdf_transform(std::span<const double> data, const NullDistribution& null) {
    if (data.empty()) {
        throw Error(ErrorCode::EmptyInput, "no data points");
    }
    std::vector<double> mapped;
    mapped.reserve(data.size());
    for (double x : data) {
        mapped.push_back(null.cdf(x));
    }
    return SortedSample::from_values(mapped);
}

SortedSample sample_uniform_order_stats(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    if (n == 0) {
        throw Error(ErrorCode::EmptyInput, "n must be at least 1");
    }
    const CounterStream rng(seed, stream);
    std::vector<double> partial(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += rng.exponential(i);
        partial[i] = total;
    }
    total += rng.exponential(n);
    if (total == 0.0) {
        // Every draw was exactly zero; probability 2^-53(n+1).
        std::fill(partial.begin(), partial.end(), 0.0);
        total = 1.0;
    }
    for (double& v : partial) {
        v /= total;
    }
    return SortedSample::from_sorted(std::move(partial));
}

} // namespace scanstat
