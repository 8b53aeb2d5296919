#pragma once

#include "scanstat/asymptotics.hpp"
#include "scanstat/scan.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace scanstat {

enum class ClassicalStatistic { min_spacing, ks, eicker_standardized, eicker_studentized };

using Statistic = std::variant<ScanSpec, ClassicalStatistic>;

std::string describe(const Statistic& statistic);

/// Evaluates the statistic on one sample (scan statistics via scan_fast).
double evaluate(const Statistic& statistic, const SortedSample& sample, const ScanOptions& options = {});

struct ExperimentConfig {
    std::size_t n = 100;
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    Statistic statistic = ScanSpec{};
    std::optional<LimitLaw> law;
    unsigned parallelism = 0; ///< worker threads, 0 = hardware concurrency
    ScanOptions scan_options;
};

class EmpiricalLaw {
public:
    EmpiricalLaw(std::vector<double> values, std::size_t n, Statistic statistic, std::uint64_t seed);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t n() const noexcept { return n_; }
    const Statistic& statistic() const noexcept { return statistic_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Fraction of replicates <= t.
    double cdf(double t) const;
    /// Fraction of replicates >= t.
    double survival(double t) const;
    /// Smallest replicate value v with cdf(v) >= p.
    double quantile(double p) const;

private:
    std::vector<double> values_;
    std::size_t n_;
    Statistic statistic_;
    std::uint64_t seed_;
};

/// Runs fn(r) for r in [0, count) on `parallelism` workers (0 = auto).
/// Each index runs exactly once; the schedule is not observable in results
/// as long as fn(r) writes only to slot r.
void parallel_for(std::size_t count, unsigned parallelism, const std::function<void(std::size_t)>& fn);

/// Replicate r scans sample_uniform_order_stats(n, seed, r). The result is
/// independent of the worker count. A replicate that fails aborts the run
/// with ReplicateFailed naming the seed and replicate.
EmpiricalLaw run_experiment(const ExperimentConfig& config);

struct PointError {
    double tau;
    double threshold;
    double empirical;
    double limit;
    double abs_error;
};

struct GofReport {
    double ks_distance = 0.0;
    std::vector<PointError> pointwise;
    std::optional<double> coincidence_rate;
};

/// True when the law describes the limit of the statistic.
bool law_matches(const Statistic& statistic, const LimitLaw& law);

/// Sup distance between the empirical CDF and the limit CDF of the statistic,
/// plus pointwise errors at tau in {-1, 0, 1, 2} ({0.5, 1, 2} for the
/// full-range standardized law). Throws IncompatibleLaw on a mismatch.
GofReport compare_to_limit(const EmpiricalLaw& emp, const LimitLaw& law);

/// Same as above at caller-chosen tau points.
GofReport compare_to_limit(const EmpiricalLaw& emp, const LimitLaw& law, const std::vector<double>& taus);

struct CoincidenceRates {
    double rate_minus;       ///< fraction of two-sided studentized scans attained on the minus side
    double rate_tilde_plus;  ///< fraction of two-sided standardized scans attained on the plus side
};

CoincidenceRates coincidence_rates(std::size_t n, std::size_t replicates, std::uint64_t seed,
                                   unsigned parallelism = 0);

/// 64-bit FNV-1a over the bit patterns of the sorted replicate values, as hex.
std::string digest(const EmpiricalLaw& emp);

nlohmann::json config_to_json(const ExperimentConfig& config);

/// {config, summary, quantiles, digest[, gof]}
nlohmann::json experiment_record(const ExperimentConfig& config, const EmpiricalLaw& emp,
                                 const std::optional<GofReport>& gof = std::nullopt);

enum class AppendStatus { appended, verified };

/// Appends the record to a JSON-lines file. When a record with the same
/// config is already present nothing is written; its digest must match or
/// DigestMismatch is thrown.
AppendStatus append_record(const std::filesystem::path& path, const nlohmann::json& record);

/// One replicate value per row under a "value" header.
void write_raw_csv(const std::filesystem::path& path, const EmpiricalLaw& emp);

} // namespace scanstat
