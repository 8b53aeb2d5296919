#include "scanstat/detect.hpp"

#include "scanstat/asymptotics.hpp"
#include "scanstat/error.hpp"

#include <algorithm>

namespace scanstat {

namespace {

std::optional<Finding> find(const SortedSample& sample, const std::vector<double>& sorted_data, const ScanSpec& spec,
                            const LimitLaw& law, const ScanOptions& options, std::vector<std::string>& warnings,
                            const char* label) {
    ScanOutcome outcome;
    try {
        outcome = scan_fast(sample, spec, options);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyWindow) throw;
        warnings.push_back(std::string(label) + "_window_empty");
        return std::nullopt;
    }
    Finding f;
    f.value = outcome.value;
    f.i = outcome.i;
    f.j = outcome.j;
    // Order statistic t of the transformed sample is data point t of the sorted data.
    f.lo = sorted_data[std::max<std::size_t>(outcome.i, 1) - 1];
    f.hi = sorted_data[outcome.j - 1];
    try {
        f.p_value = p_value(law, sample.size(), outcome.value);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DomainError) throw;
        warnings.push_back(std::string(label) + "_p_value_unavailable");
    }
    return f;
}

nlohmann::json finding_json(const std::optional<Finding>& f) {
    if (!f) return nullptr;
    return {{"interval", {f->lo, f->hi}},
            {"value", f->value},
            {"p_value", f->p_value ? nlohmann::json(*f->p_value) : nlohmann::json(nullptr)},
            {"i", f->i},
            {"j", f->j}};
}

} // namespace

DetectReport detect(std::span<const double> data, const NullDistribution& null, const ScanOptions& options) {
    const SortedSample sample = cdf_transform(data, null);
    std::vector<double> sorted_data(data.begin(), data.end());
    std::stable_sort(sorted_data.begin(), sorted_data.end());

    DetectReport report;
    report.n = sample.size();
    report.null_spec = null.describe();
    if (report.n <= kPreAsymptoticN) {
        report.warnings.emplace_back("pre_asymptotic_n");
    }
    const auto values = sample.values();
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
        report.warnings.emplace_back("tied_values");
    }
    report.cluster = find(sample, sorted_data, {Variant::studentized, Side::plus, 1, kFullLength},
                          LimitLaw::studentized_plus(), options, report.warnings, "cluster");
    // The asymptotic window only applies to the cluster scan.
    ScanOptions exact_options;
    exact_options.prune = options.prune;
    report.gap = find(sample, sorted_data, {Variant::studentized, Side::minus, 1, kFullLength},
                      LimitLaw::studentized_minus(), exact_options, report.warnings, "gap");
    report.standardized = find(sample, sorted_data, {Variant::standardized, Side::plus, 1, kFullLength},
                               LimitLaw::standardized_full(), exact_options, report.warnings, "standardized");
    return report;
}

nlohmann::json to_json(const DetectReport& report) {
    return {{"n", report.n},
            {"null", report.null_spec},
            {"cluster", finding_json(report.cluster)},
            {"gap", finding_json(report.gap)},
            {"standardized", finding_json(report.standardized)},
            {"warnings", report.warnings}};
}

} // namespace scanstat
