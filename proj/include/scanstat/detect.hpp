#pragma once

#include "scanstat/sample.hpp"
#include "scanstat/scan.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace scanstat {

struct Finding {
    /// [x_(max(i,1)), x_(j)] in data coordinates, always inside the data range.
    double lo;
    double hi;
    double value;
    /// Limit-law p-value; absent when the law is undefined at this n.
    std::optional<double> p_value;
    std::size_t i;
    std::size_t j;
};

struct DetectReport {
    std::optional<Finding> cluster;     ///< studentized plus scan, studentized_plus law
    std::optional<Finding> gap;         ///< studentized minus scan, studentized_minus law
    std::optional<Finding> standardized; ///< standardized plus scan, standardized_full law
    std::size_t n = 0;
    std::string null_spec;
    std::vector<std::string> warnings;
};

/// Maps data to the unit interval under the null, scans for a cluster, a
/// gap and the standardized excess, and calibrates each with its limit law.
/// The three p-values are reported side by side and never combined.
DetectReport detect(std::span<const double> data, const NullDistribution& null,
                    const ScanOptions& options = {});

nlohmann::json to_json(const DetectReport& report);

} // namespace scanstat
