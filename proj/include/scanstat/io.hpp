#pragma once

#include "scanstat/asymptotics.hpp"
#include "scanstat/sample.hpp"
#include "scanstat/scan.hpp"

#include <filesystem>
#include <istream>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace scanstat {

/// One number per line; the first column of a CSV is used. A non-numeric
/// first line is taken as a header, blank lines are ignored. Throws Parse on
/// malformed rows and EmptyInput when no numbers are present.
std::vector<double> read_values(std::istream& in);
std::vector<double> read_values(const std::filesystem::path& path);

/// "uniform", "uniform:a,b", "normal:mu,sigma", "exponential:rate",
/// "quantiles:path.csv" (rows of probability,quantile).
NullDistribution parse_null_spec(std::string_view spec);

nlohmann::json to_json(const ScanOutcome& outcome);
nlohmann::json to_json(const Calibration& calibration);

} // namespace scanstat
