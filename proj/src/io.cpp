#include "scanstat/io.hpp"

#include "scanstat/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

namespace scanstat {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<double> parse_number_list(std::string_view list, std::string_view spec) {
    std::vector<double> out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto item = list.substr(0, comma);
        double v = 0.0;
        if (!parse_double(item, v)) {
            throw Error(ErrorCode::Parse, "bad parameter '" + std::string(item) + "' in null spec '" +
                                              std::string(spec) + "'");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace

std::vector<double> read_values(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto field = trim(row.substr(0, row.find(',')));
        double v = 0.0;
        if (!parse_double(field, v)) {
            if (!seen_content) {
                seen_content = true; // header
                continue;
            }
            throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": '" + std::string(field) +
                                              "' is not a number");
        }
        seen_content = true;
        values.push_back(v);
    }
    if (values.empty()) {
        throw Error(ErrorCode::EmptyInput, "no numeric values in input");
    }
    return values;
}

std::vector<double> read_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    return read_values(in);
}

NullDistribution parse_null_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view family = spec.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    try {
        if (family == "uniform") {
            if (args.empty()) return NullDistribution::uniform();
            const auto p = parse_number_list(args, spec);
            if (p.size() != 2) throw Error(ErrorCode::Parse, "uniform takes lo,hi");
            return NullDistribution::uniform(p[0], p[1]);
        }
        if (family == "normal") {
            const auto p = args.empty() ? std::vector<double>{0.0, 1.0} : parse_number_list(args, spec);
            if (p.size() != 2) throw Error(ErrorCode::Parse, "normal takes mean,sd");
            return NullDistribution::normal(p[0], p[1]);
        }
        if (family == "exponential") {
            const auto p = args.empty() ? std::vector<double>{1.0} : parse_number_list(args, spec);
            if (p.size() != 1) throw Error(ErrorCode::Parse, "exponential takes rate");
            return NullDistribution::exponential(p[0]);
        }
        if (family == "quantiles") {
            if (args.empty()) throw Error(ErrorCode::Parse, "quantiles needs a table path");
            std::ifstream in{std::string(args)};
            if (!in) throw Error(ErrorCode::Io, "cannot open quantile table " + std::string(args));
            std::vector<double> probs;
            std::vector<double> quants;
            std::string line;
            bool first = true;
            while (std::getline(in, line)) {
                const auto row = trim(line);
                if (row.empty()) continue;
                const auto comma = row.find(',');
                double p = 0.0;
                double x = 0.0;
                const bool ok = comma != std::string_view::npos && parse_double(row.substr(0, comma), p) &&
                                parse_double(row.substr(comma + 1), x);
                if (!ok) {
                    if (first) {
                        first = false;
                        continue;
                    }
                    throw Error(ErrorCode::Parse, "bad quantile table row '" + std::string(row) + "'");
                }
                first = false;
                probs.push_back(p);
                quants.push_back(x);
            }
            return NullDistribution::quantile_table(std::move(probs), std::move(quants));
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DomainError) {
            throw Error(ErrorCode::Parse, e.what());
        }
        throw;
    }
    throw Error(ErrorCode::Parse, "unknown null family '" + std::string(family) + "'");
}

nlohmann::json to_json(const ScanOutcome& outcome) {
    return {{"value", outcome.value},
            {"side", to_string(outcome.side)},
            {"variant", to_string(outcome.variant)},
            {"i", outcome.i},
            {"j", outcome.j},
            {"length", outcome.length()},
            {"interval", {outcome.lower, outcome.upper}},
            {"pairs_evaluated", outcome.pairs_evaluated},
            {"exact", outcome.exact}};
}

nlohmann::json to_json(const Calibration& calibration) {
    nlohmann::json j;
    j["law"] = calibration.law.name();
    if (calibration.law.kind() == LawKind::standardized_windowed) {
        j["A"] = calibration.law.window();
        j["c_A"] = calibration.law.constant();
    }
    j["n"] = calibration.n;
    j["tau"] = std::isfinite(calibration.tau) ? nlohmann::json(calibration.tau) : nlohmann::json(nullptr);
    if (calibration.p_value) j["p_value"] = *calibration.p_value;
    if (calibration.critical_value) j["critical_value"] = *calibration.critical_value;
    j["warning_flags"] = calibration.warnings;
    return j;
}

} // namespace scanstat
