// scanstat command line: scan, detect, calibrate, simulate.
//
// Output is one JSON document (or JSON-lines record) on stdout. Failures
// print {"error": <code>, "message": ...} and exit 1 (io), 2 (parse) or
// 3 (domain).

#include "scanstat/asymptotics.hpp"
#include "scanstat/detect.hpp"
#include "scanstat/error.hpp"
#include "scanstat/io.hpp"
#include "scanstat/montecarlo.hpp"
#include "scanstat/scan.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;
using namespace scanstat;

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::Io: return 1;
    case ErrorCode::Parse:
    case ErrorCode::EmptyInput: return 2;
    default: return 3;
    }
}

void print_error(std::string_view code, std::string_view message) {
    std::cout << json{{"error", code}, {"message", message}}.dump() << std::endl;
}

struct Globals {
    std::uint64_t seed = 1;
    std::string format = "json";
    bool quiet = false;
};

void note(const Globals& g, const std::string& message) {
    if (!g.quiet) std::cerr << "scanstat: " << message << '\n';
}

// Flattens nested objects into dotted keys; arrays become ';'-joined cells.
void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
        }
        return;
    }
    std::string cell;
    if (j.is_array()) {
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k > 0) cell += ';';
            cell += j[k].is_string() ? j[k].get<std::string>() : j[k].dump();
        }
    } else {
        cell = j.is_string() ? j.get<std::string>() : j.dump();
    }
    out.emplace_back(prefix, cell);
}

void emit(const Globals& g, const json& doc) {
    if (g.format == "csv") {
        std::vector<std::pair<std::string, std::string>> cells;
        flatten(doc, "", cells);
        std::string header;
        std::string row;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            header += (k ? "," : "") + cells[k].first;
            row += (k ? "," : "") + cells[k].second;
        }
        std::cout << header << '\n' << row << std::endl;
        return;
    }
    std::cout << doc.dump() << std::endl;
}

Variant parse_variant(const std::string& s) {
    if (s == "studentized") return Variant::studentized;
    if (s == "standardized") return Variant::standardized;
    throw Error(ErrorCode::Parse, "unknown variant '" + s + "'");
}

Side parse_side(const std::string& s) {
    if (s == "plus") return Side::plus;
    if (s == "minus") return Side::minus;
    if (s == "two_sided" || s == "both") return Side::two_sided;
    throw Error(ErrorCode::Parse, "unknown side '" + s + "'");
}

struct WindowFlags {
    std::size_t k = 1;
    std::optional<std::size_t> l;
    bool asymptotic = false;
    double window_constant = 8.0;
    bool no_prune = false;
    bool lengths = true;

    void add(CLI::App* cmd, bool with_lengths = true) {
        lengths = with_lengths;
        if (lengths) {
            cmd->add_option("--k", k, "Shortest scanned length j - i")->check(CLI::PositiveNumber);
            cmd->add_option("--l", l, "Longest scanned length j - i (default: all)");
        }
        cmd->add_flag("--asymptotic-window", asymptotic,
                      "Studentized plus only: limit lengths to C (log n)^3; result is marked not exact");
        cmd->add_option("--window-constant", window_constant, "Constant C of the asymptotic window");
        cmd->add_flag("--no-prune", no_prune, "Visit every length with a full pass");
    }

    ScanOptions options() const {
        ScanOptions o;
        o.mode = asymptotic ? WindowMode::asymptotic : WindowMode::exact;
        o.window_constant = window_constant;
        o.prune = !no_prune;
        return o;
    }

    json echo() const {
        json j{{"asymptotic_window", asymptotic}, {"no_prune", no_prune}};
        if (lengths) {
            j["k"] = k;
            j["l"] = l ? json(*l) : json(nullptr);
        }
        if (asymptotic) j["window_constant"] = window_constant;
        return j;
    }
};

struct ScanCommand {
    std::string input;
    std::string variant = "studentized";
    std::string side = "plus";
    std::string null_spec = "uniform";
    WindowFlags window;

    json run(const Globals&) const {
        const auto data = read_values(input);
        const SortedSample sample = null_spec == "uniform" ? sort_sample(data)
                                                           : cdf_transform(data, parse_null_spec(null_spec));
        const ScanSpec spec{parse_variant(variant), parse_side(side), window.k, window.l.value_or(kFullLength)};
        json out = to_json(scan_fast(sample, spec, window.options()));
        json config{{"command", "scan"}, {"input", input}, {"variant", variant}, {"side", side}, {"null", null_spec}};
        config.update(window.echo());
        out["config"] = config;
        return out;
    }
};

struct DetectCommand {
    std::string input;
    std::string null_spec;
    WindowFlags window;

    json run(const Globals&) const {
        const auto data = read_values(input);
        json out = to_json(detect(data, parse_null_spec(null_spec), window.options()));
        json config{{"command", "detect"}, {"input", input}, {"null", null_spec}};
        config.update(window.echo());
        out["config"] = config;
        return out;
    }
};

struct CalibrateCommand {
    std::string law = "splus";
    std::size_t n = 0;
    std::optional<double> alpha;
    std::optional<double> observed;
    std::optional<double> A;

    json run(const Globals&) const {
        const LimitLaw limit = parse_law(law, A);
        const Calibration cal = alpha ? calibrate_alpha(limit, n, *alpha) : calibrate_observed(limit, n, *observed);
        json out = to_json(cal);
        json config{{"command", "calibrate"}, {"law", law}, {"n", n}};
        if (alpha) config["alpha"] = *alpha;
        if (observed) config["observed"] = *observed;
        if (A) config["A"] = *A;
        out["config"] = config;
        return out;
    }
};

struct SimulateCommand {
    std::size_t n = 1000;
    std::size_t replicates = 1000;
    std::string statistic = "studentized";
    std::string side = "plus";
    std::optional<std::string> law;
    std::optional<double> A;
    unsigned parallelism = 0;
    std::string out_path;
    std::string raw_csv;
    WindowFlags window;

    Statistic parse_statistic() const {
        static const std::map<std::string, ClassicalStatistic> classical{
            {"min_spacing", ClassicalStatistic::min_spacing},
            {"ks", ClassicalStatistic::ks},
            {"eicker_standardized", ClassicalStatistic::eicker_standardized},
            {"eicker_studentized", ClassicalStatistic::eicker_studentized},
        };
        if (const auto it = classical.find(statistic); it != classical.end()) return it->second;
        return ScanSpec{parse_variant(statistic), parse_side(side), window.k, window.l.value_or(kFullLength)};
    }

    json run(const Globals& g) const {
        ExperimentConfig config;
        config.n = n;
        config.replicates = replicates;
        config.seed = g.seed;
        config.statistic = parse_statistic();
        config.parallelism = parallelism;
        config.scan_options = window.options();
        if (law) config.law = parse_law(*law, A);

        const EmpiricalLaw emp = run_experiment(config);
        std::optional<GofReport> gof;
        if (config.law) gof = compare_to_limit(emp, *config.law);
        json record = experiment_record(config, emp, gof);
        if (!out_path.empty()) {
            const AppendStatus status = append_record(out_path, record);
            note(g, status == AppendStatus::appended ? "appended record to " + out_path
                                                     : "record already stored in " + out_path + "; digest verified");
        }
        if (!raw_csv.empty()) write_raw_csv(raw_csv, emp);
        return record;
    }

    // Flat quantile table for --format csv.
    void emit_csv(const json& record) const {
        std::cout << "statistic,n,replicates,seed,probability,quantile\n";
        const std::string stat = statistic == "studentized" || statistic == "standardized"
                                     ? statistic + "_" + side
                                     : statistic;
        for (const auto& [p, q] : record["quantiles"].items()) {
            std::cout << stat << ',' << record["config"]["n"] << ',' << record["config"]["replicates"] << ','
                      << record["config"]["seed"] << ',' << p << ',' << q.dump() << '\n';
        }
        std::cout.flush();
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scan statistics of uniform order statistics: scan, detect, calibrate, simulate"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags override it");

    Globals globals;
    app.add_option("--seed", globals.seed, "Random seed (simulate)");
    app.add_option("--format", globals.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--quiet", globals.quiet, "Suppress notes on stderr");

    ScanCommand scan_cmd;
    auto* scan_app = app.add_subcommand("scan", "Scan a sample of values in [0, 1] (or data under --null)");
    scan_app->add_option("input", scan_cmd.input, "CSV or newline-separated values")->required();
    scan_app->add_option("--variant", scan_cmd.variant)->check(CLI::IsMember({"studentized", "standardized"}));
    scan_app->add_option("--side", scan_cmd.side)->check(CLI::IsMember({"plus", "minus", "two_sided", "both"}));
    scan_app->add_option("--null", scan_cmd.null_spec, "Null distribution applied before scanning");
    scan_cmd.window.add(scan_app);

    DetectCommand detect_cmd;
    auto* detect_app = app.add_subcommand("detect", "Cluster, gap and standardized detection with p-values");
    detect_app->add_option("input", detect_cmd.input, "CSV or newline-separated data")->required();
    detect_app->add_option("--null", detect_cmd.null_spec, "normal:mu,sigma | exponential:rate | uniform:a,b | quantiles:path")
        ->required();
    detect_cmd.window.add(detect_app, false);

    CalibrateCommand cal_cmd;
    auto* cal_app = app.add_subcommand("calibrate", "p-values and critical values from the limit laws");
    cal_app->add_option("--law", cal_cmd.law)->check(CLI::IsMember({"splus", "sminus", "sfull", "swindow"}));
    cal_app->add_option("--n", cal_cmd.n, "Sample size")->required();
    auto* alpha_opt = cal_app->add_option("--alpha", cal_cmd.alpha, "Level for a critical value");
    auto* obs_opt = cal_app->add_option("--observed", cal_cmd.observed, "Observed statistic for a p-value");
    alpha_opt->excludes(obs_opt);
    cal_app->add_option("--A", cal_cmd.A, "Window constant for swindow");
    cal_app->callback([&] {
        if (!cal_cmd.alpha && !cal_cmd.observed) throw CLI::ValidationError("calibrate needs --alpha or --observed");
    });

    SimulateCommand sim_cmd;
    auto* sim_app = app.add_subcommand("simulate", "Monte Carlo law of a statistic under the uniform null");
    sim_app->add_option("--n", sim_cmd.n, "Sample size")->check(CLI::PositiveNumber);
    sim_app->add_option("--replicates", sim_cmd.replicates)->check(CLI::PositiveNumber);
    sim_app->add_option("--statistic", sim_cmd.statistic)
        ->check(CLI::IsMember({"studentized", "standardized", "min_spacing", "ks", "eicker_standardized",
                               "eicker_studentized"}));
    sim_app->add_option("--side", sim_cmd.side)->check(CLI::IsMember({"plus", "minus", "two_sided", "both"}));
    sim_app->add_option("--law", sim_cmd.law, "Compare with a limit law")
        ->check(CLI::IsMember({"splus", "sminus", "sfull", "swindow"}));
    sim_app->add_option("--A", sim_cmd.A, "Window constant for swindow");
    sim_app->add_option("--parallelism", sim_cmd.parallelism, "Worker threads, 0 = auto");
    sim_app->add_option("--out", sim_cmd.out_path, "Append the record to this JSON-lines file");
    sim_app->add_option("--raw-csv", sim_cmd.raw_csv, "Write replicate values to this CSV");
    sim_cmd.window.add(sim_app);

    for (auto* sub : {scan_app, detect_app, cal_app, sim_app}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("Parse", e.what());
        return 2;
    }

    try {
        if (*scan_app) {
            emit(globals, scan_cmd.run(globals));
        } else if (*detect_app) {
            emit(globals, detect_cmd.run(globals));
        } else if (*cal_app) {
            emit(globals, cal_cmd.run(globals));
        } else if (*sim_app) {
            const json record = sim_cmd.run(globals);
            if (globals.format == "csv") {
                sim_cmd.emit_csv(record);
            } else {
                std::cout << record.dump() << std::endl;
            }
        }
    } catch (const Error& e) {
        print_error(to_string(e.code()), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        print_error("DomainError", e.what());
        return 3;
    }
    return 0;
}
