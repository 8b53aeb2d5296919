#include "scanstat/montecarlo.hpp"

#include "scanstat/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace scanstat {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string_view classical_name(ClassicalStatistic s) {
    switch (s) {
    case ClassicalStatistic::min_spacing: return "min_spacing";
    case ClassicalStatistic::ks: return "ks";
    case ClassicalStatistic::eicker_standardized: return "eicker_standardized";
    case ClassicalStatistic::eicker_studentized: return "eicker_studentized";
    }
    return "unknown";
}

nlohmann::json statistic_to_json(const Statistic& statistic) {
    return std::visit(overloaded{
                          [](const ScanSpec& spec) {
                              nlohmann::json j;
                              j["type"] = "scan";
                              j["variant"] = to_string(spec.variant);
                              j["side"] = to_string(spec.side);
                              j["k"] = spec.k;
                              j["l"] = spec.l == kFullLength ? nlohmann::json(nullptr) : nlohmann::json(spec.l);
                              return j;
                          },
                          [](ClassicalStatistic s) {
                              return nlohmann::json{{"type", "classical"}, {"name", classical_name(s)}};
                          },
                      },
                      statistic);
}

} // namespace

std::string describe(const Statistic& statistic) { return statistic_to_json(statistic).dump(); }

double evaluate(const Statistic& statistic, const SortedSample& sample, const ScanOptions& options) {
    return std::visit(overloaded{
                          [&](const ScanSpec& spec) { return scan_fast(sample, spec, options).value; },
                          [&](ClassicalStatistic s) {
                              switch (s) {
                              case ClassicalStatistic::min_spacing: return min_spacing(sample);
                              case ClassicalStatistic::ks: return ks_statistic(sample);
                              case ClassicalStatistic::eicker_standardized: {
                                  const auto e = eicker_statistics(sample);
                                  if (!e.standardized) {
                                      throw Error(ErrorCode::AllDegenerate, "standardized Eicker form undefined");
                                  }
                                  return e.standardized->value;
                              }
                              case ClassicalStatistic::eicker_studentized: {
                                  const auto e = eicker_statistics(sample);
                                  if (!e.studentized) {
                                      throw Error(ErrorCode::AllDegenerate, "studentized Eicker form undefined");
                                  }
                                  return e.studentized->value;
                              }
                              }
                              return 0.0;
                          },
                      },
                      statistic);
}

EmpiricalLaw::EmpiricalLaw(std::vector<double> values, std::size_t n, Statistic statistic, std::uint64_t seed)
    : values_(std::move(values)), n_(n), statistic_(std::move(statistic)), seed_(seed) {
    std::sort(values_.begin(), values_.end());
}

double EmpiricalLaw::cdf(double t) const {
    if (values_.empty()) return 0.0;
    const auto it = std::upper_bound(values_.begin(), values_.end(), t);
    return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalLaw::survival(double t) const {
    if (values_.empty()) return 0.0;
    const auto it = std::lower_bound(values_.begin(), values_.end(), t);
    return static_cast<double>(values_.end() - it) / static_cast<double>(values_.size());
}

double EmpiricalLaw::quantile(double p) const {
    if (values_.empty() || !(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::DomainError, "quantile needs a nonempty law and p in [0, 1]");
    }
    const double rank = std::ceil(p * static_cast<double>(values_.size()));
    const auto idx = static_cast<std::size_t>(std::max(1.0, rank)) - 1;
    return values_[std::min(idx, values_.size() - 1)];
}

void parallel_for(std::size_t count, unsigned parallelism, const std::function<void(std::size_t)>& fn) {
    unsigned workers = parallelism == 0 ? std::max(1u, std::thread::hardware_concurrency()) : parallelism;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::size_t failed_index = count;
    std::exception_ptr failure;

    auto work = [&] {
        for (std::size_t r = next.fetch_add(1); r < count; r = next.fetch_add(1)) {
            try {
                fn(r);
            } catch (...) {
                // Keep the lowest failing index so the reported error does not depend on the schedule.
                std::lock_guard lock(failure_mutex);
                if (r < failed_index) {
                    failed_index = r;
                    failure = std::current_exception();
                }
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

EmpiricalLaw run_experiment(const ExperimentConfig& config) {
    if (config.n == 0 || config.replicates == 0) {
        throw Error(ErrorCode::DomainError, "experiment needs n >= 1 and replicates >= 1");
    }
    std::vector<double> results(config.replicates);
    parallel_for(config.replicates, config.parallelism, [&](std::size_t r) {
        try {
            const SortedSample sample = sample_uniform_order_stats(config.n, config.seed, r);
            results[r] = evaluate(config.statistic, sample, config.scan_options);
        } catch (const Error& e) {
            throw Error(ErrorCode::ReplicateFailed,
                        "seed=" + std::to_string(config.seed) + " replicate=" + std::to_string(r) + ": " + e.what());
        }
    });
    return EmpiricalLaw(std::move(results), config.n, config.statistic, config.seed);
}

bool law_matches(const Statistic& statistic, const LimitLaw& law) {
    const auto* spec = std::get_if<ScanSpec>(&statistic);
    if (spec == nullptr) return false;
    switch (law.kind()) {
    case LawKind::studentized_plus: return spec->variant == Variant::studentized && spec->side == Side::plus;
    case LawKind::studentized_minus: return spec->variant == Variant::studentized && spec->side == Side::minus;
    case LawKind::standardized_full:
    case LawKind::standardized_windowed:
        return spec->variant == Variant::standardized && spec->side == Side::plus;
    }
    return false;
}

GofReport compare_to_limit(const EmpiricalLaw& emp, const LimitLaw& law) {
    if (law.kind() == LawKind::standardized_full) {
        return compare_to_limit(emp, law, {0.5, 1.0, 2.0});
    }
    return compare_to_limit(emp, law, {-1.0, 0.0, 1.0, 2.0});
}

GofReport compare_to_limit(const EmpiricalLaw& emp, const LimitLaw& law, const std::vector<double>& taus) {
    if (!law_matches(emp.statistic(), law)) {
        throw Error(ErrorCode::IncompatibleLaw,
                    "law " + std::string(law.name()) + " does not describe " + describe(emp.statistic()));
    }
    if (emp.size() == 0) {
        throw Error(ErrorCode::DomainError, "empty empirical law");
    }
    GofReport report;
    const auto& v = emp.values();
    const double count = static_cast<double>(v.size());
    std::size_t a = 0;
    while (a < v.size()) {
        std::size_t b = a;
        while (b + 1 < v.size() && v[b + 1] == v[a]) ++b;
        const double g = statistic_cdf(law, emp.n(), v[a]);
        const double below = static_cast<double>(a) / count;
        const double through = static_cast<double>(b + 1) / count;
        report.ks_distance = std::max({report.ks_distance, std::abs(through - g), std::abs(below - g)});
        a = b + 1;
    }
    report.ks_distance = std::min(report.ks_distance, 1.0);
    for (double tau : taus) {
        const double t = threshold(law, emp.n(), tau);
        const double e = emp.cdf(t);
        const double l = limit_cdf(law, tau);
        report.pointwise.push_back({tau, t, e, l, std::abs(e - l)});
    }
    return report;
}

CoincidenceRates coincidence_rates(std::size_t n, std::size_t replicates, std::uint64_t seed, unsigned parallelism) {
    if (replicates == 0 || n < 2) {
        throw Error(ErrorCode::DomainError, "coincidence rates need n >= 2 and replicates >= 1");
    }
    std::vector<unsigned char> minus_hits(replicates, 0);
    std::vector<unsigned char> plus_hits(replicates, 0);
    const ScanSpec studentized{Variant::studentized, Side::two_sided, 1, kFullLength};
    const ScanSpec standardized{Variant::standardized, Side::two_sided, 1, kFullLength};
    parallel_for(replicates, parallelism, [&](std::size_t r) {
        const SortedSample sample = sample_uniform_order_stats(n, seed, r);
        minus_hits[r] = scan_fast(sample, studentized).side == Side::minus ? 1 : 0;
        plus_hits[r] = scan_fast(sample, standardized).side == Side::plus ? 1 : 0;
    });
    const double count = static_cast<double>(replicates);
    const auto total = [](const std::vector<unsigned char>& hits) {
        return static_cast<double>(std::count(hits.begin(), hits.end(), 1));
    };
    return {total(minus_hits) / count, total(plus_hits) / count};
}

std::string digest(const EmpiricalLaw& emp) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : emp.values()) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json j;
    j["n"] = config.n;
    j["replicates"] = config.replicates;
    j["seed"] = config.seed;
    j["statistic"] = statistic_to_json(config.statistic);
    if (config.law) {
        j["law"] = {{"name", config.law->name()}};
        if (config.law->kind() == LawKind::standardized_windowed) {
            j["law"]["A"] = config.law->window();
        }
    } else {
        j["law"] = nullptr;
    }
    j["window_mode"] = config.scan_options.mode == WindowMode::exact ? "exact" : "asymptotic";
    if (config.scan_options.mode == WindowMode::asymptotic) {
        j["window_constant"] = config.scan_options.window_constant;
    }
    return j;
}

nlohmann::json experiment_record(const ExperimentConfig& config, const EmpiricalLaw& emp,
                                 const std::optional<GofReport>& gof) {
    const auto& v = emp.values();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;

    nlohmann::json record;
    record["config"] = config_to_json(config);
    record["summary"] = {{"replicates", v.size()}, {"mean", mean},          {"sd", sd},
                         {"min", v.front()},       {"median", emp.quantile(0.5)}, {"max", v.back()}};
    nlohmann::json quantiles = nlohmann::json::object();
    for (double p : {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99}) {
        std::ostringstream key;
        key << p;
        quantiles[key.str()] = emp.quantile(p);
    }
    record["quantiles"] = quantiles;
    record["digest"] = digest(emp);
    if (gof) {
        nlohmann::json points = nlohmann::json::array();
        for (const auto& pe : gof->pointwise) {
            points.push_back({{"tau", pe.tau},
                              {"threshold", pe.threshold},
                              {"empirical", pe.empirical},
                              {"limit", pe.limit},
                              {"abs_error", pe.abs_error}});
        }
        record["gof"] = {{"ks_distance", gof->ks_distance}, {"pointwise", points}};
    }
    return record;
}

AppendStatus append_record(const std::filesystem::path& path, const nlohmann::json& record) {
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        if (!in) {
            throw Error(ErrorCode::Io, "cannot read " + path.string());
        }
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            nlohmann::json existing;
            try {
                existing = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception&) {
                throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(lineno) + " is not JSON");
            }
            if (existing.contains("config") && existing["config"] == record.at("config")) {
                if (existing.value("digest", "") != record.at("digest").get<std::string>()) {
                    throw Error(ErrorCode::DigestMismatch, "stored result for this config has digest " +
                                                               existing.value("digest", "") + ", rerun gave " +
                                                               record.at("digest").get<std::string>());
                }
                return AppendStatus::verified;
            }
        }
    }
    std::ofstream out(path, std::ios::app);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot append to " + path.string());
    }
    out << record.dump() << '\n';
    return AppendStatus::appended;
}

void write_raw_csv(const std::filesystem::path& path, const EmpiricalLaw& emp) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out << "value\n";
    out << std::setprecision(17);
    for (double v : emp.values()) {
        out << v << '\n';
    }
}

} // namespace scanstat
