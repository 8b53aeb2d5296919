// Acceptance suite: one line per criterion, nonzero exit on any hard failure.
// Criterion 5 is soft and only warns.

#include "scanstat/asymptotics.hpp"
#include "scanstat/deviation.hpp"
#include "scanstat/montecarlo.hpp"
#include "scanstat/scan.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace scanstat;

namespace {

enum class Verdict { pass, fail, warn };

struct Result {
    Verdict verdict;
    std::string detail;
};

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

ExperimentConfig config(std::size_t n, std::size_t reps, std::uint64_t seed, Statistic st) {
    ExperimentConfig c;
    c.n = n;
    c.replicates = reps;
    c.seed = seed;
    c.statistic = st;
    c.parallelism = 1;
    return c;
}

// Experiments run by criteria 1 to 5, replayed under other worker counts by criterion 9.
std::vector<std::pair<ExperimentConfig, std::string>> g_digests;
std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t, CoincidenceRates>> g_coincidences;

EmpiricalLaw run(const ExperimentConfig& c) {
    auto emp = run_experiment(c);
    g_digests.emplace_back(c, digest(emp));
    return emp;
}

Result exact_spacing_law() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string worst;
    double worst_z = 0.0;
    for (std::size_t n : {5u, 50u, 1000u}) {
        const auto emp = run(config(n, 100000, 101, ClassicalStatistic::min_spacing));
        const double nn = double(n);
        for (double t : {0.2 / (nn * nn), 1.0 / (nn * nn), 0.5 / nn}) {
            t = std::clamp(t, 0.0, 1.0 / nn);
            const double p = exact_min_spacing_sf(n, t);
            const double se = std::sqrt(p * (1 - p) / 100000.0);
            const double diff = std::abs(emp.survival(t) - p);
            const double z = se > 0 ? diff / se : (diff > 0 ? INFINITY : 0.0);
            if (diff > 3 * se) ok = false;
            if (z >= worst_z) {
                worst_z = z;
                worst = "n=" + std::to_string(n) + " t=" + fmt(t) + " emp=" + fmt(emp.survival(t), 6) +
                        " exact=" + fmt(p, 6);
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60) ok = false;
    return {ok ? Verdict::pass : Verdict::fail, "seed=101 reps=100000, worst |z|=" + fmt(worst_z, 3) + " (" + worst +
                                                    "), runtime " + fmt(secs, 3) + "s"};
}

std::string pointwise(const GofReport& g) {
    std::string s;
    for (const auto& pe : g.pointwise) {
        s += " tau=" + fmt(pe.tau) + ":" + fmt(pe.empirical, 4) + "/" + fmt(pe.limit, 4);
    }
    return s;
}

Result full_range_law() {
    const auto emp = run(config(10000, 2000, 202, ScanSpec{Variant::standardized, Side::plus}));
    const auto g = compare_to_limit(emp, LimitLaw::standardized_full(), {0.5, 1.0, 2.0});
    double worst = 0;
    for (const auto& pe : g.pointwise) worst = std::max(worst, pe.abs_error);
    return {worst <= 0.05 ? Verdict::pass : Verdict::fail,
            "n=10000 reps=2000 seed=202, max error " + fmt(worst, 3) + " (tol 0.05);" + pointwise(g)};
}

// Scored against exp(-e^{1 - tau}) as stated. The error against
// exp(-e^{-1 - tau}), the limit of the maximal-spacing term that dominates the
// minus scan, is printed alongside as a diagnostic and does not affect the verdict.
Result minus_law() {
    const std::size_t n = 100000;
    const auto emp = run(config(n, 2000, 303, ScanSpec{Variant::studentized, Side::minus}));
    double worst = 0, worst_shifted = 0;
    std::string points;
    for (double tau : {0.0, 1.0, 2.0}) {
        const double e = emp.cdf(std::log(double(n)) + tau);
        const double stated = std::exp(-std::exp(1 - tau));
        const double shifted = std::exp(-std::exp(-1 - tau));
        worst = std::max(worst, std::abs(e - stated));
        worst_shifted = std::max(worst_shifted, std::abs(e - shifted));
        points += " tau=" + fmt(tau) + ":" + fmt(e, 4) + "/" + fmt(stated, 4);
    }
    return {worst <= 0.07 ? Verdict::pass : Verdict::fail,
            "n=100000 reps=2000 seed=303, max error " + fmt(worst, 3) + " (tol 0.07);" + points +
                "; against exp(-e^{-1-tau}) max error " + fmt(worst_shifted, 3)};
}

Result coincidences() {
    const auto r = coincidence_rates(10000, 500, 404, 1);
    g_coincidences.emplace_back(10000, 500, 404, r);
    const bool ok = r.rate_minus >= 0.95 && r.rate_tilde_plus >= 0.95;
    return {ok ? Verdict::pass : Verdict::fail, "n=10000 reps=500 seed=404, studentized on minus side " +
                                                    fmt(r.rate_minus, 4) + ", standardized on plus side " +
                                                    fmt(r.rate_tilde_plus, 4) + " (need >= 0.95)"};
}

Result plus_median() {
    const std::size_t n = 100000;
    const auto emp = run(config(n, 400, 505, ScanSpec{Variant::studentized, Side::plus}));
    const double tmed = -std::log(std::log(2.0) / gumbel_constant());
    const double target = u_n_tau(n, tmed);
    const double median = emp.quantile(0.5);
    const double rel = std::abs(median - target) / target;
    return {rel <= 0.10 ? Verdict::pass : Verdict::warn, "n=100000 reps=400 seed=505, median " + fmt(median, 5) +
                                                             " vs u_n(tau_med)=" + fmt(target, 5) + ", relative " +
                                                             fmt(rel, 3) + " (soft tol 0.10)"};
}

Result oracle_equivalence() {
    std::size_t checked = 0, mismatched = 0;
    std::string first;
    for (std::size_t n : {5u, 20u, 100u, 200u}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto s = sample_uniform_order_stats(n, seed);
            for (Variant v : {Variant::studentized, Variant::standardized}) {
                for (Side side : {Side::plus, Side::minus, Side::two_sided}) {
                    const ScanSpec spec{v, side};
                    const auto a = scan(s, spec);
                    const auto b = scan_fast(s, spec);
                    ++checked;
                    if (a.value != b.value || a.i != b.i || a.j != b.j || a.side != b.side) {
                        if (mismatched++ == 0) {
                            first = " first: n=" + std::to_string(n) + " seed=" + std::to_string(seed);
                        }
                    }
                }
            }
        }
    }
    return {mismatched == 0 ? Verdict::pass : Verdict::fail,
            std::to_string(checked) + " scans, " + std::to_string(mismatched) + " mismatches" + first};
}

double c_A_closed_form(double A) {
    const double kappa = std::numbers::sqrt2 / 3.0, r = std::sqrt(1.0 / A);
    return ((r / kappa - 1 / (kappa * kappa)) * std::exp(kappa * r) + 1 / (kappa * kappa)) / std::sqrt(std::numbers::pi);
}

Result analytic_identities() {
    std::vector<std::string> failures;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    };
    check(std::abs(gumbel_constant() - 0.50150185204245003) <= 1e-12, "c");
    double ca_err = 0;
    for (double A : {0.5, 1.0, 2.0, 10.0}) ca_err = std::max(ca_err, std::abs(c_A(A) - c_A_closed_form(A)));
    check(ca_err <= 1e-8, "c_A");
    double rt = 0;
    for (double x = -10; x <= 10; x += 0.01) rt = std::max(rt, std::abs(phi_map(g_plus(x)) - x));
    check(rt <= 1e-12, "phi/g+ round trip");
    const std::function<double(double)> exact[4] = {
        [](double s) { return rate(DeviationSign::plus, s); },
        [](double s) { return rate(DeviationSign::minus, s); },
        [](double s) { return rate(DeviationSign::plus, g_plus(s)); },
        [](double s) { return rate(DeviationSign::minus, g_minus(s)); }};
    const double cubic[4] = {1.0 / 3, -1.0 / 3, -1.0 / 6, 1.0 / 6};
    double taylor = 0;
    for (int f = 0; f < 4; ++f) {
        for (int i = 1; i <= 1000; ++i) {
            const double s = i * 1e-4;
            taylor = std::max(taylor, std::abs(exact[f](s) - s * s / 2 - cubic[f] * s * s * s) / std::pow(s, 4));
        }
    }
    check(taylor <= 1.0, "Taylor");
    bool monotone = true;
    double prev = 0;
    for (double y = 0.005; y <= 4; y += 0.005) {
        const double k = kolmogorov_cdf(y);
        monotone = monotone && k >= prev && k <= 1;
        prev = k;
    }
    check(monotone, "K monotone");
    long double ks = 1.0L;
    for (int k = 1; k < 1000; ++k) ks += (k % 2 ? -2.0L : 2.0L) * std::exp(-2.0L * k * k * 0.25L);
    check(std::abs(kolmogorov_cdf(0.5) - double(ks)) <= 1e-11, "K(0.5)");
    std::string detail = "c_A err " + fmt(ca_err, 2) + ", round trip " + fmt(rt, 2) + ", quartic constant " +
                         fmt(taylor, 3) + ", K(0.5)=" + fmt(kolmogorov_cdf(0.5), 8);
    for (const auto& f : failures) detail += "; failed " + f;
    return {failures.empty() ? Verdict::pass : Verdict::fail, detail};
}

Result chernoff_dominance() {
    const std::size_t reps = 1000000;
    const double xs[3] = {1, 2, 3};
    double worst_margin = -INFINITY;
    std::string worst;
    bool ok = true;
    for (std::size_t k : {10u, 100u, 1000u}) {
        std::size_t plus_hits[3] = {}, minus_hits[3] = {};
        const double root = std::sqrt(double(k));
        for (std::size_t r = 0; r < reps; ++r) {
            const double z = sample_partial_sum(DeviationSign::plus, k, 808 + k, r) / root;
            for (int a = 0; a < 3; ++a) {
                plus_hits[a] += z >= xs[a];
                minus_hits[a] += -z >= xs[a];
            }
        }
        for (int a = 0; a < 3; ++a) {
            for (auto [sign, hits] : {std::pair{DeviationSign::plus, plus_hits[a]}, {DeviationSign::minus, minus_hits[a]}}) {
                const double p = double(hits) / reps;
                const double se = std::sqrt(p * (1 - p) / reps);
                const double bound = chernoff_tail_bound(sign, k, xs[a]);
                const double margin = p - (bound + 3 * se);
                if (margin > 0) ok = false;
                if (margin > worst_margin) {
                    worst_margin = margin;
                    worst = std::string(sign == DeviationSign::plus ? "+" : "-") + " k=" + std::to_string(k) +
                            " x=" + fmt(xs[a]) + " emp=" + fmt(p, 4) + " bound=" + fmt(bound, 4);
                }
            }
        }
    }
    return {ok ? Verdict::pass : Verdict::fail, "reps=1000000 per k, tightest cell " + worst};
}

Result determinism() {
    std::size_t compared = 0, differing = 0;
    for (const auto& [cfg, d] : g_digests) {
        for (unsigned p : {4u, 8u}) {
            auto c = cfg;
            c.parallelism = p;
            ++compared;
            differing += digest(run_experiment(c)) != d;
        }
    }
    for (const auto& [n, reps, seed, r] : g_coincidences) {
        for (unsigned p : {4u, 8u}) {
            const auto again = coincidence_rates(n, reps, seed, p);
            ++compared;
            differing += again.rate_minus != r.rate_minus || again.rate_tilde_plus != r.rate_tilde_plus;
        }
    }
    return {differing == 0 && compared > 0 ? Verdict::pass : Verdict::fail,
            std::to_string(g_digests.size() + g_coincidences.size()) + " experiments replayed at parallelism 4 and 8 against 1, " +
                std::to_string(differing) + " of " + std::to_string(compared) + " differ"};
}

} // namespace

int main() {
    const std::pair<const char*, Result (*)()> criteria[] = {
        {"exact minimum-spacing law", exact_spacing_law},
        {"full-range standardized law", full_range_law},
        {"studentized minus law", minus_law},
        {"two-sided side coincidences", coincidences},
        {"studentized plus median (soft)", plus_median},
        {"fast scan equals brute force", oracle_equivalence},
        {"analytic identities", analytic_identities},
        {"Chernoff dominance", chernoff_dominance},
        {"determinism across parallelism", determinism},
    };
    int hard_failures = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {index == 5 ? Verdict::warn : Verdict::fail, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char* tag = r.verdict == Verdict::pass ? "PASS" : r.verdict == Verdict::warn ? "WARN" : "FAIL";
        std::printf("criterion %d %s: %s. %s [%.1fs]\n", index, tag, name, r.detail.c_str(), secs);
        std::fflush(stdout);
        hard_failures += r.verdict == Verdict::fail;
    }
    std::printf("%s: %d hard failure(s)\n", hard_failures == 0 ? "ACCEPTED" : "REJECTED", hard_failures);
    return hard_failures == 0 ? 0 : 1;
}
