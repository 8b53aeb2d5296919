#include "scanstat/deviation.hpp"
#include "scanstat/error.hpp"
#include "scanstat/rng.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace scanstat;

namespace {

constexpr DeviationSign kPlus = DeviationSign::plus;
constexpr DeviationSign kMinus = DeviationSign::minus;

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no scanstat::Error thrown";
    return ErrorCode::Io;
}

double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Exact P(S_k / sqrt(k) >= x), with S_k^+ = k - G and S_k^- = G - k, G ~ Gamma(k, 1).
double exact_tail(DeviationSign sign, std::size_t k, double x) {
    const double kk = double(k), shift = x * std::sqrt(kk);
    if (sign == kPlus) return kk - shift <= 0 ? 0.0 : boost::math::gamma_p(kk, kk - shift);
    return boost::math::gamma_q(kk, kk + shift);
}

// Largest observed |f(s) - taylor(s)| / s^4 on (0, 0.1].
template <class F, class T>
double quartic_constant(F f, T taylor) {
    double worst = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double s = i * 1e-4;
        worst = std::max(worst, std::abs(f(s) - taylor(s)) / (s * s * s * s));
    }
    return worst;
}

} // namespace

TEST(Rate, Values) {
    EXPECT_EQ(rate(kPlus, 0.0), 0.0);
    EXPECT_EQ(rate(kMinus, 0.0), 0.0);
    EXPECT_NEAR(rate(kPlus, 0.5), 0.1931472, 5e-8);
    EXPECT_NEAR(rate(kPlus, 0.5), -0.5 - std::log(0.5), 1e-15);
    EXPECT_EQ(rate(kPlus, 1.0), kInfiniteRate);
    EXPECT_EQ(rate(kPlus, 7.0), kInfiniteRate);
    EXPECT_TRUE(std::isfinite(rate(kMinus, 7.0)));
    EXPECT_EQ(code_of([] { rate(kPlus, -0.1); }), ErrorCode::DomainError);
}

TEST(Cumulant, Values) {
    EXPECT_EQ(cumulant(kPlus, 0.0), 0.0);
    EXPECT_NEAR(cumulant(kMinus, 0.5), 0.1931472, 5e-8);
    EXPECT_EQ(cumulant(kMinus, 1.0), kInfiniteRate);
    EXPECT_EQ(code_of([] { cumulant(kMinus, -1.0); }), ErrorCode::DomainError);
}

TEST(Rate, LegendreDuality) {
    for (auto sign : {kPlus, kMinus}) {
        for (double s : {0.1, 0.3, 0.5}) {
            double best = -1e300;
            for (int i = 0; i <= 5'000'000; ++i) {
                const double t = i * 1e-5;
                const double c = cumulant(sign, t);
                if (std::isinf(c)) break;
                best = std::max(best, s * t - c);
            }
            EXPECT_NEAR(rate(sign, s), best, 1e-6) << int(sign) << " s=" << s;
        }
    }
}

TEST(Rate, TaylorExpansions) {
    const double c1 = quartic_constant([](double s) { return rate(kPlus, s); },
                                       [](double s) { return s * s / 2 + s * s * s / 3; });
    const double c2 = quartic_constant([](double s) { return rate(kMinus, s); },
                                       [](double s) { return s * s / 2 - s * s * s / 3; });
    const double c3 = quartic_constant([](double s) { return rate(kPlus, g_plus(s)); },
                                       [](double s) { return s * s / 2 - s * s * s / 6; });
    const double c4 = quartic_constant([](double s) { return rate(kMinus, g_minus(s)); },
                                       [](double s) { return s * s / 2 + s * s * s / 6; });
    for (double c : {c1, c2, c3, c4}) EXPECT_LE(c, 1.0);
    // The composed expansions are much tighter than the plain ones.
    EXPECT_LT(c3, 0.01);
    EXPECT_LT(c4, 0.01);
}

TEST(PhiMap, Values) {
    EXPECT_EQ(phi_map(0.0), 0.0);
    EXPECT_DOUBLE_EQ(phi_map(0.75), 1.5);
    EXPECT_EQ(code_of([] { phi_map(1.0); }), ErrorCode::DomainError);
    double prev = phi_map(-10.0);
    for (int i = 1; i < 1000; ++i) {
        const double x = -10.0 + i * (10.999 / 1000.0);
        const double v = phi_map(x);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(GTransforms, RoundTripsAndIdentity) {
    EXPECT_EQ(g_plus(0.0), 0.0);
    for (double x : {-5.0, -1.0, 0.5, 3.0, 10.0}) EXPECT_NEAR(phi_map(g_plus(x)), x, 1e-12) << x;
    for (double x : {-0.9, 0.0, 0.3, 0.99}) EXPECT_NEAR(g_plus(phi_map(x)), x, 1e-12) << x;
    for (double a = 0.0; a <= 20.0; a += 0.125) {
        EXPECT_NEAR(g_minus(a) - g_plus(a), a * a, 1e-12 * std::max(1.0, a * a)) << a;
        EXPECT_LT(g_plus(a), 1.0);
    }
    EXPECT_EQ(code_of([] { g_minus(-0.5); }), ErrorCode::DomainError);
}

TEST(Chernoff, Values) {
    EXPECT_NEAR(chernoff_tail_bound(kPlus, 1, 1e-9), 1.0, 1e-12);
    EXPECT_EQ(chernoff_tail_bound(kPlus, 4, 2.0), 0.0);
    EXPECT_EQ(chernoff_tail_bound(kPlus, 100, 15.0), 0.0);
    EXPECT_DOUBLE_EQ(chernoff_tail_bound(kPlus, 100, 2.0), std::exp(-100 * rate(kPlus, 0.2)));
    EXPECT_EQ(code_of([] { chernoff_tail_bound(kPlus, 0, 1.0); }), ErrorCode::DomainError);
    EXPECT_EQ(code_of([] { chernoff_tail_bound(kPlus, 3, 0.0); }), ErrorCode::DomainError);
}

TEST(Chernoff, DominatesExactTails) {
    for (auto sign : {kPlus, kMinus}) {
        for (std::size_t k : {1u, 2u, 10u, 100u, 1000u}) {
            for (double x = 0.25; x <= 4.0; x += 0.25) {
                EXPECT_LE(exact_tail(sign, k, x), chernoff_tail_bound(sign, k, x)) << k << " " << x;
            }
        }
    }
}

// The library sampler, summing k increments directly.
TEST(Chernoff, DominatesSampledTail) {
    const std::size_t k = 100, reps = 1'000'000;
    const double x = 2.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < reps; ++r) hits += sample_partial_sum(kPlus, k, 77, r) / std::sqrt(double(k)) >= x;
    const double p = double(hits) / reps;
    EXPECT_LT(p, chernoff_tail_bound(kPlus, k, x));
    EXPECT_NEAR(p, exact_tail(kPlus, k, x), 4 * std::sqrt(p * (1 - p) / reps));
}

TEST(Increment, MeanZeroVarianceOne) {
    const std::size_t m = 400000;
    double s1 = 0, s2 = 0, top = -1e300;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = sample_increment(kPlus, 3, 0, i);
        s1 += x;
        s2 += x * x;
        top = std::max(top, x);
        EXPECT_EQ(sample_increment(kMinus, 3, 0, i), -x);
    }
    EXPECT_NEAR(s1 / m, 0.0, 4 / std::sqrt(double(m)));
    EXPECT_NEAR(s2 / m, 1.0, 4 * std::sqrt(8.0 / m));
    EXPECT_LE(top, 1.0);
}

TEST(ModerateDeviation, NormalLimits) {
    // With x fixed the approximation tends to the leading Mills term phi(x)/x;
    // it approaches the normal tail itself only as x grows.
    const double x = 3.0;
    const double mills = std::exp(-x * x / 2) / (std::sqrt(2 * std::numbers::pi) * x);
    for (auto sign : {kPlus, kMinus}) {
        EXPECT_NEAR(moderate_dev_approx(sign, 1'000'000, x).value / mills, 1.0, 0.05);
        const double big = moderate_dev_approx(sign, 10'000'000'000ULL, 10.0).value;
        EXPECT_NEAR(big / normal_tail(10.0), 1.0, 0.05);
    }
}

TEST(ModerateDeviation, MatchesSimulation) {
    const std::size_t k = 10000, reps = 10'000'000;
    const double x = 4.0;
    // S_k^- = G - k with G ~ Gamma(k, 1); sample G directly.
    CounterStream urbg(2718, 0);
    std::gamma_distribution<double> gamma(double(k), 1.0);
    const double cut = k + x * std::sqrt(double(k));
    std::size_t hits = 0;
    for (std::size_t r = 0; r < reps; ++r) hits += gamma(urbg) >= cut;
    const double p = double(hits) / reps;
    const auto approx = moderate_dev_approx(kMinus, k, x);
    EXPECT_TRUE(approx.in_range);
    EXPECT_GE(approx.value / p, 0.7);
    EXPECT_LE(approx.value / p, 1.4);
    EXPECT_NEAR(approx.value / exact_tail(kMinus, k, x), 1.0, 0.1);
}

TEST(ModerateDeviation, RelationToChernoff) {
    for (auto sign : {kPlus, kMinus}) {
        for (double x : {0.5, 2.0, 5.0}) {
            const auto m = moderate_dev_approx(sign, 400, x);
            EXPECT_NEAR(m.value, chernoff_tail_bound(sign, 400, x) / (std::sqrt(2 * std::numbers::pi) * x),
                        1e-15);
            EXPECT_EQ(m.in_range, x >= 2.0 && x <= 5.0);
        }
    }
    EXPECT_EQ(code_of([] { moderate_dev_approx(kPlus, 10, 0.0); }), ErrorCode::DomainError);
}
