#include "scanstat/asymptotics.hpp"

#include "scanstat/error.hpp"
#include "scanstat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace scanstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

void require_tau_n(const LimitLaw& law, std::size_t n) {
    if (law.kind() == LawKind::standardized_full) {
        if (n == 0) throw Error(ErrorCode::DomainError, "n must be positive");
        return;
    }
    if (n <= 2) {
        throw Error(ErrorCode::DomainError, "tau normalization needs n >= 3");
    }
}

double gumbel_scale_survival(double scale, double tau) {
    // 1 - exp(-scale e^{-tau}) without cancellation in the upper tail.
    return -std::expm1(-scale * std::exp(-tau));
}

} // namespace

double gumbel_constant() noexcept { return 8.0 / (9.0 * std::sqrt(std::numbers::pi)); }

double c_A(double A) {
    if (!(A > 0.0) || std::isnan(A)) {
        throw Error(ErrorCode::DomainError, "c_A needs A > 0");
    }
    if (std::isinf(A)) return 0.0;
    const auto integrand = [](double b) { return std::exp(std::numbers::sqrt2 / 3.0 * std::sqrt(b)); };
    const double integral = adaptive_simpson(integrand, 0.0, 1.0 / A, 1e-10);
    return integral / (2.0 * std::sqrt(std::numbers::pi));
}

std::string_view LimitLaw::name() const noexcept {
    switch (kind_) {
    case LawKind::studentized_plus: return "splus";
    case LawKind::studentized_minus: return "sminus";
    case LawKind::standardized_full: return "sfull";
    case LawKind::standardized_windowed: return "swindow";
    }
    return "unknown";
}

LimitLaw parse_law(std::string_view name, std::optional<double> A) {
    if (name == "splus") return LimitLaw::studentized_plus();
    if (name == "sminus") return LimitLaw::studentized_minus();
    if (name == "sfull") return LimitLaw::standardized_full();
    if (name == "swindow") {
        if (!A) throw Error(ErrorCode::Parse, "law swindow needs the window constant A");
        return LimitLaw::standardized_windowed(*A);
    }
    throw Error(ErrorCode::Parse, "unknown law '" + std::string(name) + "'");
}

double u_n_tau(std::size_t n, double tau) {
    if (n <= 2) {
        throw Error(ErrorCode::DomainError, "u_n(tau) needs n >= 3");
    }
    const double logn = std::log(static_cast<double>(n));
    return (1.0 + (-3.0 * std::log(logn) + 2.0 * tau) / (4.0 * logn)) * std::sqrt(2.0 * logn);
}

double limit_cdf(const LimitLaw& law, double tau) {
    switch (law.kind()) {
    case LawKind::studentized_plus:
    case LawKind::standardized_windowed:
        return clamp_probability(std::exp(-law.constant() * std::exp(-tau)));
    case LawKind::studentized_minus:
        return clamp_probability(std::exp(-std::exp(1.0 - tau)));
    case LawKind::standardized_full:
        if (!(tau > 0.0)) {
            throw Error(ErrorCode::DomainError, "the full-range standardized law needs tau > 0");
        }
        return clamp_probability(std::exp(-tau));
    }
    return 0.0;
}

double threshold(const LimitLaw& law, std::size_t n, double tau) {
    require_tau_n(law, n);
    switch (law.kind()) {
    case LawKind::studentized_plus:
    case LawKind::standardized_windowed:
        return u_n_tau(n, tau);
    case LawKind::studentized_minus:
        return std::log(static_cast<double>(n)) + tau;
    case LawKind::standardized_full:
        if (!(tau > 0.0)) {
            throw Error(ErrorCode::DomainError, "the full-range standardized law needs tau > 0");
        }
        return std::sqrt(static_cast<double>(n) / tau);
    }
    return 0.0;
}

double tau_of(const LimitLaw& law, std::size_t n, double observed) {
    if (!std::isfinite(observed)) {
        throw Error(ErrorCode::DomainError, "observed statistic must be finite");
    }
    require_tau_n(law, n);
    const double logn = std::log(static_cast<double>(n));
    switch (law.kind()) {
    case LawKind::studentized_plus:
    case LawKind::standardized_windowed: {
        const double root = std::sqrt(2.0 * logn);
        return (observed - root) * root + 1.5 * std::log(logn);
    }
    case LawKind::studentized_minus:
        return observed - logn;
    case LawKind::standardized_full:
        return observed > 0.0 ? static_cast<double>(n) / (observed * observed) : kInf;
    }
    return 0.0;
}

double p_value(const LimitLaw& law, std::size_t n, double observed) {
    const double tau = tau_of(law, n, observed);
    switch (law.kind()) {
    case LawKind::studentized_plus:
    case LawKind::standardized_windowed:
        return clamp_probability(gumbel_scale_survival(law.constant(), tau));
    case LawKind::studentized_minus:
        return clamp_probability(gumbel_scale_survival(std::exp(1.0), tau));
    case LawKind::standardized_full:
        return std::isinf(tau) ? 1.0 : clamp_probability(-std::expm1(-tau));
    }
    return 1.0;
}

double statistic_cdf(const LimitLaw& law, std::size_t n, double observed) {
    return 1.0 - p_value(law, n, observed);
}

double critical_value(const LimitLaw& law, std::size_t n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
    }
    require_tau_n(law, n);
    // -log(1 - alpha), the Gumbel double-log argument.
    const double hazard = -std::log1p(-alpha);
    switch (law.kind()) {
    case LawKind::studentized_plus:
    case LawKind::standardized_windowed:
        return u_n_tau(n, -std::log(hazard / law.constant()));
    case LawKind::studentized_minus:
        return std::log(static_cast<double>(n)) + 1.0 - std::log(hazard);
    case LawKind::standardized_full:
        return std::sqrt(static_cast<double>(n) / hazard);
    }
    return 0.0;
}

namespace {

std::vector<std::string> size_warnings(std::size_t n) {
    if (n <= kPreAsymptoticN) return {"pre_asymptotic_n"};
    return {};
}

} // namespace

Calibration calibrate_observed(const LimitLaw& law, std::size_t n, double observed) {
    Calibration out{law, n, tau_of(law, n, observed), p_value(law, n, observed), std::nullopt, size_warnings(n)};
    return out;
}

Calibration calibrate_alpha(const LimitLaw& law, std::size_t n, double alpha) {
    const double crit = critical_value(law, n, alpha);
    Calibration out{law, n, tau_of(law, n, crit), std::nullopt, crit, size_warnings(n)};
    return out;
}

double exact_min_spacing_sf(std::size_t n, double t) {
    if (n == 0) {
        throw Error(ErrorCode::DomainError, "n must be positive");
    }
    if (std::isnan(t)) {
        throw Error(ErrorCode::DomainError, "t is NaN");
    }
    const double nn = static_cast<double>(n);
    if (t <= 0.0) return 1.0;
    if (t >= 1.0 / nn) return 0.0;
    return std::pow(1.0 - nn * t, nn);
}

double kolmogorov_cdf(double y, std::size_t terms) {
    if (std::isnan(y)) {
        throw Error(ErrorCode::DomainError, "y is NaN");
    }
    if (y <= 0.0) return 0.0;
    const bool adaptive = terms == 0;
    if (adaptive && y < 1.0) {
        // The alternating sum cancels down to rounding noise for small y;
        // the theta-transformed series is positive and converges fast there.
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double theta = 0.0;
        for (std::size_t k = 1;; ++k) {
            const double odd = 2.0 * static_cast<double>(k) - 1.0;
            const double term = std::exp(-odd * odd * pi2 / (8.0 * y * y));
            theta += term;
            if (term < 1e-17 * theta || term == 0.0) break;
        }
        return clamp_probability(std::sqrt(2.0 * std::numbers::pi) / y * theta);
    }
    const std::size_t limit = adaptive ? 10'000'000 : terms;
    double sum = 1.0;
    for (std::size_t k = 1; k <= limit; ++k) {
        const double kk = static_cast<double>(k);
        const double term = 2.0 * std::exp(-2.0 * kk * kk * y * y);
        if (adaptive && term < 1e-12) break;
        sum += (k % 2 == 1) ? -term : term;
    }
    return clamp_probability(sum);
}

} // namespace scanstat
