#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scanstat {

enum class LawKind {
    studentized_plus,      ///< P(M+ <= u_n(tau)) -> exp(-c e^{-tau})
    studentized_minus,     ///< P(M- <= log n + tau) -> exp(-e^{1 - tau})
    standardized_full,     ///< P(M~+ <= sqrt(n / tau)) -> exp(-tau)
    standardized_windowed, ///< P(M~+(k_n, n) <= u_n(tau)) -> exp(-c_A e^{-tau})
};

/// The Gumbel constant 8 / (9 sqrt(pi)) of the studentized plus law.
double gumbel_constant() noexcept;

/// c_A = integral over [A, inf) of exp(sqrt(2) / (3 sqrt(a))) / (2 sqrt(pi) a^2).
/// Evaluated after b = 1/a as (1 / (2 sqrt(pi))) * integral over [0, 1/A] of
/// exp((sqrt(2)/3) sqrt(b)) db, by adaptive Simpson to 1e-10 absolute.
double c_A(double A);

class LimitLaw {
public:
    static LimitLaw studentized_plus() { return LimitLaw(LawKind::studentized_plus, 0.0, gumbel_constant()); }
    static LimitLaw studentized_minus() { return LimitLaw(LawKind::studentized_minus, 0.0, 1.0); }
    static LimitLaw standardized_full() { return LimitLaw(LawKind::standardized_full, 0.0, 1.0); }
    static LimitLaw standardized_windowed(double A) { return LimitLaw(LawKind::standardized_windowed, A, c_A(A)); }

    LawKind kind() const noexcept { return kind_; }
    /// Window constant A (windowed law only).
    double window() const noexcept { return window_; }
    /// Gumbel scale: c, 1 (minus law, shift form) or c_A.
    double constant() const noexcept { return constant_; }

    /// Short CLI name: splus, sminus, sfull, swindow.
    std::string_view name() const noexcept;

    friend bool operator==(const LimitLaw&, const LimitLaw&) = default;

private:
    LimitLaw(LawKind kind, double window, double constant) : kind_(kind), window_(window), constant_(constant) {}

    LawKind kind_;
    double window_;
    double constant_;
};

LimitLaw parse_law(std::string_view name, std::optional<double> A = std::nullopt);

/// (1 + (2 tau - 3 log log n) / (4 log n)) sqrt(2 log n). DomainError for n <= 2.
double u_n_tau(std::size_t n, double tau);

/// Limit CDF in tau coordinates. For standardized_full this is exp(-tau),
/// the limit of P(M~+ <= sqrt(n / tau)), and tau must be positive.
double limit_cdf(const LimitLaw& law, double tau);

/// Statistic threshold corresponding to tau at sample size n.
double threshold(const LimitLaw& law, std::size_t n, double tau);

/// Inverse of threshold(): the tau coordinate of an observed value. For
/// standardized_full this is n / m^2, and +inf for m <= 0.
double tau_of(const LimitLaw& law, std::size_t n, double observed);

/// Limit-law CDF of the statistic itself, G(m) = 1 - p_value(m).
double statistic_cdf(const LimitLaw& law, std::size_t n, double observed);

double p_value(const LimitLaw& law, std::size_t n, double observed);

/// Threshold t with p_value(law, n, t) = alpha.
double critical_value(const LimitLaw& law, std::size_t n, double alpha);

/// Sample sizes at or below this have log log n <= 0.
inline constexpr std::size_t kPreAsymptoticN = 15;

struct Calibration {
    LimitLaw law;
    std::size_t n;
    double tau;
    std::optional<double> p_value;
    std::optional<double> critical_value;
    std::vector<std::string> warnings;
};

Calibration calibrate_observed(const LimitLaw& law, std::size_t n, double observed);
Calibration calibrate_alpha(const LimitLaw& law, std::size_t n, double alpha);

/// P(min spacing >= t) = (1 - n t)^n on [0, 1/n], 1 below, 0 above.
double exact_min_spacing_sf(std::size_t n, double t);

/// K(y) = 1 + 2 sum_{k>=1} (-1)^k exp(-2 k^2 y^2). With terms = 0 the sum
/// stops once the next term drops below 1e-12; below y = 1 the equivalent
/// form sqrt(2 pi)/y sum exp(-(2k-1)^2 pi^2 / (8 y^2)) is used instead.
/// An explicit term count always gives that partial alternating sum.
double kolmogorov_cdf(double y, std::size_t terms = 0);

} // namespace scanstat
