#include "thzra/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "thzra/error.hpp"
#include "thzra/special.hpp"

namespace thzra {
namespace {

constexpr double kE = std::numbers::e;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateTolerance = 1e-6;
constexpr double kClampSlack = 1e-9;

void require_k(int K, int min, const char* what)
{
    if (K < min)
        throw Error(ErrorCode::DomainError, std::string(what) + " requires K >= " + std::to_string(min));
}

void require_distinct_rates(double z, double rho)
{
    if (std::abs(z - rho) < kDegenerateTolerance)
        throw Error(ErrorCode::DegenerateParams,
                    "absorption rate z = " + std::to_string(z) + " coincides with rho = " + std::to_string(rho));
}

// c^{-ν} γ(ν, cL) = ∫_0^L t^{ν-1} e^{-ct} dt, any real c.
double truncated_moment(int nu, double c, double L)
{
    if (c == 0.0)
        return std::pow(L, nu) / nu;
    return special::gamma_lower_integer(nu, c * L) / std::pow(c, nu);
}

}  // namespace

double OutageQuery::gamma_h() const
{
    return std::sqrt(gamma_th / (gamma_bar * (1.0 - gamma_th * k_h * k_h)));
}

double log_gain_survival(int k, double z, double rho, double L)
{
    require_distinct_rates(z, rho);
    if (L <= 0.0)
        return 1.0;
    double c = z - rho;
    double q = special::gamma_upper_integer(k, z * L) / std::tgamma(static_cast<double>(k));
    double pref = std::exp(k * std::log(z) - rho * L - std::lgamma(static_cast<double>(k)));
    double bracket = (1.0 + rho * L) * truncated_moment(k, c, L) - rho * truncated_moment(k + 1, c, L);
    return q + pref * bracket;
}

double log_gain_density(int k, double z, double rho, double L)
{
    require_distinct_rates(z, rho);
    if (L <= 0.0)
        return 0.0;
    double c = z - rho;
    double pref = std::exp(k * std::log(z) + 2.0 * std::log(rho) - rho * L - std::lgamma(static_cast<double>(k)));
    return pref * (L * truncated_moment(k, c, L) - truncated_moment(k + 1, c, L));
}

OutageResult cdf_snr_no_fading(const OutageQuery& q, const GammaAbsorption& model, double rho,
                               const ThzLinkParams& link)
{
    if (q.above_ceiling())
        return {1.0, true};
    int k = model.integer_shape();
    double z = model.z(link.d_km());
    require_distinct_rates(z, rho);
    if (q.gamma_th <= 0.0)
        return {0.0, false};
    if (q.gamma_bar <= 0.0)
        return {1.0, false};
    double L = std::log(link.a_l() / q.gamma_h());
    double raw = log_gain_survival(k, z, rho, L);
    if (!(raw >= -kClampSlack && raw <= 1.0 + kClampSlack))
        throw Error(ErrorCode::DomainError, "outage closed form left [0, 1]: " + std::to_string(raw));
    return {std::clamp(raw, 0.0, 1.0), false};
}

double pdf_snr_no_fading(const OutageQuery& q, const GammaAbsorption& model, double rho, const ThzLinkParams& link)
{
    if (q.above_ceiling())
        return 0.0;
    int k = model.integer_shape();
    double z = model.z(link.d_km());
    require_distinct_rates(z, rho);
    if (q.gamma_th <= 0.0 || q.gamma_bar <= 0.0)
        return 0.0;
    double L = std::log(link.a_l() / q.gamma_h());
    double kh2 = q.k_h * q.k_h;
    return log_gain_density(k, z, rho, L) / (2.0 * q.gamma_th * (1.0 - q.gamma_th * kh2));
}

OutageResult outage_probability(const OutageQuery& q, const GammaAbsorption& model, double rho,
                                const ThzLinkParams& link)
{
    return cdf_snr_no_fading(q, model, rho, link);
}

DiversityOrder diversity_order(double alpha, double mu, double rho, double z)
{
    if (!(alpha > 0 && mu > 0 && rho > 0 && z > 0))
        throw Error(ErrorCode::DomainError, "diversity order needs positive alpha, mu, rho, z");
    DiversityOrder d;
    d.exponents = {alpha * mu / 2.0, rho / 2.0, z / 2.0};
    d.effective = *std::min_element(d.exponents.begin(), d.exponents.end());
    return d;
}

double expected_delay_exact(int K, double p)
{
    require_k(K, 1, "expected_delay_exact");
    if (!(p > 0.0 && p <= 1.0))
        throw Error(ErrorCode::DomainError, "transmission probability must lie in (0, 1]");
    if (p == 1.0)
        return K == 1 ? 1.0 : kInf;
    double sum = 0.0;
    double log_q = std::log1p(-p);
    for (int k = 1; k <= K; ++k)
        sum += 1.0 / (k * p * std::exp((k - 1) * log_q));
    return sum;
}

double delay_ftp(int K)
{
    require_k(K, 1, "delay_ftp");
    if (K == 1)
        return 1.0;
    double log_r = std::log1p(-1.0 / K);
    double sum = 0.0;
    for (int k = 1; k <= K; ++k)
        sum += 1.0 / (k * std::exp(k * log_r));
    return (K - 1) * sum;
}

double delay_atp(int K)
{
    require_k(K, 1, "delay_atp");
    double sum = 1.0;
    for (int k = 2; k <= K; ++k)
        sum += std::exp((k - 1) * std::log1p(1.0 / (k - 1)));
    return sum;
}

double harmonic_number(int K)
{
    double h = 0.0;
    for (int k = K; k >= 1; --k)
        h += 1.0 / k;
    return h;
}

Bounds delay_bounds_ftp(int K)
{
    require_k(K, 2, "delay_bounds_ftp");
    double lk = std::log(static_cast<double>(K));
    double lower = (K - 1) * (lk + 1.0 / (1.0 + 2.0 * K) + kEulerGamma + 1.0);
    double upper = (K - 1) * (lk + 1.0 / (static_cast<double>(K) * (K - 1)) + K / (K - 1.0) * kE + 1.0);
    return {lower, upper};
}

Bounds delay_bounds_atp(int K)
{
    require_k(K, 2, "delay_bounds_atp");
    double lk = std::log(static_cast<double>(K));
    return {K * kE - kE * (kEulerGamma + lk + 1.0 / (2.0 * K)), K * kE};
}

double expected_collisions_given_failure(int k, double p)
{
    if (k < 1 || !(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::DomainError, "collisions need k >= 1 and 0 <= p <= 1");
    return k * p - k * p * std::pow(1.0 - p, k - 1);
}

double expected_attempts_between_successes(int k, double p)
{
    if (k < 1 || !(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::DomainError, "attempts need k >= 1 and 0 <= p <= 1");
    double ps = k * p * std::pow(1.0 - p, k - 1);
    return ps > 0.0 ? 1.0 / ps : kInf;
}

double energy_exact(int K, double p)
{
    require_k(K, 1, "energy_exact");
    if (!(p > 0.0 && p <= 1.0))
        throw Error(ErrorCode::DomainError, "transmission probability must lie in (0, 1]");
    if (p == 1.0)
        return K == 1 ? 1.0 : kInf;
    double log_q = std::log1p(-p);
    double sum = 0.0;
    for (int k = 1; k <= K; ++k)
        sum += std::exp(-(k - 1) * log_q);
    return sum;
}

double energy_ftp(int K)
{
    require_k(K, 1, "energy_ftp");
    if (K == 1)
        return 1.0;
    double log_r = std::log1p(-1.0 / K);
    double sum = 0.0;
    for (int k = 1; k <= K; ++k)
        sum += 1.0 / std::exp(k * log_r);
    return (K - 1.0) / K * sum;
}

double energy_ftp_geometric(int K)
{
    require_k(K, 2, "energy_ftp_geometric");
    double log_r = std::log1p(-1.0 / K);
    return (K - 1) * std::expm1(-K * log_r);
}

double energy_atp(int K)
{
    return delay_atp(K);
}

Bounds energy_bounds_ftp(int K)
{
    require_k(K, 2, "energy_bounds_ftp");
    double lower = 1.5 * K - 1.0 / (2.0 * K) - 1.0;
    double upper = K == 2 ? kInf : (K - 1) * (kE * (K - 1.0) / (K - 2.0) - 1.0);
    return {lower, upper};
}

Bounds energy_bounds_atp(int K)
{
    require_k(K, 2, "energy_bounds_atp");
    double lk = std::log(static_cast<double>(K));
    return {kE - kE / K * (kEulerGamma + lk + 1.0 / (2.0 * K)), kE};
}

Bounds energy_bounds_atp_total(int K)
{
    Bounds b = energy_bounds_atp(K);
    return {b.lower * K, b.upper * K};
}

Bounds energy_gap_bounds(int K)
{
    require_k(K, 2, "energy_gap_bounds");
    double lower = K == 2 ? -kInf
                          : (kE - 1.0) * harmonic_number(K) + K - kE * (K - 1.0) * (K - 1.0) / (K - 2.0) - 1.0;
    double upper = K * kE - 1.5 * K + 1.0 / (2.0 * K) + 1.0;
    return {lower, upper};
}

DelayEnergyReport delay_report(Scheme scheme, int K)
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    DelayEnergyReport r;
    switch (scheme) {
    case Scheme::Ftp:
        r.exact = delay_ftp(K);
        r.bounds = K >= 2 ? delay_bounds_ftp(K) : Bounds{nan, nan};
        r.scaling_reference = K * std::log(static_cast<double>(K));
        break;
    case Scheme::Atp:
        r.exact = delay_atp(K);
        r.bounds = K >= 2 ? delay_bounds_atp(K) : Bounds{nan, nan};
        r.scaling_reference = K * kE;
        break;
    case Scheme::Optimal:
        r.exact = K;
        r.bounds = {static_cast<double>(K), static_cast<double>(K)};
        r.scaling_reference = K;
        break;
    }
    return r;
}

DelayEnergyReport energy_report(Scheme scheme, int K)
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    DelayEnergyReport r;
    switch (scheme) {
    case Scheme::Ftp:
        r.exact = energy_ftp(K);
        r.bounds = K >= 2 ? energy_bounds_ftp(K) : Bounds{nan, nan};
        r.scaling_reference = (kE - 1.0) * K;
        break;
    case Scheme::Atp:
        r.exact = energy_atp(K);
        r.bounds = K >= 2 ? energy_bounds_atp_total(K) : Bounds{nan, nan};
        r.scaling_reference = kE * K;
        break;
    case Scheme::Optimal:
        r.exact = K;
        r.bounds = {static_cast<double>(K), static_cast<double>(K)};
        r.scaling_reference = K;
        break;
    }
    return r;
}

double hoeffding_bound(double epsilon, double n, HoeffdingKind kind)
{
    if (!(epsilon >= 0.0) || !(n >= 1.0))
        throw Error(ErrorCode::DomainError, "Hoeffding bound needs epsilon >= 0 and n >= 1");
    double denom = kind == HoeffdingKind::Delay ? n : n * (n - 1.0) * (n - 1.0);
    if (denom == 0.0)
        return epsilon > 0.0 ? 0.0 : 2.0;
    return 2.0 * std::exp(-2.0 * epsilon * epsilon / denom);
}

double hoeffding_epsilon(double target, double n, HoeffdingKind kind)
{
    if (!(target > 0.0 && target <= 2.0) || !(n >= 1.0))
        throw Error(ErrorCode::DomainError, "Hoeffding target must lie in (0, 2]");
    double denom = kind == HoeffdingKind::Delay ? n : n * (n - 1.0) * (n - 1.0);
    return std::sqrt(denom * std::log(2.0 / target) / 2.0);
}

}  // namespace thzra
