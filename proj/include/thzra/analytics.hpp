#pragma once

#include <array>
#include <utility>

#include "thzra/config.hpp"

namespace thzra {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct Bounds
{
    double lower = 0.0;
    double upper = 0.0;

    bool brackets(double x) const { return lower <= x && x <= upper; }
};

struct DelayEnergyReport
{
    double exact = 0.0;
    Bounds bounds;
    double scaling_reference = 0.0;
};

struct OutageQuery
{
    double gamma_th = 1.0;   // linear
    double gamma_bar = 1.0;  // linear
    double k_h = 0.0;

    bool above_ceiling() const { return gamma_th * k_h * k_h >= 1.0; }
    /// sqrt(γ_th / (γ̄ (1 - γ_th k_h²))).
    double gamma_h() const;
};

struct OutageResult
{
    double probability = 1.0;
    bool ceiling = false;  // γ_th at or beyond the 1/k_h² ceiling
};

/// P[γ < γ_th] with fading off: integer absorption shape, rates z and ρ.
/// Throws DegenerateParams when |z - ρ| < 1e-6.
OutageResult cdf_snr_no_fading(const OutageQuery& q, const GammaAbsorption& model, double rho,
                               const ThzLinkParams& link);
/// Density of γ at γ = q.gamma_th.
double pdf_snr_no_fading(const OutageQuery& q, const GammaAbsorption& model, double rho, const ThzLinkParams& link);
OutageResult outage_probability(const OutageQuery& q, const GammaAbsorption& model, double rho,
                                const ThzLinkParams& link);

/// Survival P[T + W > L] for T ~ Gamma(k, rate z), W ~ Gamma(2, rate ρ).
double log_gain_survival(int k, double z, double rho, double L);
/// Density of T + W at L.
double log_gain_density(int k, double z, double rho, double L);

struct DiversityOrder
{
    std::array<double, 3> exponents{};  // αμ/2, ρ/2, z/2
    double effective = 0.0;
};

DiversityOrder diversity_order(double alpha, double mu, double rho, double z);

// Expected slots and energy; +∞ marks a divergent series (p = 1, K ≥ 2).
double expected_delay_exact(int K, double p);
double delay_ftp(int K);
double delay_atp(int K);
Bounds delay_bounds_ftp(int K);
Bounds delay_bounds_atp(int K);

double expected_collisions_given_failure(int k, double p);
double expected_attempts_between_successes(int k, double p);

double energy_exact(int K, double p);
double energy_ftp(int K);
/// (K-1)(exp(-K log r) - 1), r = 1 - 1/K.
double energy_ftp_geometric(int K);
double energy_atp(int K);
/// Lower bound from the proof, upper (K-1)(e(K-1)/(K-2) - 1).
Bounds energy_bounds_ftp(int K);
/// Per-user form as printed.
Bounds energy_bounds_atp(int K);
/// Per-user form scaled by K.
Bounds energy_bounds_atp_total(int K);
Bounds energy_gap_bounds(int K);

double harmonic_number(int K);

DelayEnergyReport delay_report(Scheme scheme, int K);
DelayEnergyReport energy_report(Scheme scheme, int K);

enum class HoeffdingKind { Delay, Energy };
double hoeffding_bound(double epsilon, double n, HoeffdingKind kind);
/// ε at which the bound equals `target`.
double hoeffding_epsilon(double target, double n, HoeffdingKind kind);

}  // namespace thzra
