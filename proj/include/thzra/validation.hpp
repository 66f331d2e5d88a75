#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "thzra/channel.hpp"
#include "thzra/config.hpp"

namespace thzra {

enum class GofTest { KS, ChiSquare };

struct GofReport
{
    GofTest test = GofTest::KS;
    double statistic = 0.0;
    double threshold = 0.0;
    std::size_t n_samples = 0;
    double p_value = 0.0;  // χ² only
    int dof = 0;           // χ² only
    bool pass = false;
};

using Cdf = std::function<double(double)>;

/// Two-sided KS statistic against 1.36/√n. Needs n ≥ 1000.
GofReport ks_compare(std::vector<double> samples, const Cdf& cdf);

/// Equal-probability bins on [lo, hi] (≥ 20 expected per bin); pass when
/// the statistic is below the α = 0.01 critical value.
GofReport chi_square_compare(const std::vector<double>& samples, const Cdf& cdf, double lo, double hi);

struct OutagePoint
{
    double gamma_bar_db = 0.0;
    std::uint64_t n = 0;
    std::uint64_t outages = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;  // Wilson, 95%
    double ci_hi = 0.0;
};

using OutageCurve = std::vector<OutagePoint>;

/// Wilson score interval at z = 1.96.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n);

/// Empirical P[γ < γ_th] on a γ̄ grid. Every grid point reuses the same n
/// channel draws, so the curve is exactly monotone in γ̄.
OutageCurve outage_mc(const ChannelModel& channel, double gamma_th, const std::vector<double>& grid_db,
                      std::uint64_t n, std::uint64_t seed);

struct SlopeFit
{
    double slope = 0.0;  // decades of outage per 10 dB
    double std_err = 0.0;
    int points = 0;
};

/// Weighted least-squares slope of log10 P̂ against γ̄_dB/10 using points
/// inside [lo_db, hi_db] with 0 < P̂ < 0.1 and a CI narrower than half a
/// decade. Throws InsufficientTail with fewer than four such points.
SlopeFit slope_fit(const OutageCurve& curve, double lo_db, double hi_db);

struct BoundRow
{
    int K = 0;
    std::string name;
    double exact = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool pass = false;
};

struct BoundSweep
{
    std::vector<BoundRow> rows;
    std::size_t failures = 0;
    bool pass() const { return failures == 0; }
};

/// Closed-form brackets for FTP/ATP delay and energy plus the energy-gap interval.
/// Rows are kept only for failures and for `keep_every`-th K.
BoundSweep bound_sweep(int k_lo, int k_hi, int keep_every = 1);

struct SuiteResult
{
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
    std::map<std::string, double> metrics;
};

struct ValidationReport
{
    std::vector<SuiteResult> suites;
    bool pass() const;
};

/// All suites driven by one validated configuration.
ValidationReport run_validation(const ExperimentConfig& cfg, std::uint64_t seed);

}  // namespace thzra
