#include "thzra/validation.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>
#include <sstream>

#include "thzra/analytics.hpp"
#include "thzra/error.hpp"
#include "thzra/parallel.hpp"
#include "thzra/protocol.hpp"
#include "thzra/special.hpp"

namespace thzra {
namespace {

constexpr std::size_t kMinKsSamples = 1000;
constexpr double kKsCoefficient = 1.36;
constexpr double kChiAlpha = 0.01;
constexpr std::uint64_t kOutageBlock = 4096;

double quantile(const Cdf& cdf, double prob, double lo, double hi)
{
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (cdf(mid) < prob)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

GofReport ks_compare(std::vector<double> samples, const Cdf& cdf)
{
    if (samples.empty())
        throw Error(ErrorCode::EmptySample, "KS comparison on an empty sample");
    if (samples.size() < kMinKsSamples)
        throw Error(ErrorCode::EmptySample, "KS comparison needs at least 1000 samples");
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    GofReport r;
    r.test = GofTest::KS;
    r.statistic = d;
    r.threshold = kKsCoefficient / std::sqrt(n);
    r.n_samples = samples.size();
    r.pass = d < r.threshold;
    return r;
}

GofReport chi_square_compare(const std::vector<double>& samples, const Cdf& cdf, double lo, double hi)
{
    if (samples.empty())
        throw Error(ErrorCode::EmptySample, "chi-square comparison on an empty sample");
    std::size_t n = samples.size();
    auto bins = static_cast<int>(std::min<std::size_t>(100, n / 20));
    if (bins < 2)
        throw Error(ErrorCode::EmptySample, "chi-square comparison needs at least 40 samples");
    std::vector<double> edges;
    for (int b = 1; b < bins; ++b)
        edges.push_back(quantile(cdf, static_cast<double>(b) / bins, lo, hi));
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double x : samples) {
        auto idx = std::upper_bound(edges.begin(), edges.end(), x) - edges.begin();
        counts[static_cast<std::size_t>(idx)] += 1.0;
    }
    double expected = static_cast<double>(n) / bins;
    double chi = 0.0;
    for (double c : counts)
        chi += (c - expected) * (c - expected) / expected;
    GofReport r;
    r.test = GofTest::ChiSquare;
    r.statistic = chi;
    r.dof = bins - 1;
    r.threshold = special::chi_square_critical(r.dof, kChiAlpha);
    r.p_value = special::chi_square_sf(chi, r.dof);
    r.n_samples = n;
    r.pass = chi < r.threshold;
    return r;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n)
{
    if (n == 0)
        return {0.0, 1.0};
    constexpr double z = 1.96;
    double nn = static_cast<double>(n);
    double p = static_cast<double>(successes) / nn;
    double denom = 1.0 + z * z / nn;
    double centre = (p + z * z / (2.0 * nn)) / denom;
    double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

OutageCurve outage_mc(const ChannelModel& channel, double gamma_th, const std::vector<double>& grid_db,
                      std::uint64_t n, std::uint64_t seed)
{
    std::size_t g = grid_db.size();
    std::vector<double> snr(g);
    for (std::size_t i = 0; i < g; ++i)
        snr[i] = db_to_linear(grid_db[i]);
    std::uint64_t blocks = (n + kOutageBlock - 1) / kOutageBlock;
    std::vector<std::vector<std::uint64_t>> counts(blocks, std::vector<std::uint64_t>(g, 0));
    double k_h = channel.k_h();
    parallel_for(
        blocks,
        [&](std::size_t b) {
            auto streams = ChannelStreams::make(seed, b);
            std::uint64_t begin = b * kOutageBlock;
            std::uint64_t end = std::min(n, begin + kOutageBlock);
            auto& local = counts[b];
            for (std::uint64_t j = begin; j < end; ++j) {
                double h = channel.draw_gain(streams).h;
                for (std::size_t i = 0; i < g; ++i)
                    if (impaired_snr(h, snr[i], k_h) < gamma_th)
                        ++local[i];
            }
        },
        1);

    OutageCurve curve(g);
    for (std::size_t i = 0; i < g; ++i) {
        auto& pt = curve[i];
        pt.gamma_bar_db = grid_db[i];
        pt.n = n;
        for (const auto& block : counts)
            pt.outages += block[i];
        pt.p_hat = n ? static_cast<double>(pt.outages) / static_cast<double>(n) : 0.0;
        std::tie(pt.ci_lo, pt.ci_hi) = wilson_interval(pt.outages, n);
    }
    return curve;
}

SlopeFit slope_fit(const OutageCurve& curve, double lo_db, double hi_db)
{
    std::vector<double> x, y, w;
    for (const auto& pt : curve) {
        if (pt.gamma_bar_db < lo_db || pt.gamma_bar_db > hi_db)
            continue;
        if (!(pt.p_hat > 0.0 && pt.p_hat < 0.1) || !(pt.ci_lo > 0.0))
            continue;
        if (std::log10(pt.ci_hi / pt.ci_lo) >= 0.5)
            continue;
        x.push_back(pt.gamma_bar_db / 10.0);
        y.push_back(std::log10(pt.p_hat));
        // Inverse delta-method variance of log10 p̂.
        w.push_back(static_cast<double>(pt.n) * pt.p_hat / (1.0 - pt.p_hat) * std::log(10.0) * std::log(10.0));
    }
    if (x.size() < 4)
        throw Error(ErrorCode::InsufficientTail, "only " + std::to_string(x.size()) +
                                                     " tail points in [" + fmt(lo_db) + ", " + fmt(hi_db) +
                                                     "] dB; need 4");
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    double mx = sx / sw, my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    SlopeFit f;
    f.slope = -sxy / sxx;
    f.std_err = std::sqrt(1.0 / sxx);
    f.points = static_cast<int>(x.size());
    return f;
}

BoundSweep bound_sweep(int k_lo, int k_hi, int keep_every)
{
    if (k_lo < 2 || k_hi < k_lo)
        throw Error(ErrorCode::DomainError, "bound sweep needs 2 <= k_lo <= k_hi");
    auto count = static_cast<std::size_t>(k_hi - k_lo + 1);
    std::vector<std::array<BoundRow, 5>> rows(count);
    parallel_for(
        count,
        [&](std::size_t i) {
            int K = k_lo + static_cast<int>(i);
            double d_ftp = delay_ftp(K);
            double d_atp = delay_atp(K);
            double e_ftp = energy_ftp(K);
            double e_atp = energy_atp(K);
            auto make = [K](const char* name, double exact, Bounds b) {
                return BoundRow{K, name, exact, b.lower, b.upper, b.brackets(exact)};
            };
            rows[i] = {make("delay_ftp", d_ftp, delay_bounds_ftp(K)),
                       make("delay_atp", d_atp, delay_bounds_atp(K)),
                       make("energy_ftp", e_ftp, energy_bounds_ftp(K)),
                       make("energy_atp_total", e_atp, energy_bounds_atp_total(K)),
                       make("energy_gap", e_atp - e_ftp, energy_gap_bounds(K))};
        },
        16);
    BoundSweep out;
    for (std::size_t i = 0; i < count; ++i) {
        bool keep = keep_every > 0 && i % static_cast<std::size_t>(keep_every) == 0;
        for (auto& row : rows[i]) {
            if (!row.pass)
                ++out.failures;
            if (keep || !row.pass)
                out.rows.push_back(std::move(row));
        }
    }
    return out;
}

bool ValidationReport::pass() const
{
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass || s.skipped; });
}

namespace {

SuiteResult from_gof(std::string name, const GofReport& g)
{
    SuiteResult s;
    s.name = std::move(name);
    s.pass = g.pass;
    s.metrics = {{"statistic", g.statistic}, {"threshold", g.threshold}, {"n", static_cast<double>(g.n_samples)}};
    if (g.test == GofTest::ChiSquare) {
        s.metrics["p_value"] = g.p_value;
        s.metrics["dof"] = g.dof;
    }
    return s;
}

SuiteResult skipped(std::string name, std::string why)
{
    SuiteResult s;
    s.name = std::move(name);
    s.skipped = true;
    s.detail = std::move(why);
    return s;
}

SuiteResult misalignment_suite(const ExperimentConfig& cfg, std::uint64_t seed)
{
    double rho = cfg.misalignment.rho;
    double rho_ref = rho * cfg.validation.reference_rho_scale;
    Engine eng = make_stream(seed, 0, RngComponent::Misalignment);
    std::vector<double> xs(cfg.validation.gof_samples);
    for (auto& x : xs)
        x = sample_misalignment(rho, eng);
    auto s = from_gof("misalignment_ks", ks_compare(std::move(xs), [rho_ref](double x) {
                          return x <= 0.0 ? 0.0 : x >= 1.0 ? 1.0 : misalignment_cdf(x, rho_ref);
                      }));
    s.metrics["rho_sampled"] = rho;
    s.metrics["rho_reference"] = rho_ref;
    return s;
}

SuiteResult absorption_suite(const ExperimentConfig& cfg, std::uint64_t seed)
{
    const auto* g = std::get_if<GammaAbsorption>(&cfg.absorption);
    if (!g)
        return skipped("path_gain_chi2", "deterministic absorption has no random path gain");
    Engine eng = make_stream(seed, 0, RngComponent::Absorption);
    std::vector<double> hs(cfg.validation.gof_samples);
    for (auto& h : hs)
        h = path_gain_from_absorption(sample_absorption_db(*g, eng), cfg.link);
    const auto& link = cfg.link;
    auto s = from_gof("path_gain_chi2", chi_square_compare(hs, [&](double h) { return path_gain_cdf(h, *g, link); },
                                                           0.0, link.a_l()));
    s.pass = s.metrics["p_value"] > kChiAlpha;
    return s;
}

SuiteResult fading_suite(const ExperimentConfig& cfg, std::uint64_t seed)
{
    FadingParams f = cfg.fading;
    f.enabled = true;
    f.eta = 1.0;
    f.kappa = 0.0;
    Engine eng = make_stream(seed, 0, RngComponent::Fading);
    std::vector<double> ys(cfg.validation.gof_samples);
    for (auto& y : ys)
        y = f.mu * std::pow(sample_fading(f, eng) / f.r_hat, f.alpha);
    double mu = f.mu;
    auto s = from_gof("fading_alpha_mu_ks",
                      ks_compare(std::move(ys), [mu](double y) { return special::gamma_cdf(mu, 1.0, y); }));
    s.metrics["alpha"] = f.alpha;
    s.metrics["mu"] = f.mu;
    return s;
}

SuiteResult closed_form_suite(const ExperimentConfig& cfg, std::uint64_t seed)
{
    const auto* g = std::get_if<GammaAbsorption>(&cfg.absorption);
    if (!g || !g->has_integer_shape())
        return skipped("outage_closed_form", "needs Gamma absorption with integer shape");
    double z = g->z(cfg.link.d_km());
    double rho = cfg.misalignment.rho;
    if (std::abs(z - rho) < 1e-6)
        return skipped("outage_closed_form", "z coincides with rho");
    FadingParams off = cfg.fading;
    off.enabled = false;
    ChannelModel model(cfg.link, cfg.absorption, off, cfg.misalignment);
    auto curve = outage_mc(model, cfg.outage.gamma_th, cfg.outage.grid_db, cfg.outage.samples_per_point, seed);
    SuiteResult s;
    s.name = "outage_closed_form";
    s.pass = true;
    double worst = 0.0;
    for (const auto& pt : curve) {
        OutageQuery q{cfg.outage.gamma_th, db_to_linear(pt.gamma_bar_db), cfg.link.k_h()};
        double p = cdf_snr_no_fading(q, *g, rho, cfg.link).probability;
        double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(pt.n));
        double diff = std::abs(pt.p_hat - p);
        double zscore = sigma > 0.0 ? diff / sigma : (diff > 0.0 ? INFINITY : 0.0);
        worst = std::max(worst, zscore);
        if (zscore > 3.0) {
            s.pass = false;
            s.detail += "gamma_bar_db=" + fmt(pt.gamma_bar_db) + " p_hat=" + fmt(pt.p_hat) + " p=" + fmt(p) + "; ";
        }
    }
    s.metrics = {{"max_abs_z", worst},
                 {"points", static_cast<double>(curve.size())},
                 {"n_per_point", static_cast<double>(cfg.outage.samples_per_point)}};
    return s;
}

SuiteResult protocol_suite(const ExperimentConfig& cfg, std::uint64_t seed)
{
    SuiteResult s;
    s.name = "protocol_vs_series";
    s.pass = true;
    double worst = 0.0;
    ProtocolConfig p = cfg.protocol;
    p.admission = AdmissionMode::Fixed;
    p.trials = cfg.validation.protocol_trials;
    p.seed = seed;
    for (int K : cfg.validation.protocol_k) {
        for (Scheme scheme : {Scheme::Ftp, Scheme::Atp}) {
            p.scheme = scheme;
            auto stats = run_batch(p, K, nullptr).stats;
            double d = scheme == Scheme::Ftp ? delay_ftp(K) : delay_atp(K);
            double e = scheme == Scheme::Ftp ? energy_ftp(K) : energy_atp(K);
            double rd = std::abs(stats.delay.mean - d) / d;
            double re = std::abs(stats.energy_units.mean - e) / e;
            worst = std::max({worst, rd, re});
            if (rd >= 0.02 || re >= 0.02) {
                s.pass = false;
                s.detail += std::string(to_string(scheme)) + " K=" + std::to_string(K) + " delay_err=" + fmt(rd) +
                            " energy_err=" + fmt(re) + "; ";
            }
        }
    }
    s.metrics = {{"max_rel_err", worst}, {"trials", static_cast<double>(p.trials)}};
    return s;
}

SuiteResult bounds_suite(const ExperimentConfig& cfg)
{
    auto sweep = bound_sweep(3, cfg.validation.bound_k_max, 0);
    SuiteResult s;
    s.name = "bound_brackets";
    s.pass = sweep.pass();
    s.metrics = {{"k_max", static_cast<double>(cfg.validation.bound_k_max)},
                 {"failures", static_cast<double>(sweep.failures)}};
    for (std::size_t i = 0; i < std::min<std::size_t>(5, sweep.rows.size()); ++i)
        s.detail += sweep.rows[i].name + " K=" + std::to_string(sweep.rows[i].K) + "; ";
    return s;
}

SuiteResult slope_suite(const ExperimentConfig& cfg, std::uint64_t seed)
{
    if (!cfg.validation.slope_enabled)
        return skipped("diversity_slope", "disabled");
    if (!cfg.fading.enabled)
        return skipped("diversity_slope", "fading disabled");
    double z = INFINITY;
    if (const auto* g = std::get_if<GammaAbsorption>(&cfg.absorption))
        z = g->z(cfg.link.d_km());
    double target = std::min({cfg.fading.alpha * cfg.fading.mu / 2.0, cfg.misalignment.rho / 2.0, z / 2.0});
    std::vector<double> grid;
    for (double db = cfg.validation.slope_window_lo_db; db <= cfg.validation.slope_window_hi_db + 1e-9; db += 5.0)
        grid.push_back(db);
    ChannelModel model(cfg.link, cfg.absorption, cfg.fading, cfg.misalignment);
    auto curve = outage_mc(model, cfg.outage.gamma_th, grid, cfg.validation.slope_samples, seed);
    SuiteResult s;
    s.name = "diversity_slope";
    s.metrics["target"] = target;
    try {
        auto fit = slope_fit(curve, cfg.validation.slope_window_lo_db, cfg.validation.slope_window_hi_db);
        s.metrics["slope"] = fit.slope;
        s.metrics["std_err"] = fit.std_err;
        s.metrics["points"] = fit.points;
        s.pass = std::abs(fit.slope - target) <= 0.15 * target;
    }
    catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientTail)
            throw;
        s.pass = false;
        s.detail = e.what();
    }
    return s;
}

}  // namespace

ValidationReport run_validation(const ExperimentConfig& cfg, std::uint64_t seed)
{
    ValidationReport r;
    r.suites.push_back(misalignment_suite(cfg, seed));
    r.suites.push_back(absorption_suite(cfg, seed));
    r.suites.push_back(fading_suite(cfg, seed));
    r.suites.push_back(closed_form_suite(cfg, seed));
    r.suites.push_back(protocol_suite(cfg, seed));
    r.suites.push_back(bounds_suite(cfg));
    r.suites.push_back(slope_suite(cfg, seed));
    std::sort(r.suites.begin(), r.suites.end(),
              [](const SuiteResult& a, const SuiteResult& b) { return a.name < b.name; });
    return r;
}

}  // namespace thzra
