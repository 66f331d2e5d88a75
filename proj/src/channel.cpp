#include "thzra/channel.hpp"

#include <cmath>

#include "thzra/error.hpp"
#include "thzra/special.hpp"

namespace thzra {

ChannelStreams ChannelStreams::make(std::uint64_t seed, std::uint64_t trial)
{
    return {make_stream(seed, trial, RngComponent::Absorption), make_stream(seed, trial, RngComponent::Fading),
            make_stream(seed, trial, RngComponent::Misalignment)};
}

double impaired_snr(double h, double avg_snr, double k_h)
{
    double s = avg_snr * h * h;
    return s / (k_h * k_h * s + 1.0);
}

double buck_saturation_pressure(double temperature_k, double pressure_hpa)
{
    if (!(temperature_k > 200.0 && temperature_k < 350.0))
        throw Error(ErrorCode::OutOfRange, "temperature must satisfy 200 K < T < 350 K");
    double t = temperature_k - 273.15;
    return 6.1121 * (1.0007 + 3.46e-6 * pressure_hpa) * std::exp(17.502 * t / (240.97 + t));
}

double absorption_deterministic(const ThzLinkParams& link, const AbsorptionProfile& profile)
{
    const auto& q = profile.q;
    const auto& c = profile.c;
    double pw = buck_saturation_pressure(link.temperature_k, link.pressure_hpa);
    double v = link.humidity_pct / 100.0 * pw / link.pressure_hpa;
    double f = link.f_hz;
    double nu = f / (100.0 * kSpeedOfLight);  // cm⁻¹
    double line1 = q[0] * v * (q[1] * v + q[2]) /
                   (std::pow(q[3] * v + q[4], 2) + std::pow(nu - profile.p1, 2));
    double line2 = q[5] * v * (q[6] * v + q[7]) /
                   (std::pow(q[8] * v + q[9], 2) + std::pow(nu - profile.p2, 2));
    double tail = ((c[0] * f + c[1]) * f + c[2]) * f + c[3];
    // The polynomial fit dips below zero away from its fitted band.
    return std::max(0.0, line1 + line2 + tail);
}

double path_gain_deterministic(double zeta_per_m, const ThzLinkParams& link)
{
    return link.a_l() * std::exp(-0.5 * zeta_per_m * link.d_m);
}

double sample_absorption_db(const GammaAbsorption& model, Engine& eng)
{
    std::gamma_distribution<double> dist(model.k, model.beta_db_per_km);
    return dist(eng);
}

double path_gain_from_absorption(double zeta_db_per_km, const ThzLinkParams& link)
{
    return link.a_l() * std::exp(-0.5 * zeta_db_per_km * link.d_km() / 4.343);
}

double path_gain_pdf(double h_l, const GammaAbsorption& model, const ThzLinkParams& link)
{
    double a = link.a_l();
    if (!(h_l > 0.0 && h_l <= a))
        throw Error(ErrorCode::DomainError, "path gain outside (0, a_l]");
    double z = model.z(link.d_km());
    double k = model.k;
    double t = std::log(a / h_l);
    if (t == 0.0)
        return k > 1.0 ? 0.0 : (k == 1.0 ? z / a : INFINITY);
    double log_density = k * std::log(z) - z * std::log(a) - std::lgamma(k) + (k - 1.0) * std::log(t) +
                         (z - 1.0) * std::log(h_l);
    return std::exp(log_density);
}

double path_gain_cdf(double h_l, const GammaAbsorption& model, const ThzLinkParams& link)
{
    double a = link.a_l();
    if (h_l <= 0.0)
        return 0.0;
    if (h_l >= a)
        return 1.0;
    return special::gamma_q(model.k, model.z(link.d_km()) * std::log(a / h_l));
}

double sample_misalignment(double rho, Engine& eng)
{
    double u = open_uniform(eng);
    double v = open_uniform(eng);
    return std::pow(u * v, 1.0 / rho);
}

double misalignment_cdf(double x, double rho)
{
    if (!(x > 0.0 && x <= 1.0))
        throw Error(ErrorCode::DomainError, "misalignment gain outside (0, 1]");
    return std::pow(x, rho) * (1.0 - rho * std::log(x));
}

double misalignment_pdf(double x, double rho)
{
    if (!(x > 0.0 && x <= 1.0))
        throw Error(ErrorCode::DomainError, "misalignment gain outside (0, 1]");
    return -rho * rho * std::log(x) * std::pow(x, rho - 1.0);
}

double sample_fading(const FadingParams& fp, Engine& eng)
{
    if (fp.p_ext != 1.0 || fp.q_ext != 1.0)
        throw Error(ErrorCode::UnsupportedParams, "asymmetric fading extensions (p, q != 1)");
    double mean = fp.mu * (1.0 + fp.kappa);
    double g = 0.0;
    bool integer_mu = fp.mu >= 1.0 && std::floor(fp.mu) == fp.mu;
    if (integer_mu) {
        double sx = std::sqrt(fp.eta / (1.0 + fp.eta));
        double sy = std::sqrt(1.0 / (1.0 + fp.eta));
        double lambda = std::sqrt(fp.kappa / 2.0);
        std::normal_distribution<double> normal(0.0, 1.0);
        auto clusters = static_cast<int>(fp.mu);
        for (int i = 0; i < clusters; ++i) {
            double x = sx * normal(eng) + lambda;
            double y = sy * normal(eng) + lambda;
            g += x * x + y * y;
        }
    }
    else if (fp.eta == 1.0) {
        // Circular clusters: 2G is noncentral chi-square with 2μ degrees of
        // freedom, i.e. a Poisson(κμ) mixture of Gamma(μ+N, 1).
        unsigned n = 0;
        if (fp.kappa > 0.0)
            n = std::poisson_distribution<unsigned>(fp.kappa * fp.mu)(eng);
        g = std::gamma_distribution<double>(fp.mu + n, 1.0)(eng);
    }
    else {
        throw Error(ErrorCode::UnsupportedParams, "non-integer mu requires eta = 1");
    }
    return fp.r_hat * std::pow(g / mean, 1.0 / fp.alpha);
}

ChannelModel::ChannelModel(const ThzLinkParams& link, const AbsorptionModel& absorption, const FadingParams& fading,
                           const MisalignmentParams& misalignment)
    : link_(link),
      absorption_(absorption),
      fading_(fading),
      misalignment_(misalignment),
      a_l_(link.a_l()),
      k_h_(link.k_h())
{
    if (const auto* d = std::get_if<DeterministicAbsorption>(&absorption_))
        fixed_h_l_ = path_gain_deterministic(absorption_deterministic(link_, d->profile), link_);
}

ChannelDraw ChannelModel::draw_gain(ChannelStreams& streams) const
{
    ChannelDraw d;
    if (const auto* g = std::get_if<GammaAbsorption>(&absorption_))
        d.h_l = path_gain_from_absorption(sample_absorption_db(*g, streams.absorption), link_);
    else
        d.h_l = fixed_h_l_;
    d.h_f = fading_.enabled ? sample_fading(fading_, streams.fading) : 1.0;
    d.h_p = sample_misalignment(misalignment_.rho, streams.misalignment);
    d.h = d.h_l * d.h_f * d.h_p;
    return d;
}

ChannelDraw ChannelModel::draw(ChannelStreams& streams, double avg_snr) const
{
    ChannelDraw d = draw_gain(streams);
    d.gamma = impaired_snr(d.h, avg_snr, k_h_);
    return d;
}

double ChannelModel::mean_misalignment_power() const
{
    double r = misalignment_.rho / (misalignment_.rho + 2.0);
    return r * r;
}

ChannelDraw draw_channel(const ThzLinkParams& link, const AbsorptionModel& absorption, const FadingParams& fading,
                         const MisalignmentParams& misalignment, ChannelStreams& streams)
{
    return ChannelModel(link, absorption, fading, misalignment).draw(streams);
}

}  // namespace thzra
