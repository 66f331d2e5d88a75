#pragma once

#include <cstdint>

#include "thzra/config.hpp"
#include "thzra/rng.hpp"

namespace thzra {

struct ChannelDraw
{
    double h_l = 0.0;
    double h_f = 1.0;
    double h_p = 0.0;
    double h = 0.0;
    double gamma = 0.0;
};

/// One engine per random channel component.
struct ChannelStreams
{
    Engine absorption;
    Engine fading;
    Engine misalignment;

    static ChannelStreams make(std::uint64_t seed, std::uint64_t trial);
};

/// γ̄h² / (k_h² γ̄h² + 1).
double impaired_snr(double h, double avg_snr, double k_h);

/// Saturation vapour pressure (hPa) over water; T in kelvin, p in hPa.
double buck_saturation_pressure(double temperature_k, double pressure_hpa);

/// Molecular absorption coefficient ζ (1/m) from a coefficient profile.
double absorption_deterministic(const ThzLinkParams& link, const AbsorptionProfile& profile);

/// Path gain for a fixed coefficient ζ in 1/m: a_l·exp(-ζd/2).
double path_gain_deterministic(double zeta_per_m, const ThzLinkParams& link);

double sample_absorption_db(const GammaAbsorption& model, Engine& eng);

/// a_l·exp(-ζ_dB·d_km/8.686).
double path_gain_from_absorption(double zeta_db_per_km, const ThzLinkParams& link);

double path_gain_pdf(double h_l, const GammaAbsorption& model, const ThzLinkParams& link);
double path_gain_cdf(double h_l, const GammaAbsorption& model, const ThzLinkParams& link);

/// (U·V)^{1/ρ}: exact draw from the density -ρ² ln(x) x^{ρ-1} on (0,1).
double sample_misalignment(double rho, Engine& eng);
double misalignment_cdf(double x, double rho);
double misalignment_pdf(double x, double rho);

double sample_fading(const FadingParams& fp, Engine& eng);

/// Precomputes the link constants once; draws are then cheap and thread-safe.
class ChannelModel
{
  public:
    ChannelModel(const ThzLinkParams& link, const AbsorptionModel& absorption, const FadingParams& fading,
                 const MisalignmentParams& misalignment);

    /// Composite gain h = h_l·h_f·h_p without the SNR mapping.
    ChannelDraw draw_gain(ChannelStreams& streams) const;
    ChannelDraw draw(ChannelStreams& streams) const { return draw(streams, link_.avg_snr); }
    ChannelDraw draw(ChannelStreams& streams, double avg_snr) const;

    const ThzLinkParams& link() const { return link_; }
    double a_l() const { return a_l_; }
    double k_h() const { return k_h_; }
    /// E[h_p²] = (ρ/(ρ+2))².
    double mean_misalignment_power() const;

  private:
    ThzLinkParams link_;
    AbsorptionModel absorption_;
    FadingParams fading_;
    MisalignmentParams misalignment_;
    double a_l_;
    double k_h_;
    double fixed_h_l_ = 0.0;  // deterministic model only
};

ChannelDraw draw_channel(const ThzLinkParams& link, const AbsorptionModel& absorption, const FadingParams& fading,
                         const MisalignmentParams& misalignment, ChannelStreams& streams);

}  // namespace thzra
