#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace thzra {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kHpaPerAtm = 1013.25;
inline constexpr double kMaxImpairment = 0.4;

/// Deployment physics of one user-to-AP link.
struct ThzLinkParams
{
    double f_hz = 0.0;
    double d_m = 0.0;
    double g_t = 1.0;  // linear
    double g_r = 1.0;  // linear
    double temperature_k = 296.0;
    double humidity_pct = 50.0;
    double pressure_hpa = kHpaPerAtm;
    double k_t = 0.0;
    double k_r = 0.0;
    double avg_snr = 0.0;  // γ̄, linear

    double d_km() const { return d_m / 1000.0; }
    /// Aggregate impairment sqrt(k_t² + k_r²).
    double k_h() const;
    /// Free-space amplitude gain c·sqrt(G_t G_r) / (4π f d).
    double a_l() const;
};

/// Coefficients of the two-line water-vapour absorption fit:
/// q1..q10 shape the resonance terms, p1/p2 are line centres (cm⁻¹),
/// c1..c4 the cubic polynomial tail in f (Hz).
struct AbsorptionProfile
{
    std::array<double, 10> q{};
    double p1 = 0.0;
    double p2 = 0.0;
    std::array<double, 4> c{};
    std::string units;
};

struct DeterministicAbsorption
{
    AbsorptionProfile profile;
    std::filesystem::path source;
};

/// ζ_dB ~ Gamma(shape k, scale β) in dB/km.
struct GammaAbsorption
{
    double k = 1.0;
    double beta_db_per_km = 1.0;

    double mean_db_per_km() const { return k * beta_db_per_km; }
    /// Rate of ln(a_l/h_l): 8.686 / (β d_km).
    double z(double d_km) const;
    bool has_integer_shape() const;
    /// Shape as an integer; throws NonIntegerShape otherwise.
    int integer_shape() const;
};

using AbsorptionModel = std::variant<GammaAbsorption, DeterministicAbsorption>;

struct FadingParams
{
    double alpha = 2.0;
    double eta = 1.0;
    double kappa = 0.0;
    double mu = 1.0;
    double p_ext = 1.0;
    double q_ext = 1.0;
    double r_hat = 1.0;
    bool enabled = false;
};

struct MisalignmentParams
{
    double rho = 1.0;
    std::optional<double> beam_width;
    std::optional<double> angular_sigma;

    static MisalignmentParams from_beam(double beam_width, double angular_sigma);
};

enum class Scheme { Ftp, Atp, Optimal };
enum class AdmissionMode { Fixed, Instantaneous, Average };

struct EnergyModel
{
    enum class Kind { Unit, Realistic };
    Kind kind = Kind::Unit;
    double e_tx_uj = 1200.0;
    double e_ack_uj = 120.0;
    double e_idle_uj = 40.0;
};

struct ProtocolConfig
{
    Scheme scheme = Scheme::Atp;
    int n_total = 1;
    double gamma_qos = 0.0;  // linear
    EnergyModel energy;
    std::uint64_t trials = 5000;
    std::uint64_t seed = 1;
    AdmissionMode admission = AdmissionMode::Instantaneous;
};

struct OutageSettings
{
    double gamma_th = 1.0;  // linear
    std::vector<double> grid_db;
    std::uint64_t samples_per_point = 100000;
};

struct ValidationSettings
{
    std::uint64_t gof_samples = 100000;
    double reference_rho_scale = 1.0;
    std::uint64_t protocol_trials = 5000;
    std::vector<int> protocol_k = {2, 5, 10, 20, 40};
    int bound_k_max = 10000;
    bool slope_enabled = true;
    double slope_window_lo_db = 50.0;
    double slope_window_hi_db = 90.0;
    std::uint64_t slope_samples = 1000000;
};

struct SweepAxes
{
    std::vector<int> k;
    std::vector<double> avg_snr_db;
    std::vector<double> kbeta_db_per_km;
    std::vector<double> rho;
    std::vector<double> alpha;
    std::vector<double> mu;
    std::vector<double> k_h;

    bool empty() const;
};

/// Everything one run needs, validated and immutable.
struct ExperimentConfig
{
    ThzLinkParams link;
    AbsorptionModel absorption;
    FadingParams fading;
    MisalignmentParams misalignment;
    ProtocolConfig protocol;
    std::vector<Scheme> schemes;
    std::vector<int> k_values;
    OutageSettings outage;
    ValidationSettings validation;
    SweepAxes sweep;
};

/// Flat "section.key" → raw string view of a config file.
class ConfigDocument
{
  public:
    ConfigDocument() = default;
    ConfigDocument(std::map<std::string, std::string> entries, std::filesystem::path base_dir);

    static ConfigDocument parse(const std::string& text, std::filesystem::path base_dir = {});
    static ConfigDocument load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    const std::string& raw(const std::string& key) const;
    void set(const std::string& key, std::string value);
    void erase(const std::string& key);

    const std::map<std::string, std::string>& entries() const { return entries_; }
    const std::filesystem::path& base_dir() const { return base_dir_; }

  private:
    std::map<std::string, std::string> entries_;
    std::filesystem::path base_dir_;
};

ExperimentConfig validate_config(const ConfigDocument& doc);

/// Writes a document that validates back to an identical configuration.
std::string serialize_config(const ExperimentConfig& cfg);

AbsorptionProfile parse_absorption_profile(const std::string& text);
AbsorptionProfile load_absorption_profile(const std::filesystem::path& path);

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Parses "1..10", "35:5:80" or comma lists into numbers.
std::vector<double> parse_number_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

}  // namespace thzra
