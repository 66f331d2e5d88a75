#include "thzra/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "thzra/error.hpp"

namespace thzra {
namespace {

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "link.f_hz", "link.d_m", "link.g_t", "link.g_r", "link.temperature_k",
        "link.humidity_pct", "link.pressure", "link.pressure_unit", "link.k_t", "link.k_r",
        "link.avg_snr_db", "link.avg_snr",
        "absorption.model", "absorption.k", "absorption.beta_db_per_km",
        "absorption.kbeta_db_per_km", "absorption.profile",
        "fading.enabled", "fading.alpha", "fading.eta", "fading.kappa", "fading.mu", "fading.p",
        "fading.q", "fading.r_hat",
        "misalignment.rho", "misalignment.beam_width", "misalignment.angular_sigma",
        "protocol.schemes", "protocol.n_total", "protocol.gamma_qos", "protocol.gamma_qos_db",
        "protocol.admission", "protocol.energy_model", "protocol.e_tx_uj", "protocol.e_ack_uj",
        "protocol.e_idle_uj", "protocol.trials", "protocol.seed", "protocol.k_values",
        "outage.gamma_th", "outage.gamma_th_db", "outage.snr_db_grid", "outage.samples_per_point",
        "validation.gof_samples", "validation.reference_rho_scale", "validation.protocol_trials",
        "validation.protocol_k", "validation.bound_k_max", "validation.slope_enabled",
        "validation.slope_window_lo_db", "validation.slope_window_hi_db",
        "validation.slope_samples",
        "sweep.k", "sweep.avg_snr_db", "sweep.kbeta_db_per_km", "sweep.rho", "sweep.alpha",
        "sweep.mu", "sweep.k_h",
    };
    return keys;
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, std::string_view text)
{
    std::string t = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw Error(ErrorCode::ParseError, key + ": not a number: '" + t + "'");
    if (!std::isfinite(value))
        throw Error(ErrorCode::OutOfRange, key + ": must be finite");
    return value;
}

std::uint64_t parse_u64(const std::string& key, std::string_view text)
{
    std::string t = trim(text);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw Error(ErrorCode::ParseError, key + ": not an unsigned integer: '" + t + "'");
    return value;
}

bool parse_bool(const std::string& key, std::string_view text)
{
    std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on")
        return true;
    if (t == "false" || t == "0" || t == "no" || t == "off")
        return false;
    throw Error(ErrorCode::ParseError, key + ": not a boolean: '" + t + "'");
}

std::string fmt(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

[[noreturn]] void out_of_range(const std::string& key, const std::string& bound)
{
    throw Error(ErrorCode::OutOfRange, key + " must satisfy " + bound);
}

class Reader
{
  public:
    explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

    bool has(const std::string& key) const { return doc_.has(key); }

    double number(const std::string& key) const
    {
        if (!doc_.has(key))
            throw Error(ErrorCode::MissingField, key);
        return parse_double(key, doc_.raw(key));
    }
    double number(const std::string& key, double fallback) const
    {
        return doc_.has(key) ? parse_double(key, doc_.raw(key)) : fallback;
    }
    std::uint64_t u64(const std::string& key, std::uint64_t fallback) const
    {
        return doc_.has(key) ? parse_u64(key, doc_.raw(key)) : fallback;
    }
    bool flag(const std::string& key, bool fallback) const
    {
        return doc_.has(key) ? parse_bool(key, doc_.raw(key)) : fallback;
    }
    std::string text(const std::string& key, const std::string& fallback) const
    {
        return doc_.has(key) ? trim(doc_.raw(key)) : fallback;
    }
    std::string text(const std::string& key) const
    {
        if (!doc_.has(key))
            throw Error(ErrorCode::MissingField, key);
        return trim(doc_.raw(key));
    }

    // Exactly one of a linear key and its *_db twin may be present.
    std::optional<double> linear_or_db(const std::string& linear_key, const std::string& db_key) const
    {
        if (has(linear_key) && has(db_key))
            throw Error(ErrorCode::ParseError, linear_key + " and " + db_key + " are mutually exclusive");
        if (has(linear_key))
            return number(linear_key);
        if (has(db_key))
            return db_to_linear(number(db_key));
        return std::nullopt;
    }

    const ConfigDocument& doc() const { return doc_; }

  private:
    const ConfigDocument& doc_;
};

ThzLinkParams read_link(const Reader& r)
{
    ThzLinkParams link;
    link.f_hz = r.number("link.f_hz");
    link.d_m = r.number("link.d_m");
    link.g_t = r.number("link.g_t");
    link.g_r = r.number("link.g_r");
    link.temperature_k = r.number("link.temperature_k", link.temperature_k);
    link.humidity_pct = r.number("link.humidity_pct", link.humidity_pct);
    std::string unit = r.text("link.pressure_unit", "atm");
    double pressure = r.number("link.pressure", 1.0);
    if (unit == "atm")
        link.pressure_hpa = pressure * kHpaPerAtm;
    else if (unit == "hPa" || unit == "hpa")
        link.pressure_hpa = pressure;
    else
        throw Error(ErrorCode::ParseError, "link.pressure_unit must be 'atm' or 'hPa'");
    link.k_t = r.number("link.k_t", 0.0);
    link.k_r = r.number("link.k_r", 0.0);
    auto snr = r.linear_or_db("link.avg_snr", "link.avg_snr_db");
    if (!snr)
        throw Error(ErrorCode::MissingField, "link.avg_snr_db");
    link.avg_snr = *snr;

    if (!(link.f_hz > 0))
        out_of_range("link.f_hz", "> 0");
    if (!(link.d_m > 0))
        out_of_range("link.d_m", "> 0");
    if (!(link.g_t > 0))
        out_of_range("link.g_t", "> 0");
    if (!(link.g_r > 0))
        out_of_range("link.g_r", "> 0");
    if (!(link.avg_snr >= 0))
        out_of_range("link.avg_snr", ">= 0");
    if (!(link.k_t >= 0 && link.k_t <= kMaxImpairment))
        out_of_range("link.k_t", "0 <= k_t <= 0.4");
    if (!(link.k_r >= 0 && link.k_r <= kMaxImpairment))
        out_of_range("link.k_r", "0 <= k_r <= 0.4");
    if (!(link.temperature_k > 0))
        out_of_range("link.temperature_k", "> 0");
    if (!(link.humidity_pct >= 0 && link.humidity_pct <= 100))
        out_of_range("link.humidity_pct", "0 <= psi <= 100");
    if (!(link.pressure_hpa > 0))
        out_of_range("link.pressure", "> 0");
    return link;
}

AbsorptionModel read_absorption(const Reader& r)
{
    std::string model = r.text("absorption.model");
    if (model == "gamma") {
        GammaAbsorption g;
        g.k = r.number("absorption.k");
        if (!(g.k > 0))
            out_of_range("absorption.k", "> 0");
        bool has_beta = r.has("absorption.beta_db_per_km");
        bool has_mean = r.has("absorption.kbeta_db_per_km");
        if (has_beta && has_mean)
            throw Error(ErrorCode::ParseError,
                        "absorption.beta_db_per_km and absorption.kbeta_db_per_km are mutually exclusive");
        if (has_beta)
            g.beta_db_per_km = r.number("absorption.beta_db_per_km");
        else if (has_mean)
            g.beta_db_per_km = r.number("absorption.kbeta_db_per_km") / g.k;
        else
            throw Error(ErrorCode::MissingField, "absorption.beta_db_per_km");
        if (!(g.beta_db_per_km > 0))
            out_of_range("absorption.beta_db_per_km", "> 0");
        return g;
    }
    if (model == "deterministic") {
        if (!r.has("absorption.profile"))
            throw Error(ErrorCode::ProfileMissing, "absorption.profile is required for the deterministic model");
        std::filesystem::path path = r.text("absorption.profile");
        if (path.is_relative() && !r.doc().base_dir().empty())
            path = r.doc().base_dir() / path;
        DeterministicAbsorption d;
        d.profile = load_absorption_profile(path);
        d.source = std::filesystem::absolute(path).lexically_normal();
        return d;
    }
    throw Error(ErrorCode::ParseError, "absorption.model must be 'gamma' or 'deterministic'");
}

FadingParams read_fading(const Reader& r)
{
    FadingParams f;
    f.enabled = r.flag("fading.enabled", false);
    f.alpha = r.number("fading.alpha", f.alpha);
    f.eta = r.number("fading.eta", f.eta);
    f.kappa = r.number("fading.kappa", f.kappa);
    f.mu = r.number("fading.mu", f.mu);
    f.p_ext = r.number("fading.p", f.p_ext);
    f.q_ext = r.number("fading.q", f.q_ext);
    f.r_hat = r.number("fading.r_hat", f.r_hat);
    if (!(f.alpha > 0))
        out_of_range("fading.alpha", "> 0");
    if (!(f.eta > 0))
        out_of_range("fading.eta", "> 0");
    if (!(f.kappa >= 0))
        out_of_range("fading.kappa", ">= 0");
    if (!(f.r_hat > 0))
        out_of_range("fading.r_hat", "> 0");
    if (!(f.mu > 0))
        out_of_range("fading.mu", "> 0");
    if (f.enabled) {
        if (f.p_ext != 1.0 || f.q_ext != 1.0)
            throw Error(ErrorCode::UnsupportedParams, "fading.p and fading.q must be 1 (symmetric construction)");
        bool integer_mu = f.mu >= 1 && std::floor(f.mu) == f.mu;
        if (!integer_mu && f.eta != 1.0)
            throw Error(ErrorCode::UnsupportedParams,
                        "fading.mu must be an integer >= 1 unless fading.eta = 1");
    }
    return f;
}

MisalignmentParams read_misalignment(const Reader& r)
{
    bool has_beam = r.has("misalignment.beam_width") || r.has("misalignment.angular_sigma");
    MisalignmentParams m;
    if (has_beam) {
        double w = r.number("misalignment.beam_width");
        double s = r.number("misalignment.angular_sigma");
        if (!(w > 0))
            out_of_range("misalignment.beam_width", "> 0");
        if (!(s > 0))
            out_of_range("misalignment.angular_sigma", "> 0");
        m = MisalignmentParams::from_beam(w, s);
        if (r.has("misalignment.rho")) {
            double rho = r.number("misalignment.rho");
            if (std::abs(rho - m.rho) > 1e-12 * m.rho)
                out_of_range("misalignment.rho", "sqrt(beam_width^2 / angular_sigma^2)");
        }
        return m;
    }
    m.rho = r.number("misalignment.rho");
    if (!(m.rho > 0))
        out_of_range("misalignment.rho", "> 0");
    return m;
}

ProtocolConfig read_protocol(const Reader& r, std::vector<Scheme>& schemes, std::vector<int>& k_values)
{
    ProtocolConfig p;
    schemes.clear();
    std::stringstream ss(r.text("protocol.schemes", "ftp,atp,optimal"));
    for (std::string item; std::getline(ss, item, ',');) {
        auto name = trim(item);
        if (!name.empty())
            schemes.push_back(parse_scheme(name));
    }
    if (schemes.empty())
        throw Error(ErrorCode::MissingField, "protocol.schemes");
    p.scheme = schemes.front();

    std::uint64_t n_total = r.u64("protocol.n_total", 1);
    if (n_total < 1 || n_total > 1000000)
        out_of_range("protocol.n_total", "1 <= N_total <= 1e6");
    p.n_total = static_cast<int>(n_total);

    // Without an explicit list the single provisioned population is simulated.
    k_values = r.has("protocol.k_values") ? parse_int_list(r.text("protocol.k_values"))
                                          : std::vector<int>{p.n_total};
    for (int k : k_values)
        if (k < 0)
            out_of_range("protocol.k_values", ">= 0");
    p.gamma_qos = r.linear_or_db("protocol.gamma_qos", "protocol.gamma_qos_db").value_or(0.0);
    if (!(p.gamma_qos >= 0))
        out_of_range("protocol.gamma_qos", ">= 0");

    std::string admission = r.text("protocol.admission", "instantaneous");
    if (admission == "fixed")
        p.admission = AdmissionMode::Fixed;
    else if (admission == "instantaneous")
        p.admission = AdmissionMode::Instantaneous;
    else if (admission == "average")
        p.admission = AdmissionMode::Average;
    else
        throw Error(ErrorCode::ParseError, "protocol.admission must be fixed|instantaneous|average");

    std::string energy = r.text("protocol.energy_model", "unit");
    if (energy == "unit")
        p.energy.kind = EnergyModel::Kind::Unit;
    else if (energy == "realistic")
        p.energy.kind = EnergyModel::Kind::Realistic;
    else
        throw Error(ErrorCode::ParseError, "protocol.energy_model must be unit|realistic");
    p.energy.e_tx_uj = r.number("protocol.e_tx_uj", p.energy.e_tx_uj);
    p.energy.e_ack_uj = r.number("protocol.e_ack_uj", p.energy.e_ack_uj);
    p.energy.e_idle_uj = r.number("protocol.e_idle_uj", p.energy.e_idle_uj);
    if (!(p.energy.e_tx_uj >= 0))
        out_of_range("protocol.e_tx_uj", ">= 0");
    if (!(p.energy.e_ack_uj >= 0))
        out_of_range("protocol.e_ack_uj", ">= 0");
    if (!(p.energy.e_idle_uj >= 0))
        out_of_range("protocol.e_idle_uj", ">= 0");

    p.trials = r.u64("protocol.trials", p.trials);
    if (p.trials < 1)
        out_of_range("protocol.trials", ">= 1");
    p.seed = r.u64("protocol.seed", p.seed);
    return p;
}

OutageSettings read_outage(const Reader& r)
{
    OutageSettings o;
    o.gamma_th = r.linear_or_db("outage.gamma_th", "outage.gamma_th_db").value_or(1.0);
    if (!(o.gamma_th > 0))
        out_of_range("outage.gamma_th", "> 0");
    o.grid_db = parse_number_list(r.text("outage.snr_db_grid", "35:5:80"));
    if (o.grid_db.empty())
        throw Error(ErrorCode::MissingField, "outage.snr_db_grid");
    o.samples_per_point = r.u64("outage.samples_per_point", o.samples_per_point);
    if (o.samples_per_point < 1)
        out_of_range("outage.samples_per_point", ">= 1");
    return o;
}

ValidationSettings read_validation(const Reader& r)
{
    ValidationSettings v;
    v.gof_samples = r.u64("validation.gof_samples", v.gof_samples);
    if (v.gof_samples < 1000)
        out_of_range("validation.gof_samples", ">= 1000");
    v.reference_rho_scale = r.number("validation.reference_rho_scale", v.reference_rho_scale);
    if (!(v.reference_rho_scale > 0))
        out_of_range("validation.reference_rho_scale", "> 0");
    v.protocol_trials = r.u64("validation.protocol_trials", v.protocol_trials);
    if (v.protocol_trials < 1)
        out_of_range("validation.protocol_trials", ">= 1");
    if (r.has("validation.protocol_k"))
        v.protocol_k = parse_int_list(r.text("validation.protocol_k"));
    for (int k : v.protocol_k)
        if (k < 1)
            out_of_range("validation.protocol_k", ">= 1");
    v.bound_k_max = static_cast<int>(r.u64("validation.bound_k_max", static_cast<std::uint64_t>(v.bound_k_max)));
    if (v.bound_k_max < 3 || v.bound_k_max > 10000)
        out_of_range("validation.bound_k_max", "3 <= K <= 10000");
    v.slope_enabled = r.flag("validation.slope_enabled", v.slope_enabled);
    v.slope_window_lo_db = r.number("validation.slope_window_lo_db", v.slope_window_lo_db);
    v.slope_window_hi_db = r.number("validation.slope_window_hi_db", v.slope_window_hi_db);
    if (!(v.slope_window_hi_db > v.slope_window_lo_db))
        out_of_range("validation.slope_window_hi_db", "> slope_window_lo_db");
    v.slope_samples = r.u64("validation.slope_samples", v.slope_samples);
    return v;
}

SweepAxes read_sweep(const Reader& r)
{
    SweepAxes s;
    auto numbers = [&](const std::string& key) {
        return r.has(key) ? parse_number_list(r.text(key)) : std::vector<double>{};
    };
    if (r.has("sweep.k"))
        s.k = parse_int_list(r.text("sweep.k"));
    s.avg_snr_db = numbers("sweep.avg_snr_db");
    s.kbeta_db_per_km = numbers("sweep.kbeta_db_per_km");
    s.rho = numbers("sweep.rho");
    s.alpha = numbers("sweep.alpha");
    s.mu = numbers("sweep.mu");
    s.k_h = numbers("sweep.k_h");
    for (int k : s.k)
        if (k < 1)
            out_of_range("sweep.k", ">= 1");
    for (double v : s.kbeta_db_per_km)
        if (!(v > 0))
            out_of_range("sweep.kbeta_db_per_km", "> 0");
    for (double v : s.rho)
        if (!(v > 0))
            out_of_range("sweep.rho", "> 0");
    for (double v : s.alpha)
        if (!(v > 0))
            out_of_range("sweep.alpha", "> 0");
    for (double v : s.mu)
        if (!(v > 0))
            out_of_range("sweep.mu", "> 0");
    for (double v : s.k_h)
        if (!(v >= 0 && v <= std::sqrt(2.0) * kMaxImpairment))
            out_of_range("sweep.k_h", "0 <= k_h <= 0.4*sqrt(2)");
    return s;
}

}  // namespace

double ThzLinkParams::k_h() const
{
    return std::sqrt(k_t * k_t + k_r * k_r);
}

double ThzLinkParams::a_l() const
{
    return kSpeedOfLight * std::sqrt(g_t * g_r) / (4.0 * std::numbers::pi * f_hz * d_m);
}

double GammaAbsorption::z(double d_km) const
{
    return 8.686 / (beta_db_per_km * d_km);
}

bool GammaAbsorption::has_integer_shape() const
{
    return k >= 1.0 && std::floor(k) == k && k < 1e6;
}

int GammaAbsorption::integer_shape() const
{
    if (!has_integer_shape())
        throw Error(ErrorCode::NonIntegerShape,
                    "absorption.k = " + fmt(k) + " must be a positive integer for the closed-form outage");
    return static_cast<int>(k);
}

MisalignmentParams MisalignmentParams::from_beam(double beam_width, double angular_sigma)
{
    MisalignmentParams m;
    m.beam_width = beam_width;
    m.angular_sigma = angular_sigma;
    m.rho = std::sqrt(beam_width * beam_width / (angular_sigma * angular_sigma));
    return m;
}

bool SweepAxes::empty() const
{
    return k.empty() && avg_snr_db.empty() && kbeta_db_per_km.empty() && rho.empty() && alpha.empty() &&
           mu.empty() && k_h.empty();
}

ConfigDocument::ConfigDocument(std::map<std::string, std::string> entries, std::filesystem::path base_dir)
    : entries_(std::move(entries)), base_dir_(std::move(base_dir))
{
}

namespace {

// read_ini only drops whole-line comments; "x = 1 ; note" keeps the tail.
std::string strip_inline_comment(std::string v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if ((v[i] == ';' || v[i] == '#') && std::isspace(static_cast<unsigned char>(v[i - 1]))) {
            v.erase(i);
            break;
        }
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back())))
        v.pop_back();
    return v;
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text, std::filesystem::path base_dir)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::ParseError, e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    std::map<std::string, std::string> entries;
    for (const auto& [section, child] : tree) {
        if (child.empty()) {
            entries[section] = child.data();
            continue;
        }
        for (const auto& [key, value] : child)
            entries[section + "." + key] = strip_inline_comment(value.data());
    }
    for (const auto& [key, value] : entries)
        if (!known_keys().contains(key))
            throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
    return ConfigDocument(std::move(entries), std::move(base_dir));
}

ConfigDocument ConfigDocument::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.parent_path());
}

bool ConfigDocument::has(const std::string& key) const
{
    return entries_.contains(key);
}

const std::string& ConfigDocument::raw(const std::string& key) const
{
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw Error(ErrorCode::MissingField, key);
    return it->second;
}

void ConfigDocument::set(const std::string& key, std::string value)
{
    if (!known_keys().contains(key))
        throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
    entries_[key] = std::move(value);
}

void ConfigDocument::erase(const std::string& key)
{
    entries_.erase(key);
}

ExperimentConfig validate_config(const ConfigDocument& doc)
{
    Reader r(doc);
    ExperimentConfig cfg;
    cfg.link = read_link(r);
    cfg.absorption = read_absorption(r);
    cfg.fading = read_fading(r);
    cfg.misalignment = read_misalignment(r);
    cfg.protocol = read_protocol(r, cfg.schemes, cfg.k_values);
    cfg.outage = read_outage(r);
    cfg.validation = read_validation(r);
    cfg.sweep = read_sweep(r);
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg)
{
    std::ostringstream out;
    auto list = [](const auto& values) {
        std::string s;
        for (const auto& v : values) {
            if (!s.empty())
                s += ",";
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>)
                s += fmt(v);
            else
                s += std::to_string(v);
        }
        return s;
    };
    const auto& l = cfg.link;
    out << "[link]\n"
        << "f_hz = " << fmt(l.f_hz) << "\n"
        << "d_m = " << fmt(l.d_m) << "\n"
        << "g_t = " << fmt(l.g_t) << "\n"
        << "g_r = " << fmt(l.g_r) << "\n"
        << "temperature_k = " << fmt(l.temperature_k) << "\n"
        << "humidity_pct = " << fmt(l.humidity_pct) << "\n"
        << "pressure = " << fmt(l.pressure_hpa) << "\n"
        << "pressure_unit = hPa\n"
        << "k_t = " << fmt(l.k_t) << "\n"
        << "k_r = " << fmt(l.k_r) << "\n"
        << "avg_snr = " << fmt(l.avg_snr) << "\n\n";

    out << "[absorption]\n";
    if (const auto* g = std::get_if<GammaAbsorption>(&cfg.absorption)) {
        out << "model = gamma\n"
            << "k = " << fmt(g->k) << "\n"
            << "beta_db_per_km = " << fmt(g->beta_db_per_km) << "\n\n";
    }
    else {
        const auto& d = std::get<DeterministicAbsorption>(cfg.absorption);
        out << "model = deterministic\n"
            << "profile = " << d.source.string() << "\n\n";
    }

    const auto& f = cfg.fading;
    out << "[fading]\n"
        << "enabled = " << (f.enabled ? "true" : "false") << "\n"
        << "alpha = " << fmt(f.alpha) << "\n"
        << "eta = " << fmt(f.eta) << "\n"
        << "kappa = " << fmt(f.kappa) << "\n"
        << "mu = " << fmt(f.mu) << "\n"
        << "p = " << fmt(f.p_ext) << "\n"
        << "q = " << fmt(f.q_ext) << "\n"
        << "r_hat = " << fmt(f.r_hat) << "\n\n";

    out << "[misalignment]\n";
    if (cfg.misalignment.beam_width && cfg.misalignment.angular_sigma)
        out << "beam_width = " << fmt(*cfg.misalignment.beam_width) << "\n"
            << "angular_sigma = " << fmt(*cfg.misalignment.angular_sigma) << "\n\n";
    else
        out << "rho = " << fmt(cfg.misalignment.rho) << "\n\n";

    const auto& p = cfg.protocol;
    std::vector<std::string> scheme_names;
    for (Scheme s : cfg.schemes)
        scheme_names.emplace_back(to_string(s));
    std::string schemes;
    for (const auto& s : scheme_names)
        schemes += (schemes.empty() ? "" : ",") + s;
    out << "[protocol]\n"
        << "schemes = " << schemes << "\n"
        << "n_total = " << p.n_total << "\n"
        << "gamma_qos = " << fmt(p.gamma_qos) << "\n"
        << "admission = "
        << (p.admission == AdmissionMode::Fixed           ? "fixed"
            : p.admission == AdmissionMode::Instantaneous ? "instantaneous"
                                                          : "average")
        << "\n"
        << "energy_model = " << (p.energy.kind == EnergyModel::Kind::Unit ? "unit" : "realistic") << "\n"
        << "e_tx_uj = " << fmt(p.energy.e_tx_uj) << "\n"
        << "e_ack_uj = " << fmt(p.energy.e_ack_uj) << "\n"
        << "e_idle_uj = " << fmt(p.energy.e_idle_uj) << "\n"
        << "trials = " << p.trials << "\n"
        << "seed = " << p.seed << "\n";
    if (!cfg.k_values.empty())
        out << "k_values = " << list(cfg.k_values) << "\n";
    out << "\n";

    out << "[outage]\n"
        << "gamma_th = " << fmt(cfg.outage.gamma_th) << "\n"
        << "snr_db_grid = " << list(cfg.outage.grid_db) << "\n"
        << "samples_per_point = " << cfg.outage.samples_per_point << "\n\n";

    const auto& v = cfg.validation;
    out << "[validation]\n"
        << "gof_samples = " << v.gof_samples << "\n"
        << "reference_rho_scale = " << fmt(v.reference_rho_scale) << "\n"
        << "protocol_trials = " << v.protocol_trials << "\n"
        << "protocol_k = " << list(v.protocol_k) << "\n"
        << "bound_k_max = " << v.bound_k_max << "\n"
        << "slope_enabled = " << (v.slope_enabled ? "true" : "false") << "\n"
        << "slope_window_lo_db = " << fmt(v.slope_window_lo_db) << "\n"
        << "slope_window_hi_db = " << fmt(v.slope_window_hi_db) << "\n"
        << "slope_samples = " << v.slope_samples << "\n";

    const auto& s = cfg.sweep;
    if (!s.empty()) {
        out << "\n[sweep]\n";
        if (!s.k.empty())
            out << "k = " << list(s.k) << "\n";
        if (!s.avg_snr_db.empty())
            out << "avg_snr_db = " << list(s.avg_snr_db) << "\n";
        if (!s.kbeta_db_per_km.empty())
            out << "kbeta_db_per_km = " << list(s.kbeta_db_per_km) << "\n";
        if (!s.rho.empty())
            out << "rho = " << list(s.rho) << "\n";
        if (!s.alpha.empty())
            out << "alpha = " << list(s.alpha) << "\n";
        if (!s.mu.empty())
            out << "mu = " << list(s.mu) << "\n";
        if (!s.k_h.empty())
            out << "k_h = " << list(s.k_h) << "\n";
    }
    return out.str();
}

AbsorptionProfile parse_absorption_profile(const std::string& text)
{
    AbsorptionProfile profile;
    std::istringstream lines(text);
    std::ostringstream body;
    bool have_units = false;
    for (std::string line; std::getline(lines, line);) {
        std::string t = trim(line);
        if (t.rfind("# units:", 0) == 0) {
            profile.units = trim(t.substr(8));
            have_units = true;
            continue;
        }
        body << line << "\n";
    }
    if (!have_units)
        throw Error(ErrorCode::ProfileMissing, "absorption profile lacks a '# units:' header");

    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(body.str());
    try {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::ParseError, "absorption profile: " + e.message());
    }
    auto get = [&](const std::string& key) {
        auto value = tree.get_optional<std::string>(key);
        if (!value)
            throw Error(ErrorCode::ProfileMissing, "absorption profile key '" + key + "'");
        return parse_double("profile." + key, strip_inline_comment(*value));
    };
    for (int i = 0; i < 10; ++i)
        profile.q[static_cast<std::size_t>(i)] = get("q" + std::to_string(i + 1));
    profile.p1 = get("p1");
    profile.p2 = get("p2");
    for (int i = 0; i < 4; ++i)
        profile.c[static_cast<std::size_t>(i)] = get("c" + std::to_string(i + 1));
    return profile;
}

AbsorptionProfile load_absorption_profile(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ProfileMissing, "cannot open absorption profile '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_absorption_profile(buffer.str());
}

std::string_view to_string(Scheme scheme)
{
    switch (scheme) {
    case Scheme::Ftp: return "ftp";
    case Scheme::Atp: return "atp";
    case Scheme::Optimal: return "optimal";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name)
{
    std::string n(name);
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (n == "ftp")
        return Scheme::Ftp;
    if (n == "atp")
        return Scheme::Atp;
    if (n == "optimal")
        return Scheme::Optimal;
    throw Error(ErrorCode::ParseError, "unknown scheme '" + std::string(name) + "'");
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

std::vector<double> parse_number_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        std::string t = trim(item);
        if (t.empty())
            continue;
        if (auto pos = t.find(".."); pos != std::string::npos) {
            double lo = parse_double("list", t.substr(0, pos));
            double hi = parse_double("list", t.substr(pos + 2));
            for (double v = lo; v <= hi + 1e-9; v += 1.0)
                out.push_back(v);
            continue;
        }
        auto first = t.find(':');
        if (first != std::string::npos) {
            auto second = t.find(':', first + 1);
            if (second == std::string::npos)
                throw Error(ErrorCode::ParseError, "range '" + t + "' must be lo:step:hi");
            double lo = parse_double("list", t.substr(0, first));
            double step = parse_double("list", t.substr(first + 1, second - first - 1));
            double hi = parse_double("list", t.substr(second + 1));
            if (!(step > 0))
                throw Error(ErrorCode::ParseError, "range step must be > 0 in '" + t + "'");
            auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
            for (long i = 0; i <= count; ++i)
                out.push_back(lo + static_cast<double>(i) * step);
            continue;
        }
        out.push_back(parse_double("list", t));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    for (double v : parse_number_list(text)) {
        if (std::floor(v) != v)
            throw Error(ErrorCode::ParseError, "expected integers in '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

}  // namespace thzra
