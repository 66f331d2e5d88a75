#include "thzra/app/commands.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "thzra/analytics.hpp"
#include "thzra/app/csv.hpp"
#include "thzra/channel.hpp"
#include "thzra/error.hpp"
#include "thzra/protocol.hpp"
#include "thzra/validation.hpp"

namespace thzra::app {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v)
{
    return format_number(v);
}

std::string num(std::uint64_t v)
{
    return std::to_string(v);
}

std::string num(int v)
{
    return std::to_string(v);
}

class Output
{
  public:
    Output(const CommandOptions& opts, std::string command, std::uint64_t seed) : dir_(opts.out_dir)
    {
        fs::create_directories(dir_);
        manifest_.command = std::move(command);
        manifest_.config_path = fs::absolute(opts.config).lexically_normal().string();
        manifest_.seed = seed;
        manifest_.out_dir = fs::absolute(dir_).lexically_normal().string();
    }

    void write(const std::string& name, const std::string& content)
    {
        write_atomic(dir_ / name, content);
        manifest_.files.push_back(name);
    }

    RunManifest& manifest() { return manifest_; }
    const fs::path& dir() const { return dir_; }

    RunManifest finish()
    {
        write_manifest(manifest_, dir_ / "manifest.json");
        return manifest_;
    }

  private:
    fs::path dir_;
    RunManifest manifest_;
};

std::uint64_t effective_seed(const CommandOptions& opts, const ExperimentConfig& cfg)
{
    return opts.seed.value_or(cfg.protocol.seed);
}

json stats_json(const AggregateStats& s)
{
    auto ms = [](const MeanStat& m) { return json{{"mean", m.mean}, {"std_err", m.std_err}}; };
    return json{{"n_trials", s.n_trials},         {"delay", ms(s.delay)},
                {"energy_units", ms(s.energy_units)}, {"energy_uJ", ms(s.energy_uj)},
                {"transmissions", ms(s.transmissions)}, {"admitted", ms(s.admitted)}};
}

std::vector<std::string> aggregate_header()
{
    return {"K",
            "scheme",
            "n_trials",
            "mean_admitted",
            "mean_delay",
            "stderr_delay",
            "mean_energy_units",
            "stderr_energy_units",
            "mean_energy_uJ",
            "stderr_energy_uJ",
            "mean_transmissions",
            "stderr_transmissions"};
}

std::vector<std::string> aggregate_row(int K, Scheme scheme, const AggregateStats& s)
{
    return {num(K),
            std::string(to_string(scheme)),
            num(s.n_trials),
            num(s.admitted.mean),
            num(s.delay.mean),
            num(s.delay.std_err),
            num(s.energy_units.mean),
            num(s.energy_units.std_err),
            num(s.energy_uj.mean),
            num(s.energy_uj.std_err),
            num(s.transmissions.mean),
            num(s.transmissions.std_err)};
}

bool closed_form_applicable(const ExperimentConfig& cfg)
{
    const auto* g = std::get_if<GammaAbsorption>(&cfg.absorption);
    return g && !cfg.fading.enabled && g->has_integer_shape() &&
           std::abs(g->z(cfg.link.d_km()) - cfg.misalignment.rho) >= 1e-6;
}

}  // namespace

ExperimentConfig load_experiment(const CommandOptions& opts)
{
    auto doc = ConfigDocument::load(opts.config);
    if (opts.trials) {
        doc.set("protocol.trials", std::to_string(*opts.trials));
        doc.set("validation.protocol_trials", std::to_string(*opts.trials));
    }
    if (opts.seed)
        doc.set("protocol.seed", std::to_string(*opts.seed));
    return validate_config(doc);
}

CommandResult cmd_simulate(const CommandOptions& opts, std::ostream& log)
{
    auto t0 = Clock::now();
    ExperimentConfig cfg = load_experiment(opts);
    std::uint64_t seed = effective_seed(opts, cfg);
    Output out(opts, "simulate", seed);
    out.write("config.resolved.ini", serialize_config(cfg));

    ChannelModel channel(cfg.link, cfg.absorption, cfg.fading, cfg.misalignment);
    CsvWriter aggregate("simulate_aggregate", aggregate_header());
    CsvWriter trials("simulate_trials", {"trial_id", "K", "scheme", "K_admitted", "total_slots",
                                         "total_transmissions", "energy_units", "energy_uJ"});
    json stats = json::array();
    auto t_sim = Clock::now();
    for (int K : cfg.k_values) {
        for (Scheme scheme : cfg.schemes) {
            ProtocolConfig p = cfg.protocol;
            p.scheme = scheme;
            p.seed = seed;
            auto batch = run_batch(p, K, &channel);
            aggregate.row(aggregate_row(K, scheme, batch.stats));
            for (const auto& t : batch.trials)
                trials.row({num(t.trial), num(K), std::string(to_string(scheme)), num(t.k_admitted),
                            num(t.total_slots), num(t.total_transmissions), num(t.energy_units),
                            num(t.energy_uj)});
            json entry = stats_json(batch.stats);
            entry["K"] = K;
            entry["scheme"] = to_string(scheme);
            stats.push_back(entry);
            log << "K=" << K << " " << to_string(scheme) << " delay=" << batch.stats.delay.mean
                << " energy=" << batch.stats.energy_units.mean << "\n";
        }
    }
    out.manifest().timings_s["simulate"] = seconds_since(t_sim);
    out.write("aggregate.csv", aggregate.str());
    out.write("trials.csv", trials.str());
    out.write("aggregate.json", stats.dump(2) + "\n");
    out.manifest().timings_s["total"] = seconds_since(t0);
    return {0, out.finish()};
}

CommandResult cmd_analyze(const CommandOptions& opts, std::ostream& log)
{
    auto t0 = Clock::now();
    ExperimentConfig cfg = load_experiment(opts);
    Output out(opts, "analyze", effective_seed(opts, cfg));
    out.write("config.resolved.ini", serialize_config(cfg));

    CsvWriter de("analyze_delay_energy",
                 {"K", "d_ftp", "d_ftp_lo", "d_ftp_hi", "d_atp", "d_atp_lo", "d_atp_hi", "e_ftp", "e_ftp_lo",
                  "e_ftp_hi", "e_atp", "e_atp_lo", "e_atp_hi", "d_opt", "e_opt"});
    for (int K : cfg.k_values) {
        if (K < 1)
            continue;
        auto dfr = delay_report(Scheme::Ftp, K);
        auto dar = delay_report(Scheme::Atp, K);
        auto efr = energy_report(Scheme::Ftp, K);
        auto ear = energy_report(Scheme::Atp, K);
        de.row({num(K), num(dfr.exact), num(dfr.bounds.lower), num(dfr.bounds.upper), num(dar.exact),
                num(dar.bounds.lower), num(dar.bounds.upper), num(efr.exact), num(efr.bounds.lower),
                num(efr.bounds.upper), num(ear.exact), num(ear.bounds.lower), num(ear.bounds.upper), num(K),
                num(K)});
    }
    out.write("delay_energy.csv", de.str());

    if (const auto* g = std::get_if<GammaAbsorption>(&cfg.absorption)) {
        CsvWriter outage("analyze_outage", {"gamma_bar_db", "p_out", "pdf_at_threshold", "ceiling"});
        for (double db : cfg.outage.grid_db) {
            OutageQuery q{cfg.outage.gamma_th, db_to_linear(db), cfg.link.k_h()};
            auto r = outage_probability(q, *g, cfg.misalignment.rho, cfg.link);
            double pdf = pdf_snr_no_fading(q, *g, cfg.misalignment.rho, cfg.link);
            outage.row({num(db), num(r.probability), num(pdf), r.ceiling ? "1" : "0"});
        }
        out.write("outage.csv", outage.str());

        double z = g->z(cfg.link.d_km());
        auto d = diversity_order(cfg.fading.alpha, cfg.fading.mu, cfg.misalignment.rho, z);
        CsvWriter div("analyze_diversity",
                      {"alpha", "mu", "rho", "z", "order_fading", "order_misalignment", "order_absorption",
                       "effective"});
        div.row({num(cfg.fading.alpha), num(cfg.fading.mu), num(cfg.misalignment.rho), num(z),
                 num(d.exponents[0]), num(d.exponents[1]), num(d.exponents[2]), num(d.effective)});
        out.write("diversity.csv", div.str());
    }
    else {
        out.manifest().note = "deterministic absorption: no closed-form outage or absorption exponent";
        log << out.manifest().note << "\n";
    }
    out.manifest().timings_s["total"] = seconds_since(t0);
    return {0, out.finish()};
}

CommandResult cmd_validate(const CommandOptions& opts, std::ostream& log)
{
    auto t0 = Clock::now();
    ExperimentConfig cfg = load_experiment(opts);
    std::uint64_t seed = effective_seed(opts, cfg);
    Output out(opts, "validate", seed);
    out.write("config.resolved.ini", serialize_config(cfg));

    auto report = run_validation(cfg, seed);
    json suites = json::array();
    std::ostringstream table;
    table << std::left << std::setw(22) << "suite" << std::setw(8) << "result" << "metrics\n";
    for (const auto& s : report.suites) {
        json j{{"name", s.name}, {"pass", s.pass}, {"skipped", s.skipped}, {"metrics", s.metrics}};
        if (!s.detail.empty())
            j["detail"] = s.detail;
        suites.push_back(j);
        table << std::setw(22) << s.name << std::setw(8) << (s.skipped ? "skip" : s.pass ? "PASS" : "FAIL");
        for (const auto& [k, v] : s.metrics)
            table << k << "=" << format_number(v) << " ";
        if (!s.detail.empty())
            table << "(" << s.detail << ")";
        table << "\n";
    }
    json doc{{"pass", report.pass()}, {"seed", seed}, {"suites", suites}};
    out.write("validation.json", doc.dump(2) + "\n");
    out.write("validation.txt", table.str());
    log << table.str();
    out.manifest().timings_s["total"] = seconds_since(t0);
    return {report.pass() ? 0 : 1, out.finish()};
}

namespace {

struct Cell
{
    std::vector<std::pair<std::string, double>> params;
    std::string file;
};

std::vector<Cell> enumerate_cells(const SweepAxes& s)
{
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    if (!s.k.empty())
        axes.emplace_back("k", std::vector<double>(s.k.begin(), s.k.end()));
    auto add = [&](const char* name, const std::vector<double>& v) {
        if (!v.empty())
            axes.emplace_back(name, v);
    };
    add("avg_snr_db", s.avg_snr_db);
    add("kbeta_db_per_km", s.kbeta_db_per_km);
    add("rho", s.rho);
    add("alpha", s.alpha);
    add("mu", s.mu);
    add("k_h", s.k_h);

    std::vector<Cell> cells(1);
    for (const auto& [name, values] : axes) {
        std::vector<Cell> next;
        for (const auto& c : cells)
            for (double v : values) {
                Cell n = c;
                n.params.emplace_back(name, v);
                next.push_back(std::move(n));
            }
        cells = std::move(next);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::ostringstream name;
        name << "cell_" << std::setw(4) << std::setfill('0') << i << ".csv";
        cells[i].file = name.str();
    }
    return cells;
}

// Cell-specific configuration; K (if swept) is returned separately.
ExperimentConfig apply_cell(ExperimentConfig cfg, const Cell& cell, std::optional<int>& K)
{
    for (const auto& [name, v] : cell.params) {
        if (name == "k") {
            K = static_cast<int>(v);
        }
        else if (name == "avg_snr_db") {
            cfg.link.avg_snr = db_to_linear(v);
            cfg.outage.grid_db = {v};
        }
        else if (name == "kbeta_db_per_km") {
            auto* g = std::get_if<GammaAbsorption>(&cfg.absorption);
            if (!g)
                throw Error(ErrorCode::UnsupportedParams, "sweep.kbeta_db_per_km needs absorption.model = gamma");
            g->beta_db_per_km = v / g->k;
        }
        else if (name == "rho") {
            cfg.misalignment = MisalignmentParams{};
            cfg.misalignment.rho = v;
        }
        else if (name == "alpha") {
            cfg.fading.alpha = v;
        }
        else if (name == "mu") {
            cfg.fading.mu = v;
            bool integer = v >= 1.0 && std::floor(v) == v;
            if (cfg.fading.enabled && !integer && cfg.fading.eta != 1.0)
                throw Error(ErrorCode::UnsupportedParams, "sweep.mu: non-integer mu requires fading.eta = 1");
        }
        else if (name == "k_h") {
            cfg.link.k_t = cfg.link.k_r = v / std::sqrt(2.0);
        }
    }
    return cfg;
}

std::string run_cell(const ExperimentConfig& cfg, std::optional<int> K, std::uint64_t seed)
{
    ChannelModel channel(cfg.link, cfg.absorption, cfg.fading, cfg.misalignment);
    if (K) {
        CsvWriter csv("sweep_protocol", aggregate_header());
        for (Scheme scheme : cfg.schemes) {
            ProtocolConfig p = cfg.protocol;
            p.scheme = scheme;
            p.seed = seed;
            csv.row(aggregate_row(*K, scheme, run_batch(p, *K, &channel).stats));
        }
        return csv.str();
    }
    CsvWriter csv("sweep_outage", {"gamma_bar_db", "n", "outages", "p_out_mc", "ci_lo", "ci_hi", "p_out_closed"});
    auto curve = outage_mc(channel, cfg.outage.gamma_th, cfg.outage.grid_db, cfg.outage.samples_per_point, seed);
    bool closed = closed_form_applicable(cfg);
    for (const auto& pt : curve) {
        std::string exact;
        if (closed) {
            OutageQuery q{cfg.outage.gamma_th, db_to_linear(pt.gamma_bar_db), cfg.link.k_h()};
            exact = num(cdf_snr_no_fading(q, std::get<GammaAbsorption>(cfg.absorption), cfg.misalignment.rho,
                                          cfg.link)
                            .probability);
        }
        csv.row({num(pt.gamma_bar_db), num(pt.n), num(pt.outages), num(pt.p_hat), num(pt.ci_lo), num(pt.ci_hi),
                 exact});
    }
    return csv.str();
}

}  // namespace

CommandResult cmd_sweep(const CommandOptions& opts, std::ostream& log)
{
    auto t0 = Clock::now();
    ExperimentConfig cfg = load_experiment(opts);
    if (cfg.sweep.empty())
        throw Error(ErrorCode::MissingField, "sweep: no axes declared (sweep.k, sweep.rho, ...)");
    std::uint64_t seed = effective_seed(opts, cfg);
    Output out(opts, "sweep", seed);
    out.write("config.resolved.ini", serialize_config(cfg));

    auto cells = enumerate_cells(cfg.sweep);
    std::vector<std::string> header{"cell", "file"};
    for (const auto& [name, v] : cells.front().params)
        header.push_back(name);
    CsvWriter index("sweep_index", header);
    std::vector<std::pair<ExperimentConfig, std::optional<int>>> resolved;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::vector<std::string> row{num(static_cast<std::uint64_t>(i)), cells[i].file};
        for (const auto& [name, v] : cells[i].params)
            row.push_back(num(v));
        index.row(row);
        std::optional<int> K;
        // Resolve every cell first so a bad axis value fails before any work.
        resolved.emplace_back(apply_cell(cfg, cells[i], K), K);
    }
    out.write("cells.csv", index.str());

    std::uint64_t fresh = 0, reused = 0;
    bool partial = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& cell = cells[i];
        if (fs::exists(out.dir() / cell.file)) {
            out.manifest().files.push_back(cell.file);
            ++reused;
            continue;
        }
        if (opts.max_cells && fresh >= *opts.max_cells) {
            partial = true;
            continue;
        }
        auto tc = Clock::now();
        out.write(cell.file, run_cell(resolved[i].first, resolved[i].second, seed));
        out.manifest().timings_s[cell.file] = seconds_since(tc);
        ++fresh;
        log << cell.file << " done\n";
    }
    if (partial) {
        out.manifest().status = "partial";
        out.manifest().note = std::string(to_string(ErrorCode::PartialRun)) + ": " +
                              std::to_string(cells.size() - fresh - reused) + " cells pending; rerun to resume";
        log << out.manifest().note << "\n";
    }
    out.manifest().timings_s["total"] = seconds_since(t0);
    log << fresh << " computed, " << reused << " reused, " << cells.size() << " total\n";
    return {0, out.finish()};
}

}  // namespace thzra::app
