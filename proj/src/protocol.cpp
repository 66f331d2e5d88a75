#include "thzra/protocol.hpp"

#include <cmath>
#include <numeric>

#include "thzra/error.hpp"
#include "thzra/parallel.hpp"

namespace thzra {

Admission admit_users(const ProtocolConfig& cfg, int population, const ChannelModel& channel, std::uint64_t trial)
{
    Admission a;
    if (cfg.admission == AdmissionMode::Fixed) {
        a.ids.resize(static_cast<std::size_t>(population));
        std::iota(a.ids.begin(), a.ids.end(), 0);
        a.k = population;
        return a;
    }
    auto streams = ChannelStreams::make(cfg.seed, trial);
    const auto& link = channel.link();
    for (int i = 0; i < population; ++i) {
        double gamma;
        if (cfg.admission == AdmissionMode::Instantaneous) {
            gamma = channel.draw(streams).gamma;
        }
        else {
            // Average-SNR estimate: short-term fading and pointing error
            // replaced by their mean powers, only the path loss is drawn.
            ChannelDraw d = channel.draw_gain(streams);
            double h2 = d.h_l * d.h_l * channel.mean_misalignment_power();
            gamma = impaired_snr(std::sqrt(h2), link.avg_snr, channel.k_h());
        }
        if (gamma > cfg.gamma_qos)
            a.ids.push_back(i);
    }
    a.k = static_cast<int>(a.ids.size());
    return a;
}

FrameTrace run_frame(Scheme scheme, int K, Engine& access, bool record_slots)
{
    FrameTrace t;
    t.scheme = scheme;
    t.k_admitted = K;
    if (K <= 0)
        return t;

    if (scheme == Scheme::Optimal) {
        // Scheduled slots: one user per slot, the others sleep.
        for (int i = 0; i < K; ++i)
            if (record_slots)
                t.slots.push_back({SlotKind::Success, i, 1, K - i, 1.0});
        t.total_slots = t.total_transmissions = t.successes = static_cast<std::uint64_t>(K);
        return t;
    }

    std::vector<int> pool(static_cast<std::size_t>(K));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::size_t> sent;
    const double p_fixed = 1.0 / K;
    while (!pool.empty()) {
        double p = scheme == Scheme::Ftp ? p_fixed : 1.0 / static_cast<double>(pool.size());
        sent.clear();
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (open_uniform(access) < p)
                sent.push_back(i);
        auto holders = static_cast<int>(pool.size());
        auto m = static_cast<int>(sent.size());
        SlotOutcome s{SlotKind::Idle, -1, m, holders, p};
        if (m == 1) {
            s.kind = SlotKind::Success;
            s.user = pool[sent.front()];
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(sent.front()));
            ++t.successes;
        }
        else if (m > 1) {
            s.kind = SlotKind::Collision;
        }
        ++t.total_slots;
        t.total_transmissions += static_cast<std::uint64_t>(m);
        t.idle_holder_slots += static_cast<std::uint64_t>(holders - m);
        if (record_slots)
            t.slots.push_back(s);
    }
    return t;
}

FrameEnergy account_energy(const FrameTrace& trace, const EnergyModel& model)
{
    FrameEnergy e;
    e.units = static_cast<double>(trace.total_transmissions);
    e.uj = model.e_tx_uj * static_cast<double>(trace.total_transmissions) +
           model.e_ack_uj * static_cast<double>(trace.successes) +
           model.e_idle_uj * static_cast<double>(trace.idle_holder_slots);
    return e;
}

MeanStat mean_and_stderr(const std::vector<double>& values)
{
    MeanStat s;
    if (values.empty())
        return s;
    double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.std_err = std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

BatchResult run_batch(const ProtocolConfig& cfg, int population, const ChannelModel* channel,
                      std::uint64_t first_trial)
{
    if (cfg.trials < 1)
        throw Error(ErrorCode::OutOfRange, "protocol.trials must satisfy >= 1");
    if (cfg.admission != AdmissionMode::Fixed && channel == nullptr)
        throw Error(ErrorCode::MissingField, "channel model required for SNR admission");

    BatchResult out;
    out.trials.resize(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t i) {
        std::uint64_t trial = first_trial + i;
        int k = population;
        if (cfg.admission != AdmissionMode::Fixed)
            k = admit_users(cfg, population, *channel, trial).k;
        Engine access = make_stream(cfg.seed, trial, RngComponent::Access);
        FrameTrace t = run_frame(cfg.scheme, k, access);
        FrameEnergy e = account_energy(t, cfg.energy);
        out.trials[i] = {trial, k, t.total_slots, t.total_transmissions, e.units, e.uj};
    });

    std::vector<double> delay, units, uj, tx, admitted;
    for (const auto& r : out.trials) {
        delay.push_back(static_cast<double>(r.total_slots));
        units.push_back(r.energy_units);
        uj.push_back(r.energy_uj);
        tx.push_back(static_cast<double>(r.total_transmissions));
        admitted.push_back(r.k_admitted);
    }
    auto& s = out.stats;
    s.n_trials = cfg.trials;
    s.delay = mean_and_stderr(delay);
    s.energy_units = mean_and_stderr(units);
    s.energy_uj = mean_and_stderr(uj);
    s.transmissions = mean_and_stderr(tx);
    s.admitted = mean_and_stderr(admitted);
    return out;
}

}  // namespace thzra
