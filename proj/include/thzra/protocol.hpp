#pragma once

#include <cstdint>
#include <vector>

#include "thzra/channel.hpp"
#include "thzra/config.hpp"
#include "thzra/rng.hpp"

namespace thzra {

enum class SlotKind { Idle, Success, Collision };

struct SlotOutcome
{
    SlotKind kind = SlotKind::Idle;
    int user = -1;         // Success only
    int transmitters = 0;
    int holders = 0;       // users still holding a packet at slot start
    double p = 0.0;        // per-user transmission probability in this slot
};

struct FrameTrace
{
    Scheme scheme = Scheme::Atp;
    int k_admitted = 0;
    std::vector<SlotOutcome> slots;  // empty unless recorded
    std::uint64_t total_slots = 0;
    std::uint64_t total_transmissions = 0;
    std::uint64_t successes = 0;
    std::uint64_t idle_holder_slots = 0;  // Σ (holders - transmitters), charged idle energy
};

struct FrameEnergy
{
    double units = 0.0;
    double uj = 0.0;
};

struct Admission
{
    int k = 0;
    std::vector<int> ids;
};

/// Channels are re-drawn for every frame (trial).
Admission admit_users(const ProtocolConfig& cfg, int population, const ChannelModel& channel, std::uint64_t trial);

FrameTrace run_frame(Scheme scheme, int K, Engine& access, bool record_slots = false);

FrameEnergy account_energy(const FrameTrace& trace, const EnergyModel& model);

struct TrialResult
{
    std::uint64_t trial = 0;
    int k_admitted = 0;
    std::uint64_t total_slots = 0;
    std::uint64_t total_transmissions = 0;
    double energy_units = 0.0;
    double energy_uj = 0.0;
};

struct MeanStat
{
    double mean = 0.0;
    double std_err = 0.0;
};

struct AggregateStats
{
    std::uint64_t n_trials = 0;
    MeanStat delay;
    MeanStat energy_units;
    MeanStat energy_uj;
    MeanStat transmissions;
    MeanStat admitted;
};

MeanStat mean_and_stderr(const std::vector<double>& values);

struct BatchResult
{
    AggregateStats stats;
    std::vector<TrialResult> trials;
};

/// cfg.trials independent frames for `population` provisioned users.
/// Trial i uses streams (cfg.seed, first_trial + i); results do not depend
/// on the worker count. `channel` may be null for fixed admission.
BatchResult run_batch(const ProtocolConfig& cfg, int population, const ChannelModel* channel,
                      std::uint64_t first_trial = 0);

}  // namespace thzra
