#include <cmath>
#include <set>

#include "doctest.h"
#include "thzra/analytics.hpp"
#include "thzra/protocol.hpp"

using namespace thzra;

namespace {

ProtocolConfig fixed(Scheme scheme, std::uint64_t trials, std::uint64_t seed = 1)
{
    ProtocolConfig p;
    p.scheme = scheme;
    p.trials = trials;
    p.seed = seed;
    p.admission = AdmissionMode::Fixed;
    return p;
}

ThzLinkParams link_100m()
{
    ThzLinkParams l;
    l.f_hz = 3e11;
    l.d_m = 100;
    l.g_t = l.g_r = std::pow(10.0, 4.5);
    l.avg_snr = db_to_linear(45);
    return l;
}

}  // namespace

TEST_SUITE("protocol")
{
    TEST_CASE("trivial frames")
    {
        for (Scheme s : {Scheme::Ftp, Scheme::Atp, Scheme::Optimal}) {
            Engine eng = make_stream(1, 0, RngComponent::Access);
            auto t = run_frame(s, 1, eng, true);
            REQUIRE(t.slots.size() == 1);
            CHECK(t.slots[0].kind == SlotKind::Success);
            CHECK(t.total_slots == 1);
            CHECK(t.total_transmissions == 1);
            auto empty = run_frame(s, 0, eng, true);
            CHECK(empty.slots.empty());
            CHECK(empty.total_slots == 0);
            CHECK(account_energy(empty, EnergyModel{}).uj == 0.0);
        }
    }

    TEST_CASE("trace invariants")
    {
        for (Scheme s : {Scheme::Ftp, Scheme::Atp, Scheme::Optimal})
            for (int K : {2, 3, 7, 25}) {
                for (std::uint64_t trial = 0; trial < 200; ++trial) {
                    Engine eng = make_stream(9, trial, RngComponent::Access);
                    auto t = run_frame(s, K, eng, true);
                    std::set<int> done;
                    std::uint64_t tx = 0, idle = 0;
                    int holders = K;
                    for (const auto& slot : t.slots) {
                        REQUIRE(slot.holders == holders);
                        if (s == Scheme::Ftp)
                            REQUIRE(slot.p == 1.0 / K);
                        if (s == Scheme::Atp)
                            REQUIRE(slot.p == 1.0 / holders);
                        tx += static_cast<std::uint64_t>(slot.transmitters);
                        idle += static_cast<std::uint64_t>(slot.holders - slot.transmitters);
                        if (slot.kind == SlotKind::Success) {
                            REQUIRE(slot.transmitters == 1);
                            REQUIRE(done.insert(slot.user).second);
                            --holders;
                        }
                        else if (slot.kind == SlotKind::Collision) {
                            REQUIRE(slot.transmitters >= 2);
                        }
                        else {
                            REQUIRE(slot.transmitters == 0);
                        }
                    }
                    REQUIRE(static_cast<int>(done.size()) == K);
                    REQUIRE(t.successes == static_cast<std::uint64_t>(K));
                    REQUIRE(t.total_transmissions == tx);
                    REQUIRE(t.total_slots == t.slots.size());
                    REQUIRE(t.total_slots >= static_cast<std::uint64_t>(K));
                    REQUIRE(t.total_transmissions >= static_cast<std::uint64_t>(K));
                    if (s == Scheme::Optimal) {
                        REQUIRE(t.total_slots == static_cast<std::uint64_t>(K));
                        REQUIRE(t.total_transmissions == static_cast<std::uint64_t>(K));
                    }
                    else {
                        REQUIRE(t.idle_holder_slots == idle);
                    }
                }
            }
    }

    TEST_CASE("energy accounting")
    {
        Engine eng = make_stream(1, 0, RngComponent::Access);
        EnergyModel m;
        auto one = account_energy(run_frame(Scheme::Atp, 1, eng), m);
        CHECK(one.units == 1.0);
        CHECK(one.uj == 1320.0);
        auto opt = account_energy(run_frame(Scheme::Optimal, 17, eng), m);
        CHECK(opt.uj == 17 * 1320.0);

        FrameTrace t;
        t.total_transmissions = 9;
        t.successes = 3;
        t.idle_holder_slots = 5;
        auto e = account_energy(t, m);
        CHECK(e.units == 9.0);
        CHECK(e.uj == 9 * 1200.0 + 3 * 120.0 + 5 * 40.0);
    }

    TEST_CASE("collision and inter-success counts")
    {
        const int k = 3;
        const double p = 1.0 / k;
        Engine eng = make_stream(77, 0, RngComponent::Access);
        double colliding = 0.0;
        double slots = 0.0;
        double successes = 0.0;
        const int n = 400000;
        for (int i = 0; i < n; ++i) {
            int m = 0;
            for (int u = 0; u < k; ++u)
                m += open_uniform(eng) < p;
            colliding += m >= 2 ? m : 0;
            slots += 1;
            successes += m == 1;
        }
        // Expected colliding packets per slot: kp - kp(1-p)^{k-1}.
        CHECK(std::abs(colliding / n / expected_collisions_given_failure(k, p) - 1.0) < 0.02);
        CHECK(std::abs(slots / successes / expected_attempts_between_successes(k, p) - 1.0) < 0.02);
    }

    TEST_CASE("batch determinism and parallel independence")
    {
        auto p = fixed(Scheme::Atp, 3000, 5);
        set_parallel_limit(1);
        auto a = run_batch(p, 12, nullptr);
        set_parallel_limit(4);
        auto b = run_batch(p, 12, nullptr);
        set_parallel_limit(0);
        CHECK(a.stats.delay.mean == b.stats.delay.mean);
        CHECK(a.stats.delay.std_err == b.stats.delay.std_err);
        CHECK(a.stats.energy_uj.mean == b.stats.energy_uj.mean);
        REQUIRE(a.trials.size() == b.trials.size());
        for (std::size_t i = 0; i < a.trials.size(); ++i)
            REQUIRE(a.trials[i].total_slots == b.trials[i].total_slots);
        CHECK(a.stats.n_trials == 3000);
    }

    TEST_CASE("standard error shrinks as 1/sqrt(n)")
    {
        auto small = run_batch(fixed(Scheme::Ftp, 1000, 3), 10, nullptr).stats.delay.std_err;
        auto large = run_batch(fixed(Scheme::Ftp, 16000, 3), 10, nullptr).stats.delay.std_err;
        CHECK(small / large == doctest::Approx(4.0).epsilon(0.15));
    }

    TEST_CASE("mean slots and energy track the series")
    {
        auto atp = run_batch(fixed(Scheme::Atp, 5000), 10, nullptr).stats;
        CHECK(std::abs(atp.delay.mean / delay_atp(10) - 1.0) < 0.02);
        auto ftp = run_batch(fixed(Scheme::Ftp, 5000), 40, nullptr).stats;
        CHECK(std::abs(ftp.energy_units.mean / energy_ftp(40) - 1.0) < 0.02);
        CHECK(ftp.energy_units.mean == ftp.transmissions.mean);
        for (int K : {3, 8}) {
            auto f = run_batch(fixed(Scheme::Ftp, 5000), K, nullptr).stats;
            auto a = run_batch(fixed(Scheme::Atp, 5000), K, nullptr).stats;
            CHECK(a.delay.mean < f.delay.mean);
            CHECK(f.energy_units.mean < a.energy_units.mean);
        }
    }

    TEST_CASE("admission")
    {
        ThzLinkParams l = link_100m();
        MisalignmentParams m;
        m.rho = 4;
        GammaAbsorption g{3, 10};
        ChannelModel channel(l, g, FadingParams{}, m);
        ProtocolConfig p;
        p.admission = AdmissionMode::Instantaneous;
        p.gamma_qos = 0.0;
        CHECK(admit_users(p, 50, channel, 0).k == 50);

        ThzLinkParams impaired = l;
        impaired.k_t = 0.3;
        ChannelModel capped(impaired, g, FadingParams{}, m);
        p.gamma_qos = 1.0 / (impaired.k_h() * impaired.k_h());
        CHECK(admit_users(p, 500, capped, 0).k == 0);

        // Admission fraction versus the closed-form outage.
        p.gamma_qos = 1.0;
        const int n = 100000;
        auto a = admit_users(p, n, channel, 3);
        double expected = 1.0 - cdf_snr_no_fading(OutageQuery{1.0, l.avg_snr, 0.0}, g, m.rho, l).probability;
        double sigma = std::sqrt(expected * (1 - expected) / n);
        CHECK(std::abs(a.k / static_cast<double>(n) - expected) < 3 * sigma);

        p.admission = AdmissionMode::Average;
        auto avg = admit_users(p, 2000, channel, 3);
        CHECK(avg.k > 0);
        CHECK(avg.k <= 2000);

        p.admission = AdmissionMode::Fixed;
        CHECK(admit_users(p, 9, channel, 0).k == 9);
    }

    TEST_CASE("empty frames count as zero")
    {
        ThzLinkParams l = link_100m();
        l.k_t = 0.3;
        MisalignmentParams m;
        m.rho = 4;
        ChannelModel channel(l, GammaAbsorption{3, 10}, FadingParams{}, m);
        ProtocolConfig p;
        p.admission = AdmissionMode::Instantaneous;
        p.gamma_qos = 1e6;
        p.trials = 50;
        auto s = run_batch(p, 10, &channel).stats;
        CHECK(s.n_trials == 50);
        CHECK(s.delay.mean == 0.0);
        CHECK(s.admitted.mean == 0.0);
    }
}
