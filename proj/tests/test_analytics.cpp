#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "thzra/analytics.hpp"
#include "thzra/error.hpp"

using namespace thzra;

namespace {

constexpr double kE = std::numbers::e;

bool rel_close(double a, double b, double tol)
{
    return std::abs(a - b) <= tol * std::abs(b);
}

// P[T + W > L] by integrating over W, with Boost's regularized gamma for T.
double survival_oracle(int k, double z, double rho, double L)
{
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    auto f = [&](double w) {
        return rho * rho * w * std::exp(-rho * w) * boost::math::gamma_q(static_cast<double>(k), z * (L - w));
    };
    double tail_w = std::exp(-rho * L) * (1.0 + rho * L);
    return tail_w + gk.integrate(f, 0.0, L, 15, 1e-14);
}

ThzLinkParams link_100m()
{
    ThzLinkParams l;
    l.f_hz = 3e11;
    l.d_m = 100;
    l.g_t = l.g_r = std::pow(10.0, 4.5);
    return l;
}

}  // namespace

TEST_SUITE("analytics")
{
    TEST_CASE("frozen series values")
    {
        // 40-digit evaluations of the finite sums.
        struct Row
        {
            int K;
            double d_ftp, d_atp, e_ftp;
        };
        for (Row r : {Row{2, 4, 3, 3}, Row{5, 15.611979166666664, 10.06177662037037, 8.20703125},
                      Row{10, 39.43486585044440, 22.76518199481674, 16.811747917131967},
                      Row{20, 94.61293452868006, 49.03359293924131, 34.00068653280891},
                      Row{40, 219.4783931225289, 102.4711430858296, 68.36926473868405}}) {
            CAPTURE(r.K);
            CHECK(rel_close(delay_ftp(r.K), r.d_ftp, 1e-12));
            CHECK(rel_close(delay_atp(r.K), r.d_atp, 1e-12));
            CHECK(rel_close(energy_ftp(r.K), r.e_ftp, 1e-12));
            CHECK(energy_atp(r.K) == delay_atp(r.K));
        }
        CHECK(rel_close(energy_atp(40) - energy_ftp(40), 34.10187834714559, 1e-11));
    }

    TEST_CASE("small cases")
    {
        CHECK(expected_delay_exact(1, 1.0) == 1.0);
        CHECK(expected_delay_exact(2, 0.5) == 4.0);
        CHECK(std::isinf(expected_delay_exact(2, 1.0)));
        CHECK(delay_ftp(1) == 1.0);
        CHECK(delay_atp(1) == 1.0);
        CHECK(delay_atp(2) == 3.0);
        CHECK(energy_exact(1, 0.3) == 1.0);
        CHECK(energy_exact(2, 0.5) == 3.0);
        CHECK(std::isinf(energy_exact(2, 1.0)));
        CHECK(energy_ftp(2) == 3.0);
        CHECK(energy_ftp_geometric(2) == doctest::Approx(3.0).epsilon(1e-15));
        CHECK_THROWS_AS(expected_delay_exact(0, 0.5), Error);
        CHECK_THROWS_AS(expected_delay_exact(3, 0.0), Error);
    }

    TEST_CASE("closed forms equal the general series at p = 1/K")
    {
        for (int K = 2; K <= 200; ++K) {
            CAPTURE(K);
            CHECK(rel_close(delay_ftp(K), expected_delay_exact(K, 1.0 / K), 1e-12));
            CHECK(rel_close(energy_ftp(K), energy_exact(K, 1.0 / K), 1e-12));
            CHECK(rel_close(energy_ftp_geometric(K), energy_ftp(K), 1e-12));
        }
    }

    TEST_CASE("per-transmission quantities")
    {
        CHECK(expected_collisions_given_failure(2, 1.0) == 2.0);
        for (double p : {0.0, 0.3, 1.0})
            CHECK(expected_collisions_given_failure(1, p) == 0.0);
        CHECK(expected_collisions_given_failure(3, 1.0 / 3) == doctest::Approx(1.0 - 4.0 / 9.0).epsilon(1e-15));
        CHECK(expected_attempts_between_successes(1, 1.0) == 1.0);
        CHECK(expected_attempts_between_successes(2, 0.5) == 2.0);
        CHECK(std::isinf(expected_attempts_between_successes(2, 1.0)));
        CHECK(std::isinf(expected_attempts_between_successes(3, 0.0)));
    }

    TEST_CASE("bound values")
    {
        auto d10 = delay_bounds_ftp(10);
        CHECK(rel_close(d10.lower, 35.34677824963164, 1e-12));
        CHECK(rel_close(d10.upper, 57.00608412153686, 1e-12));
        CHECK(d10.brackets(delay_ftp(10)));
        auto a40 = delay_bounds_atp(40);
        CHECK(rel_close(a40.upper, 108.7312731383618, 1e-12));
        CHECK(rel_close(a40.lower, 97.10084577500849, 1e-12));
        auto e40 = energy_bounds_ftp(40);
        CHECK(rel_close(e40.lower, 58.9875, 1e-12));
        CHECK(rel_close(e40.upper, 69.80280687068968, 1e-12));
        CHECK(e40.brackets(energy_ftp(40)));
        auto t40 = energy_bounds_atp_total(40);
        CHECK(rel_close(t40.lower, a40.lower, 1e-12));
        CHECK(rel_close(t40.upper, a40.upper, 1e-12));
        CHECK(t40.brackets(energy_atp(40)));
        auto g40 = energy_gap_bounds(40);
        CHECK(rel_close(g40.lower, -62.45106411460536, 1e-12));
        CHECK(rel_close(g40.upper, 49.74377313836181, 1e-12));
        CHECK(g40.brackets(energy_atp(40) - energy_ftp(40)));
    }

    TEST_CASE("bound sweep properties on a sparse grid")
    {
        for (int K : {3, 4, 7, 10, 40, 100, 333, 1000, 4321, 10000}) {
            CAPTURE(K);
            auto d = delay_bounds_ftp(K);
            CHECK(d.lower < d.upper);
            CHECK(d.brackets(delay_ftp(K)));
            CHECK(delay_bounds_atp(K).brackets(delay_atp(K)));
            CHECK(energy_bounds_ftp(K).brackets(energy_ftp(K)));
            CHECK(energy_bounds_atp_total(K).brackets(energy_atp(K)));
            CHECK(energy_atp(K) / K <= energy_bounds_atp(K).upper);
            auto g = energy_gap_bounds(K);
            CHECK(g.lower < g.upper);
            CHECK(energy_atp(K) - energy_ftp(K) > 0.0);
            if (K >= 10) {
                double ratio = delay_ftp(K) / (K * std::log(static_cast<double>(K)));
                CHECK(ratio >= 0.5);
                CHECK(ratio <= 3.0);
            }
        }
    }

    TEST_CASE("scaling limits")
    {
        CHECK(std::abs(delay_atp(1000) / 1000.0 / kE - 1.0) < 0.05);
        CHECK(std::abs(energy_ftp(1000) / 1000.0 / (kE - 1.0) - 1.0) < 0.05);
        CHECK(std::abs(energy_atp(10000) / 10000.0 / kE - 1.0) < 0.02);
        double gain = (energy_atp(1000) - energy_ftp(1000)) / energy_atp(1000);
        CHECK(rel_close(gain, 0.365532, 1e-5));
        CHECK(std::abs(gain - 1.0 / kE) < 0.05);
        CHECK(rel_close(delay_ftp(10) / delay_atp(10), 1.732, 1e-3));
        CHECK(rel_close(energy_atp(40) / energy_ftp(40), 1.49879, 1e-5));
    }

    TEST_CASE("Hoeffding bounds")
    {
        for (auto kind : {HoeffdingKind::Delay, HoeffdingKind::Energy}) {
            CHECK(hoeffding_bound(0.0, 100, kind) == 2.0);
            double prev = 2.0;
            for (double eps = 1.0; eps < 1e5; eps *= 1.7) {
                double b = hoeffding_bound(eps, 100, kind);
                CHECK((b < prev || b == 0.0));
                CHECK(b >= 0.0);
                prev = b;
            }
            for (double target : {0.1, 0.5, 1.0})
                CHECK(hoeffding_bound(hoeffding_epsilon(target, 100, kind), 100, kind) ==
                      doctest::Approx(target).epsilon(1e-12));
        }
        CHECK(hoeffding_bound(10.0, 100, HoeffdingKind::Delay) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-15));
    }

    TEST_CASE("diversity order")
    {
        auto d = diversity_order(2, 1, 4, 10);
        CHECK(d.exponents[0] == 1.0);
        CHECK(d.exponents[1] == 2.0);
        CHECK(d.exponents[2] == 5.0);
        CHECK(d.effective == 1.0);
        CHECK(diversity_order(2, 5, 2, 10).effective == 1.0);
        CHECK(diversity_order(20, 1, 30, 0.6).effective == 0.3);
        CHECK_THROWS_AS(diversity_order(0, 1, 1, 1), Error);
    }

    TEST_CASE("no-fading survival matches an independent quadrature")
    {
        struct Case
        {
            int k;
            double z, rho, L;
        };
        for (Case c : {Case{1, 10, 6, 2.0}, Case{3, 8.686, 4, 1.1}, Case{3, 8.686, 4, 3.5}, Case{2, 1.2, 8, 4.0},
                       Case{5, 3, 9.5, 2.2}, Case{1, 2, 2.5, 0.3}, Case{4, 12, 1.5, 6.0}}) {
            CAPTURE(c.k);
            CAPTURE(c.z);
            CAPTURE(c.rho);
            CAPTURE(c.L);
            double ref = survival_oracle(c.k, c.z, c.rho, c.L);
            CHECK(std::abs(log_gain_survival(c.k, c.z, c.rho, c.L) - ref) <= 1e-9 * ref + 1e-15);
            // Density is the negative derivative of the survival.
            double h = 1e-5;
            double fd = -(survival_oracle(c.k, c.z, c.rho, c.L + h) - survival_oracle(c.k, c.z, c.rho, c.L - h)) / (2 * h);
            CHECK(std::abs(log_gain_density(c.k, c.z, c.rho, c.L) - fd) <= 1e-6 * fd);
        }
        CHECK(log_gain_survival(2, 3, 5, 0.0) == 1.0);
        CHECK(log_gain_survival(2, 3, 5, -1.0) == 1.0);
    }

    TEST_CASE("outage closed form limits, monotonicity and errors")
    {
        ThzLinkParams l = link_100m();
        GammaAbsorption g{3, 10};
        double rho = 4;
        auto cdf = [&](double th, double bar_db, double kh = 0.0) {
            return cdf_snr_no_fading(OutageQuery{th, db_to_linear(bar_db), kh}, g, rho, l).probability;
        };
        CHECK(cdf(1e-12, 45) < 1e-12);
        CHECK(cdf(0.0, 45) == 0.0);
        CHECK(cdf(1.0, 200) < 1e-12);
        double prev = 0.0;
        for (double th = 0.01; th < 100; th *= 1.3) {
            double v = cdf(th, 45);
            CHECK(v >= prev);
            prev = v;
        }
        prev = 1.0;
        for (double db = 20; db <= 100; db += 2.5) {
            double v = cdf(1.0, db);
            CHECK(v <= prev);
            prev = v;
        }
        CHECK(cdf(1.0, 30) == 1.0);  // a_l below the threshold gain

        auto ceil = cdf_snr_no_fading(OutageQuery{30.0, 1e9, 0.2}, g, rho, l);
        CHECK(ceil.ceiling);
        CHECK(ceil.probability == 1.0);
        CHECK_FALSE(cdf_snr_no_fading(OutageQuery{20.0, 1e9, 0.2}, g, rho, l).ceiling);

        try {
            cdf_snr_no_fading(OutageQuery{1, 1e5, 0}, g, g.z(l.d_km()), l);
            FAIL("degenerate rates accepted");
        }
        catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateParams);
        }
        try {
            cdf_snr_no_fading(OutageQuery{1, 1e5, 0}, GammaAbsorption{2.5, 10}, rho, l);
            FAIL("non-integer shape accepted");
        }
        catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonIntegerShape);
        }
        CHECK(outage_probability(OutageQuery{1.0, 1e5, 0}, g, rho, l).probability == cdf(1.0, 50));
    }

    TEST_CASE("density consistency")
    {
        ThzLinkParams l = link_100m();
        GammaAbsorption g{3, 10};
        double rho = 4;
        const double bar = db_to_linear(48);
        const double kh = 0.2;
        auto cdf = [&](double th) { return cdf_snr_no_fading(OutageQuery{th, bar, kh}, g, rho, l).probability; };
        auto pdf = [&](double th) { return pdf_snr_no_fading(OutageQuery{th, bar, kh}, g, rho, l); };
        double ceiling = 1.0 / (kh * kh);
        for (int i = 1; i <= 20; ++i) {
            double th = ceiling * i / 21.5;
            double h = 1e-6 * th;
            double fd = (cdf(th + h) - cdf(th - h)) / (2 * h);
            CAPTURE(th);
            CHECK(pdf(th) >= 0.0);
            CHECK(std::abs(fd - pdf(th)) <= 1e-5 * pdf(th));
        }
        boost::math::quadrature::tanh_sinh<double> ts;
        double total = ts.integrate(pdf, 0.0, ceiling);
        CHECK(std::abs(total - 1.0) < 1e-4);
    }

    TEST_CASE("reports")
    {
        auto r = delay_report(Scheme::Ftp, 10);
        CHECK(r.exact == delay_ftp(10));
        CHECK(r.bounds.brackets(r.exact));
        CHECK(r.scaling_reference == doctest::Approx(10 * std::log(10.0)));
        CHECK(std::isnan(delay_report(Scheme::Atp, 1).bounds.lower));
        CHECK(energy_report(Scheme::Optimal, 7).exact == 7.0);
        CHECK(energy_report(Scheme::Atp, 40).bounds.brackets(energy_atp(40)));
    }
}
