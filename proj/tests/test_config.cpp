#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "thzra/config.hpp"
#include "thzra/error.hpp"

using namespace thzra;

namespace {

const char* kBase = R"(
[link]
f_hz = 3e11
d_m = 100
g_t = 1000
g_r = 1000
k_t = 0.1
k_r = 0.1
avg_snr_db = 47.3

[absorption]
model = gamma
k = 2
beta_db_per_km = 1

[misalignment]
rho = 4
)";

ErrorCode code_of(const std::string& text)
{
    try {
        validate_config(ConfigDocument::parse(text));
    }
    catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

std::string with(const std::string& section_line, const std::string& extra)
{
    std::string s = kBase;
    auto pos = s.find(section_line);
    REQUIRE(pos != std::string::npos);
    s.insert(pos + section_line.size(), "\n" + extra);
    return s;
}

void check_same_derived(const ExperimentConfig& a, const ExperimentConfig& b)
{
    CHECK(a.link.k_h() == b.link.k_h());
    CHECK(a.link.a_l() == b.link.a_l());
    CHECK(a.link.avg_snr == b.link.avg_snr);
    CHECK(a.link.pressure_hpa == b.link.pressure_hpa);
    CHECK(a.misalignment.rho == b.misalignment.rho);
    CHECK(a.protocol.gamma_qos == b.protocol.gamma_qos);
    CHECK(a.outage.gamma_th == b.outage.gamma_th);
    CHECK(a.outage.grid_db == b.outage.grid_db);
    const auto* ga = std::get_if<GammaAbsorption>(&a.absorption);
    const auto* gb = std::get_if<GammaAbsorption>(&b.absorption);
    REQUIRE((ga != nullptr) == (gb != nullptr));
    if (ga) {
        CHECK(ga->k == gb->k);
        CHECK(ga->z(a.link.d_km()) == gb->z(b.link.d_km()));
    }
}

}  // namespace

TEST_SUITE("config")
{
    TEST_CASE("derived impairment")
    {
        auto cfg = validate_config(ConfigDocument::parse(kBase));
        CHECK(cfg.link.k_h() == doctest::Approx(std::sqrt(0.02)).epsilon(1e-15));
    }

    TEST_CASE("impairment above 0.4 is rejected with field and bound")
    {
        std::string text = kBase;
        text.replace(text.find("k_t = 0.1"), 9, "k_t = 0.5");
        try {
            validate_config(ConfigDocument::parse(text));
            FAIL("accepted k_t = 0.5");
        }
        catch (const Error& e) {
            CHECK(e.code() == ErrorCode::OutOfRange);
            std::string msg = e.what();
            CHECK(msg.find("link.k_t") != std::string::npos);
            CHECK(msg.find("0.4") != std::string::npos);
        }
    }

    TEST_CASE("absorption rate z")
    {
        GammaAbsorption g{2.0, 1.0};
        CHECK(g.z(1.0) == doctest::Approx(8.686).epsilon(1e-15));
        CHECK(g.mean_db_per_km() == 2.0);
        std::string text = kBase;
        text.replace(text.find("d_m = 100"), 9, "d_m = 1000");
        auto cfg = validate_config(ConfigDocument::parse(text));
        CHECK(std::get<GammaAbsorption>(cfg.absorption).z(cfg.link.d_km()) == doctest::Approx(8.686).epsilon(1e-15));
    }

    TEST_CASE("integer shape is only enforced where a closed form needs it")
    {
        GammaAbsorption g{2.5, 1.0};
        CHECK_FALSE(g.has_integer_shape());
        try {
            (void)g.integer_shape();
            FAIL("no error");
        }
        catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonIntegerShape);
            CHECK(is_config_error(e.code()));
        }
        CHECK(GammaAbsorption{3.0, 1.0}.integer_shape() == 3);
    }

    TEST_CASE("structural errors")
    {
        std::string text = kBase;
        text.erase(text.find("f_hz = 3e11"), 11);
        CHECK(code_of(text) == ErrorCode::MissingField);
        CHECK(code_of(with("[link]", "colour = blue")) == ErrorCode::ParseError);
        CHECK(code_of(with("[link]", "pressure_unit = bar")) == ErrorCode::ParseError);
        CHECK(code_of(with("[link]", "humidity_pct = 120")) == ErrorCode::OutOfRange);
        CHECK(code_of(with("[misalignment]", "beam_width = 0.02")) == ErrorCode::MissingField);
        CHECK(code_of(with("[misalignment]", "angular_sigma = 0.01\nbeam_width = 0.02")) == ErrorCode::OutOfRange);
        CHECK(code_of(std::string(kBase) + "[fading]\nenabled = true\nmu = 1.5\neta = 2\n") ==
              ErrorCode::UnsupportedParams);
        CHECK(code_of(std::string(kBase) + "[fading]\nenabled = true\np = 2\n") == ErrorCode::UnsupportedParams);
        CHECK(code_of(std::string(kBase) + "[protocol]\ntrials = 0\n") == ErrorCode::OutOfRange);
        CHECK(code_of(std::string(kBase) + "[protocol]\ne_idle_uj = -1\n") == ErrorCode::OutOfRange);

        std::string det = kBase;
        det.replace(det.find("model = gamma"), 13, "model = deterministic");
        CHECK(code_of(det) == ErrorCode::ProfileMissing);
        det += "\n[absorption]\n";
        CHECK_THROWS(ConfigDocument::parse(det));  // duplicate section
    }

    TEST_CASE("non-integer mu is accepted on the circular route")
    {
        auto cfg = validate_config(ConfigDocument::parse(std::string(kBase) + "[fading]\nenabled = true\nmu = 1.5\n"));
        CHECK(cfg.fading.mu == 1.5);
    }

    TEST_CASE("beam geometry sets rho")
    {
        std::string text = kBase;
        text.replace(text.find("rho = 4"), 7, "beam_width = 0.02\nangular_sigma = 0.005");
        auto cfg = validate_config(ConfigDocument::parse(text));
        CHECK(cfg.misalignment.rho == doctest::Approx(4.0).epsilon(1e-15));
    }

    TEST_CASE("pressure unit normalization and comments")
    {
        auto atm = validate_config(ConfigDocument::parse(with("[link]", "pressure = 1 ; one atmosphere\npressure_unit = atm")));
        CHECK(atm.link.pressure_hpa == kHpaPerAtm);
        auto hpa = validate_config(ConfigDocument::parse(with("[link]", "# comment\npressure = 900\npressure_unit = hPa")));
        CHECK(hpa.link.pressure_hpa == 900.0);
    }

    TEST_CASE("dB ingestion")
    {
        auto cfg = validate_config(ConfigDocument::parse(kBase));
        CHECK(cfg.link.avg_snr == doctest::Approx(std::pow(10.0, 4.73)).epsilon(1e-14));
        CHECK(code_of(with("[link]", "avg_snr = 10")) == ErrorCode::ParseError);
    }

    TEST_CASE("number lists")
    {
        CHECK(parse_int_list("1..10").size() == 10);
        auto grid = parse_number_list("35:5:80");
        REQUIRE(grid.size() == 10);
        CHECK(grid.front() == 35.0);
        CHECK(grid.back() == 80.0);
        CHECK(parse_number_list("2, 4.1") == std::vector<double>{2.0, 4.1});
        CHECK_THROWS(parse_int_list("1.5,2"));
        CHECK_THROWS(parse_number_list("1:0:5"));
    }

    TEST_CASE("free-space gain scaling")
    {
        auto cfg = validate_config(ConfigDocument::parse(kBase));
        ThzLinkParams l = cfg.link;
        double a = l.a_l();
        l.d_m *= 2.0;
        CHECK(l.a_l() == a / 2.0);
        double prev = INFINITY;
        for (double d = 10.0; d < 1000.0; d *= 1.3) {
            l.d_m = d;
            CHECK(l.a_l() < prev);
            prev = l.a_l();
        }
        l.d_m = 100.0;
        prev = INFINITY;
        for (double f = 1e11; f < 1e13; f *= 1.5) {
            l.f_hz = f;
            CHECK(l.a_l() < prev);
            prev = l.a_l();
        }
    }

    TEST_CASE("serialize and re-validate is bit-identical")
    {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            std::ostringstream text;
            text.precision(17);
            text << "[link]\nf_hz = " << 1e11 + 9e11 * u(rng) << "\nd_m = " << 1 + 500 * u(rng)
                 << "\ng_t = " << 1 + 1e5 * u(rng) << "\ng_r = " << 1 + 1e5 * u(rng)
                 << "\nk_t = " << 0.4 * u(rng) << "\nk_r = " << 0.4 * u(rng) << "\navg_snr_db = " << 100 * u(rng)
                 << "\npressure = " << 0.5 + u(rng) << "\n[absorption]\nmodel = gamma\nk = " << 1 + std::floor(5 * u(rng))
                 << "\nkbeta_db_per_km = " << 0.1 + 50 * u(rng) << "\n[misalignment]\n";
            if (i % 2)
                text << "rho = " << 0.5 + 10 * u(rng) << "\n";
            else
                text << "beam_width = " << 0.01 + u(rng) << "\nangular_sigma = " << 0.01 + u(rng) << "\n";
            text << "[protocol]\ngamma_qos_db = " << 30 * u(rng) << "\n[outage]\ngamma_th_db = " << 10 * u(rng) - 5
                 << "\n";
            auto first = validate_config(ConfigDocument::parse(text.str()));
            auto second = validate_config(ConfigDocument::parse(serialize_config(first)));
            check_same_derived(first, second);
            CHECK(serialize_config(second) == serialize_config(first));
        }
    }

    TEST_CASE("profile parsing needs a units header and every key")
    {
        std::string body = "q1=1\nq2=1\nq3=1\nq4=1\nq5=1\nq6=1\nq7=1\nq8=1\nq9=1\nq10=1\np1=1\np2=2\nc1=0\nc2=0\nc3=0\nc4=0\n";
        try {
            parse_absorption_profile(body);
            FAIL("accepted profile without units");
        }
        catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ProfileMissing);
        }
        auto p = parse_absorption_profile("# units: 1/m\n" + body);
        CHECK(p.units == "1/m");
        CHECK(p.p2 == 2.0);
        std::string missing = "# units: 1/m\n" + body.substr(0, body.find("c4"));
        CHECK_THROWS_AS(parse_absorption_profile(missing), Error);
        auto shipped = load_absorption_profile(std::string(THZRA_SOURCE_DIR) + "/profiles/water_vapour_lines.txt");
        CHECK(shipped.q[5] == 2.014);
        CHECK(shipped.c[3] == -6.36e-3);
    }

    TEST_CASE("shipped configurations validate")
    {
        for (const char* name : {"default.ini", "sabotage.ini", "mu_rho_sweep.ini", "deterministic.ini"}) {
            CAPTURE(name);
            auto cfg = validate_config(ConfigDocument::load(std::string(THZRA_SOURCE_DIR) + "/configs/" + name));
            CHECK(cfg.link.a_l() > 0.0);
        }
    }
}
