#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gen.hpp"

#include "gridsing/error.hpp"
#include "gridsing/report.hpp"

using namespace gridsing;

namespace {

RunConfig random_config(gen::Rng& rng) {
    RunConfig c;
    c.domain = gen::integer(rng, 0, 1) ? "" : "data/unit2.dom";
    c.sigma = gen::integer(rng, 0, 1) ? "sigma1" : "loglog";
    c.n = static_cast<std::size_t>(gen::integer(rng, 2, 8));
    c.t_max = static_cast<GridIndex>(gen::integer(rng, 1, 500));
    c.s_max = static_cast<std::uint64_t>(gen::integer(rng, 1, 500));
    c.seed = static_cast<std::uint64_t>(gen::integer(rng, 0, 1) ? gen::integer(rng, 0, 1000) : rng());
    c.samples = static_cast<std::uint64_t>(gen::integer(rng, 100, 10000000));
    c.point_samples = static_cast<std::uint64_t>(gen::integer(rng, 1, 100000));
    c.quadrature_tol = std::exp(gen::real(rng, -30.0, -1.0));
    c.exhaustion_slack = gen::real(rng, 1e-4, 0.5);
    c.cube_slack = gen::real(rng, 1e-4, 0.5);
    if (gen::integer(rng, 0, 1)) c.m_sigma_override = gen::real(rng, 0.1, 100.0);
    c.output_dir = "out" + std::to_string(gen::integer(rng, 0, 99));
    c.stamp = gen::integer(rng, 0, 1) != 0;
    return c;
}

}  // namespace

TEST_SUITE("config_report") {
    TEST_CASE("text form round-trips") {
        gen::Rng rng(101);
        for (int i = 0; i < 200; ++i) {
            const RunConfig c = random_config(rng);
            CHECK(RunConfig::parse(c.to_text()) == c);
        }
    }

    TEST_CASE("parsing") {
        const RunConfig c = RunConfig::parse("# comment\n[run]\nsigma = loglog\nn = 3\n[sampling]\nseed = 0xA11CE\n");
        CHECK(c.sigma == "loglog");
        CHECK(c.n == 3);
        CHECK(c.seed == 659918);
        CHECK(c.t_max == RunConfig{}.t_max);
        CHECK_THROWS_AS(RunConfig::parse("[run]\ncolour = blue\n"), Error);
        CHECK_THROWS_AS(RunConfig::parse("[sampling]\nseed = -1\n"), Error);
        CHECK_THROWS_AS(RunConfig::parse("[output]\nstamp = maybe\n"), Error);
        CHECK_THROWS_AS(RunConfig::parse("[run\n"), Error);
        try {
            (void)RunConfig::parse("[tolerances]\nquadrature = fast\n");
            FAIL("expected ParseError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
        }
    }

    TEST_CASE("validation") {
        RunConfig ok;
        CHECK_NOTHROW(ok.validate());
        RunConfig c = ok;
        c.n = 9;
        CHECK_THROWS_AS(c.validate(), Error);
        c = ok;
        c.t_max = 0;
        CHECK_THROWS_AS(c.validate(), Error);
        c = ok;
        c.samples = 10;
        CHECK_THROWS_AS(c.validate(), Error);
        c = ok;
        c.quadrature_tol = 0.0;
        CHECK_THROWS_AS(c.validate(), Error);
        c = ok;
        c.m_sigma_override = -1.0;
        CHECK_THROWS_AS(c.validate(), Error);
    }

    TEST_CASE("domain loading") {
        RunConfig c;
        c.n = 3;
        CHECK(c.load_domain().measure() == 1);
        const auto path = std::filesystem::temp_directory_path() / "gridsing_cfg_test.dom";
        std::ofstream(path) << "dim 2\nbox 0 0 : 2 1\n";
        c.domain = path.string();
        CHECK_THROWS_AS(c.load_domain(), Error);
        c.n = 2;
        CHECK(c.load_domain().measure() == 2);
        std::filesystem::remove(path);
    }

    TEST_CASE("reports are byte-stable without a stamp") {
        RunConfig c;
        c.stamp = false;
        const MeasureEstimate e{0.5, 0.01, 1000, 7, 0};
        const std::string a = dump(make_report("probe", c, 1, "sigma1", to_json(e)));
        const std::string b = dump(make_report("probe", c, 1, "sigma1", to_json(e)));
        CHECK(a == b);
        CHECK(a.find("\"stamp\"") == std::string::npos);
        const Json j = Json::parse(a);
        CHECK(j["command"] == "probe");
        CHECK(j["provenance"]["seed"] == c.seed);
        CHECK(j["provenance"]["m"] == 1);
        CHECK(j["provenance"]["profile"] == "sigma1");
        CHECK(j["results"]["samples"] == 1000);
        c.stamp = true;
        const Json s = make_report("probe", c, 1, "sigma1", to_json(e));
        CHECK(s.contains("stamp"));
    }

    TEST_CASE("json of core results") {
        const FieldFamily fam(Domain::unit_cube(2), builtin_sigma1());
        const Json nu = to_json(integral_nu_exact(NuField(fam, 2)));
        CHECK(nu["within_bound"] == true);
        CHECK(nu["provenance"] == "exact");
        const Json ms = to_json(m_sigma(builtin_sigma1(), 2));
        CHECK(ms["value"].get<double>() == doctest::Approx(3.0));
        const Json q = to_json(loglog_transform_inequalities(2, 1.0, 100)[0]);
        CHECK(q.contains("holds_from_log_inv_rho"));
    }

    TEST_CASE("csv") {
        const std::string csv = to_csv({"t", "value"}, {{1, 0.5}, {2, 0.25}});
        CHECK(csv.rfind("t,value\n", 0) == 0);
        CHECK(csv.find("2,0.25") != std::string::npos);
    }
}
