#include "doctest.h"

#include "gridsing/suite.hpp"

using namespace gridsing;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.stamp = false;
    c.samples = 2000;
    c.point_samples = 200;
    return c;
}

}  // namespace

TEST_SUITE("suite") {
    TEST_CASE("exact criteria pass") {
        const RunConfig c = small_config();
        for (int id : {1, 3}) {
            const CriterionResult r = run_criterion(id, c);
            CHECK(r.id == id);
            CHECK(r.status == Status::Pass);
            CHECK_FALSE(r.name.empty());
            CHECK_FALSE(r.anchor.empty());
        }
    }

    TEST_CASE("a wrong constant is caught") {
        RunConfig c = small_config();
        c.m_sigma_override = 1.0;
        CHECK(run_criterion(2, c).status == Status::Fail);
    }

    TEST_CASE("short horizons skip instead of shrinking the window") {
        RunConfig c = small_config();
        c.t_max = 1;
        for (int id : {6, 7, 8, 9}) {
            const CriterionResult r = run_criterion(id, c);
            CHECK(r.status == Status::Skipped);
            CHECK(r.ok());
            REQUIRE_FALSE(r.warnings.empty());
            CHECK(r.warnings[0].find("insufficient horizon") != std::string::npos);
        }
    }

    TEST_CASE("criterion json") {
        const CriterionResult r = run_criterion(1, small_config());
        const Json j = to_json(r);
        CHECK(j["id"] == 1);
        CHECK(j["status"] == "pass");
        CHECK(j.contains("details"));
        CHECK_FALSE(j.contains("seconds"));
        CHECK_THROWS_AS(run_criterion(13, small_config()), std::exception);
    }
}
