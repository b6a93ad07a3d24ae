#include <cmath>

#include "doctest.h"
#include "gen.hpp"

#include "gridsing/error.hpp"
#include "gridsing/gamma.hpp"

using namespace gridsing;

namespace {

IntegrandFamily flat_family(double p = 2.0) {
    IntegrandFamily f;
    f.p = p;
    f.region = Domain::unit_cube(2);
    f.nu = [](std::span<const double>) { return 1.0; };
    f.psi = [](std::uint64_t, std::span<const double>) { return 1.0; };
    return f;
}

FieldFamily unit_family() { return FieldFamily(Domain::unit_cube(2), builtin_sigma1()); }

}  // namespace

TEST_SUITE("gamma") {
    TEST_CASE("integrand values") {
        const IntegrandFamily f = flat_family();
        const std::vector<double> x{0.3, 0.3}, zero{0.0, 0.0}, unit{0.6, 0.8};
        CHECK(eval_f(f, 1, x, zero) == 0.0);
        CHECK(eval_f(f, 1, x, unit) == doctest::Approx(2.0).epsilon(1e-15));
        gen::Rng rng(91);
        const IntegrandFamily g = flat_family(3.0);
        for (int i = 0; i < 100; ++i) {
            const std::vector<double> xi{gen::real(rng, -3, 3), gen::real(rng, -3, 3)};
            const double r = std::hypot(xi[0], xi[1]);
            CHECK(eval_f(g, 2, x, xi) == doctest::Approx(r * r * r + r * r).epsilon(1e-13));
        }
        const std::vector<double> outside{1.5, 0.5};
        CHECK_THROWS_AS(eval_f(f, 1, outside, unit), Error);
    }

    TEST_CASE("field integrand follows its definition") {
        const FieldFamily fam = unit_family();
        const IntegrandFamily f = field_integrand_family(fam, 5, 2.0);
        const MuField mu(fam, 5);
        gen::Rng rng(92);
        for (int i = 0; i < 200; ++i) {
            const std::vector<double> x{gen::real(rng, 0, 1), gen::real(rng, 0, 1)};
            const std::vector<double> xi{gen::real(rng, -2, 2), gen::real(rng, -2, 2)};
            const std::uint64_t s = static_cast<std::uint64_t>(gen::integer(rng, 1, 12));
            const double nu = mu.eval(x).value;
            const double psi = NuField(fam, fam.m() + s).eval(x).value;
            const double r = std::hypot(xi[0], xi[1]);
            CHECK(eval_f(f, s, x, xi) == doctest::Approx(nu * r * r + std::sqrt(nu * psi) * r).epsilon(1e-12));
        }
        CHECK_THROWS_AS(field_integrand_family(fam, 5, 1.5), Error);
    }

    TEST_CASE("growth and convexity conditions hold for the field integrand") {
        const IntegrandFamily f = field_integrand_family(unit_family(), 5, 2.0);
        const AConditionsReport r = check_a_conditions(f, {.x_samples = 10000});
        CHECK(r.passed());
        CHECK(r.convexity.samples == 10000);
        CHECK(r.lower_bound.violations == 0);
        CHECK(r.upper_bound.violations == 0);
        CHECK(r.measurability.status == "by construction");
    }

    TEST_CASE("violations are detected") {
        IntegrandFamily bad;
        bad.form = IntegrandForm::Custom;
        bad.region = Domain::unit_cube(2);
        bad.custom = [](std::uint64_t, std::span<const double>, std::span<const double> xi) {
            return -std::hypot(xi[0], xi[1]);
        };
        const AConditionsReport r = check_a_conditions(bad, {.x_samples = 2000});
        CHECK(r.lower_bound.violations > 0);
        CHECK(r.convexity.violations > 0);
        CHECK_FALSE(r.passed());
        IntegrandFamily tight = field_integrand_family(unit_family(), 3, 2.0);
        tight.c1 = 5.0;
        CHECK(check_a_conditions(tight, {.x_samples = 2000}).lower_bound.violations > 0);
        tight.c1 = 1.0;
        tight.c2 = 1.0;
        CHECK(check_a_conditions(tight, {.x_samples = 2000}).upper_bound.violations > 0);
        IntegrandFamily empty;
        empty.region = Domain::unit_cube(2);
        CHECK_THROWS_AS(empty.validate(), Error);
    }

    TEST_CASE("bound conditions on cubes") {
        const FieldFamily fam = unit_family();
        const BConditionsReport r = check_b_conditions(fam, {Box{{-1, -1}, {2, 2}}, Box{{5, 5}, {6, 6}}}, 8);
        CHECK(r.m_sigma == doctest::Approx(3.0));
        CHECK(r.nonnegative.violations == 0);
        CHECK(r.integrable.violations == 0);
        CHECK(r.integrable.samples == 8);
        CHECK(r.s_first == 5);
        CHECK(r.s_last == 8);
        REQUIRE(r.cubes.size() == 2);
        CHECK(r.cubes[0].clipped_measure == 1.0);
        CHECK(r.cubes[0].values.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            const double exact = integral_nu_exact(NuField(fam, fam.m() + r.s_first + i)).value;
            CHECK(r.cubes[0].values[i] == doctest::Approx(exact).epsilon(1e-12));
        }
        CHECK(r.cubes[1].max_value == 0.0);
        CHECK(r.passed());
        CHECK_THROWS_AS(check_b_conditions(fam, {}, 0), Error);
    }

    TEST_CASE("sandwich search") {
        const IntegrandFamily f = field_integrand_family(unit_family(), 5, 2.0);
        SampleOptions opts;
        opts.x_samples = 20000;
        const auto probes = sandwich_violation(f, {1.0, 1e6}, opts);
        REQUIRE(probes.size() == 2);
        CHECK(probes[0].derived_bound == 16.0);
        CHECK(probes[0].hit_count > 0);
        REQUIRE(probes[0].first_s.has_value());
        for (const auto& h : probes[0].hits) CHECK(h.ratio > 16.0);
        CHECK(probes[1].hit_count == 0);
        CHECK(probes[1].note.find("not found at horizon") != std::string::npos);
        const auto flat = sandwich_violation(flat_family(), {1.0}, opts);
        CHECK(flat[0].hit_count == 0);
        CHECK(flat[0].note.find("no unboundedness") != std::string::npos);
    }
}
