#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gen.hpp"

#include "gridsing/error.hpp"
#include "gridsing/montecarlo.hpp"

using namespace gridsing;

namespace {

FieldValue one(std::span<const double>) { return {1.0, false}; }

FieldValue disc(std::span<const double> x) {
    const double dx = x[0] - 0.5, dy = x[1] - 0.5;
    return {dx * dx + dy * dy < 1.0 / 16.0 ? 1.0 : 0.0, false};
}

bool near(const MeasureEstimate& e, double exact, double widths = 4.0) {
    return std::abs(e.value - exact) <= widths * e.half_width;
}

}  // namespace

TEST_SUITE("montecarlo") {
    TEST_CASE("constant integrand gives the region measure") {
        const MeasureEstimate e = mc_integrate(PointField(one), Domain::unit_cube(2), 5000);
        CHECK(e.value == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(e.half_width == 0.0);
        const Domain l(2, {Box{{0, 0}, {2, 1}}, Box{{0, 1}, {1, 2}}});
        CHECK(mc_integrate(PointField(one), l, 5000).value == doctest::Approx(3.0).epsilon(1e-12));
    }

    TEST_CASE("indicator of a disc") {
        const MeasureEstimate e = mc_integrate(PointField(disc), Domain::unit_cube(2), 200000, 7);
        CHECK(near(e, std::numbers::pi / 16));
        CHECK(e.half_width < 0.003);
        CHECK(e.samples == 200000);
        CHECK(e.seed == 7);
    }

    TEST_CASE("importance sampled nu integral") {
        const FieldFamily fam(Domain::unit_cube(2), builtin_sigma1());
        const NuField nu(fam, 2);
        const MeasureEstimate e = mc_integrate_nu(nu, 200000, 11);
        CHECK(near(e, 1.0 + std::numbers::pi / 16));
        const NuField nu5(FieldFamily(Domain::unit_cube(3), builtin_sigma1()), 5);
        // sigma(1) (1 - meas G) + 3 * (1/2) * meas G with 64 balls of radius 1/10.
        const double g = 64.0 * (4.0 / 3.0) * std::numbers::pi * 1e-3;
        CHECK(near(mc_integrate_nu(nu5, 200000, 12), 1.0 + 0.5 * g));
    }

    TEST_CASE("results are reproducible and thread-count independent") {
        const NuField nu(FieldFamily(Domain::unit_cube(2), builtin_loglog(2)), 4);
        const MeasureEstimate a = mc_integrate_nu(nu, 100000, 5, 2);
        const MeasureEstimate b = mc_integrate_nu(nu, 100000, 5, 2);
        CHECK(a.value == b.value);
        CHECK(a.half_width == b.half_width);
        set_worker_count(1);
        const MeasureEstimate c = mc_integrate_nu(nu, 100000, 5, 2);
        const MeasureEstimate d = mc_integrate(PointField(disc), Domain::unit_cube(2), 70000, 5);
        set_worker_count(0);
        CHECK(c.value == a.value);
        CHECK(d.value == mc_integrate(PointField(disc), Domain::unit_cube(2), 70000, 5).value);
        CHECK(mc_integrate_nu(nu, 100000, 6, 2).value != a.value);
    }

    TEST_CASE("map_chunks returns chunks in order") {
        const auto out = map_chunks<std::uint64_t>(
            100000, [](std::uint64_t c, std::uint64_t first, std::uint64_t last) { return c * 1000000 + (last - first); },
            4096);
        REQUIRE(out.size() == 25);
        for (std::uint64_t c = 0; c < 24; ++c) CHECK(out[c] == c * 1000000 + 4096);
        CHECK(out[24] == 24 * 1000000 + (100000 - 24 * 4096));
    }

    TEST_CASE("sample statistics merge like sequential accumulation") {
        gen::Rng rng(71);
        for (int trial = 0; trial < 50; ++trial) {
            SampleStats all, left, right;
            const auto n = gen::integer(rng, 2, 300);
            const auto split = gen::integer(rng, 0, n);
            for (std::int64_t i = 0; i < n; ++i) {
                const double x = gen::real(rng, -5.0, 5.0);
                all.add(x);
                (i < split ? left : right).add(x);
            }
            left.merge(right);
            CHECK(left.count() == all.count());
            CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
            CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-10));
        }
    }

    TEST_CASE("region sampler stays in the region") {
        const Domain l(2, {Box{{0, 0}, {2, 1}}, Box{{0, 1}, {1, 2}}});
        const RegionSampler rs(l);
        CHECK(rs.box_volume() == doctest::Approx(4.0));
        const CounterRng rng(3, 0);
        std::vector<double> x(2);
        int inside = 0;
        for (std::uint64_t i = 0; i < 4000; ++i) {
            rs.draw(x, rng, i, 0);
            CHECK(x[0] > 0.0);
            CHECK(x[0] < 2.0);
            inside += rs.inside(x);
        }
        CHECK(inside / 4000.0 == doctest::Approx(0.75).epsilon(0.05));
    }

    TEST_CASE("too few samples") {
        CHECK_THROWS_AS(mc_integrate(PointField(one), Domain::unit_cube(2), 99), Error);
        const NuField nu(FieldFamily(Domain::unit_cube(2), builtin_sigma1()), 2);
        CHECK_THROWS_AS(mc_integrate_nu(nu, 10), Error);
    }
}
