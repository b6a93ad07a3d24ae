#include <cmath>
#include <limits>

#include "doctest.h"
#include "gen.hpp"

#include "gridsing/error.hpp"
#include "gridsing/fields.hpp"

using namespace gridsing;

namespace {

// Direct definition: scan every node of X_t for the ball containing x.
double nu_oracle(const SigmaProfile& s, const NodeSet& nodes, GridIndex t, const std::vector<double>& x) {
    const double r = 0.5 / static_cast<double>(t);
    for (const auto& y : nodes.nodes()) {
        const auto c = y.coords_double();
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - c[i]) * (x[i] - c[i]);
        if (d2 < r * r) return s(2.0 * static_cast<double>(t) * std::sqrt(d2));
    }
    return s(1.0);
}

FieldFamily unit_family(const SigmaProfile& s, std::size_t n = 2) { return FieldFamily(Domain::unit_cube(n), s); }

}  // namespace

TEST_SUITE("fields") {
    TEST_CASE("nu on the unit square") {
        const NuField nu(unit_family(builtin_sigma1()), 2);
        const std::vector<double> a{0.625, 0.5}, b{0.9, 0.9};
        CHECK(nu.eval(a).value == doctest::Approx(2.0).epsilon(1e-15));
        CHECK_FALSE(nu.eval(a).singular);
        CHECK(nu.eval(b).value == 1.0);
        const RationalVec centre{Rational(1, 2), Rational(1, 2)};
        const FieldValue c = nu.eval(std::span<const Rational>(centre));
        CHECK(c.singular);
        CHECK(c.value == 1.0);
        CHECK(nu.ball_radius() == 0.25);
    }

    TEST_CASE("nu matches the node scan") {
        gen::Rng rng(51);
        for (const SigmaProfile& s : {builtin_sigma1(), builtin_loglog(2)}) {
            const FieldFamily fam(Domain(2, {Box{{0, 0}, {1, 1}}, Box{{Rational(1, 2), 0}, {Rational(3, 2), 1}}}), s);
            for (GridIndex t : {2u, 3u, 7u, 12u}) {
                const NuField nu(fam, t);
                for (int i = 0; i < 300; ++i) {
                    const std::vector<double> x{gen::real(rng, 0.0, 1.5), gen::real(rng, 0.0, 1.0)};
                    CHECK(nu.eval(x).value == doctest::Approx(nu_oracle(s, nu.nodes(), t, x)).epsilon(1e-12));
                }
            }
        }
    }

    TEST_CASE("batch evaluation agrees with exact evaluation") {
        gen::Rng rng(52);
        for (std::size_t n : {2u, 3u}) {
            const FieldFamily fam = unit_family(builtin_sigma1(), n);
            for (GridIndex t : {2u, 5u, 9u}) {
                const NuField nu(fam, t);
                simd::PointBatch batch(n, 257);
                for (double& v : batch.data) v = gen::real(rng, 0.0, 1.0);
                std::vector<double> values;
                std::vector<std::uint8_t> singular;
                nu.eval_batch(batch, values, singular);
                REQUIRE(values.size() == batch.count);
                for (std::size_t i = 0; i < batch.count; ++i) {
                    std::vector<double> x(n);
                    for (std::size_t d = 0; d < n; ++d) x[d] = batch.coord(d)[i];
                    CHECK(values[i] == doctest::Approx(nu.eval(x).value).epsilon(1e-12));
                    CHECK(singular[i] == 0);
                }
            }
        }
    }

    TEST_CASE("value from the scaled radius") {
        const NuField nu(unit_family(builtin_sigma1()), 4);
        CHECK(nu.value_at_scaled_radius(0.5) == 2.0);
        CHECK(nu.value_at_scaled_radius(1.0) == 1.0);
        CHECK(nu.value_at_scaled_radius(std::numeric_limits<double>::infinity()) == 1.0);
    }

    TEST_CASE("mu sums weighted nu terms") {
        const FieldFamily fam = unit_family(builtin_sigma1());
        const MuField mu1(fam, 1);
        const NuField nu2(fam, 2);
        const std::vector<double> x{0.55, 0.45};
        CHECK(mu1.eval(x).value == nu2.eval(x).value);
        const std::vector<double> far{0.9, 0.9};
        CHECK(MuField(fam, 2).eval(far).value == doctest::Approx(1.25).epsilon(1e-15));

        gen::Rng rng(53);
        const MuField mu6(fam, 6);
        REQUIRE(mu6.terms().size() == 6);
        for (int i = 0; i < 200; ++i) {
            const std::vector<double> p{gen::real(rng, 0.0, 1.0), gen::real(rng, 0.0, 1.0)};
            double expect = 0.0;
            double prev = 0.0;
            for (GridIndex k = 1; k <= 6; ++k) {
                const NuField nu(fam, fam.m() + k);
                expect += nu.eval(p).value / static_cast<double>(k * k);
                const double partial = MuField(fam, k).eval(p).value;
                CHECK(partial >= prev);
                prev = partial;
            }
            CHECK(mu6.eval(p).value == doctest::Approx(expect).epsilon(1e-13));
        }
    }

    TEST_CASE("mu batch evaluation") {
        gen::Rng rng(54);
        const MuField mu(unit_family(builtin_loglog(2)), 5);
        simd::PointBatch batch(2, 100);
        for (double& v : batch.data) v = gen::real(rng, 0.0, 1.0);
        std::vector<double> values;
        std::vector<std::uint8_t> singular;
        mu.eval_batch(batch, values, singular);
        for (std::size_t i = 0; i < batch.count; ++i) {
            const std::vector<double> x{batch.coord(0)[i], batch.coord(1)[i]};
            CHECK(values[i] == doctest::Approx(mu.eval(x).value).epsilon(1e-12));
        }
    }

    TEST_CASE("power view") {
        const MuField mu(unit_family(builtin_sigma1()), 3);
        const PowerView pv(mu, 2.0);
        const std::vector<double> x{0.52, 0.5};
        CHECK(pv.eval(x).value == doctest::Approx(std::sqrt(mu.eval(x).value)).epsilon(1e-15));
        CHECK_THROWS_AS(PowerView(mu, 1.0), Error);
    }

    TEST_CASE("invalid arguments") {
        const FieldFamily fam = unit_family(builtin_sigma1());
        CHECK_THROWS_AS(NuField(fam, 1), Error);
        CHECK_THROWS_AS(MuField(fam, 0), Error);
        const NuField nu(fam, 3);
        const std::vector<double> outside{1.5, 0.5};
        try {
            (void)nu.eval(outside);
            FAIL("expected OutsideDomain");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::OutsideDomain);
        }
        const std::vector<double> boundary{1.0, 0.5};
        CHECK_THROWS_AS((void)nu.eval(boundary), Error);
    }
}
