#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gen.hpp"

#include "gridsing/error.hpp"
#include "gridsing/integrals.hpp"

using namespace gridsing;

namespace {

constexpr double kPi = std::numbers::pi;

FieldFamily unit_family(const SigmaProfile& s, std::size_t n = 2) { return FieldFamily(Domain::unit_cube(n), s); }

// sigma(1) (meas Omega - meas G_t) + n I meas G_t, computed from scratch for
// the unit square where X_t has (t-1)^2 disjoint balls of radius 1/(2t).
double unit_square_oracle(double sigma1, double radial, GridIndex t) {
    const double td = static_cast<double>(t);
    const double g = (td - 1.0) * (td - 1.0) * kPi / (4.0 * td * td);
    return sigma1 * (1.0 - g) + 2.0 * radial * g;
}

}  // namespace

TEST_SUITE("integrals") {
    TEST_CASE("nu on the unit square") {
        const NuIntegral r = integral_nu_exact(NuField(unit_family(builtin_sigma1()), 2));
        CHECK(r.value == doctest::Approx(1.0 + kPi / 16).epsilon(1e-14));
        CHECK(r.ball_measure == doctest::Approx(kPi / 16).epsilon(1e-14));
        CHECK(r.bound == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(r.within_bound);
        for (GridIndex t = 2; t <= 21; ++t) {
            const NuIntegral q = integral_nu_exact(NuField(unit_family(builtin_sigma1()), t));
            CHECK(q.value == doctest::Approx(unit_square_oracle(1.0, 1.0, t)).epsilon(1e-13));
            CHECK(q.within_bound);
        }
    }

    TEST_CASE("bound holds on random domains") {
        gen::Rng rng(81);
        for (int trial = 0; trial < 15; ++trial) {
            const Domain dom = gen::domain(rng, 2, 3, 4, 2);
            for (const SigmaProfile& s : {builtin_sigma1(), builtin_loglog(2), builtin_constant(3.0)}) {
                const FieldFamily fam(dom, s);
                for (GridIndex t = fam.m() + 1; t <= fam.m() + 20; t += 3) {
                    const NuIntegral q = integral_nu_exact(NuField(fam, t));
                    CHECK(q.within_bound);
                    CHECK(q.value <= q.bound);
                    CHECK(q.value > 0.0);
                }
            }
        }
    }

    TEST_CASE("constant profile gives c meas Omega") {
        const Domain dom(2, {Box{{0, 0}, {2, 1}}, Box{{0, 1}, {1, 2}}});
        const FieldFamily fam(dom, builtin_constant(2.5));
        for (GridIndex t : {fam.m() + 1, fam.m() + 4}) {
            CHECK(integral_nu_exact(NuField(fam, t)).value == doctest::Approx(7.5).epsilon(1e-13));
        }
    }

    TEST_CASE("ball integrals") {
        const NuField nu(unit_family(builtin_sigma1()), 2);
        const GridNode y = nu.nodes().nodes()[0];
        CHECK(integral_ball_exact(nu, y) == doctest::Approx(kPi / 8).epsilon(1e-14));
        const NuField flat(unit_family(builtin_constant(1.0)), 2);
        CHECK(integral_ball_exact(flat, y) == doctest::Approx(kPi / 16).epsilon(1e-14));
        GridNode off{2, {0, 0}};
        try {
            (void)integral_ball_exact(nu, off);
            FAIL("expected NodeNotInSet");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NodeNotInSet);
        }
    }

    TEST_CASE("balls plus the constant level reproduce the total") {
        for (const SigmaProfile& s : {builtin_sigma1(), builtin_loglog(2)}) {
            const Domain dom(2, {Box{{0, 0}, {1, 1}}, Box{{Rational(1, 2), 0}, {Rational(3, 2), 1}}});
            const NuField nu(FieldFamily(dom, s), 6);
            double sum = 0.0;
            for (const auto& y : nu.nodes().nodes()) sum += integral_ball_exact(nu, y);
            const NuIntegral total = integral_nu_exact(nu);
            const double off = s(1.0) * (total.domain_measure - total.ball_measure);
            CHECK(sum + off == doctest::Approx(total.value).epsilon(1e-12));
        }
    }

    TEST_CASE("mu integrals") {
        const FieldFamily fam = unit_family(builtin_sigma1());
        const MuIntegral one = integral_mu_exact(MuField(fam, 1));
        CHECK(one.value == doctest::Approx(integral_nu_exact(NuField(fam, 2)).value).epsilon(1e-15));
        double prev = 0.0;
        for (GridIndex t = 1; t <= 10; ++t) {
            const MuIntegral r = integral_mu_exact(MuField(fam, t));
            double expect = 0.0;
            for (GridIndex k = 1; k <= t; ++k) expect += unit_square_oracle(1.0, 1.0, k + 1) / static_cast<double>(k * k);
            CHECK(r.value == doctest::Approx(expect).epsilon(1e-13));
            CHECK(r.value > prev);
            CHECK(r.value <= 6.0);
            CHECK(r.within_bound);
            CHECK(r.terms.size() == t);
            prev = r.value;
        }
    }

    TEST_CASE("cube restricted integrals") {
        const FieldFamily fam = unit_family(builtin_sigma1());
        const NuField nu(fam, 5);
        const double exact = integral_nu_exact(nu).value;
        const CubeIntegral all = integral_over_cube(nu, Box{{-1, -1}, {2, 2}});
        CHECK(all.total == doctest::Approx(exact).epsilon(1e-12));
        CHECK(all.straddling_balls == 0);
        CHECK(all.clipped_measure == 1.0);
        const CubeIntegral none = integral_over_cube(nu, Box{{5, 5}, {6, 6}});
        CHECK(none.total == 0.0);
        // The quarter square around the single node of X_2 holds a quarter of everything.
        const NuField nu2(fam, 2);
        const CubeIntegral quarter = integral_over_cube(nu2, Box{{0, 0}, {Rational(1, 2), Rational(1, 2)}});
        CHECK(quarter.straddling_balls == 1);
        CHECK(std::abs(quarter.total - (1.0 + kPi / 16) / 4) <= std::max(4 * quarter.half_width, 1e-3));
        // Cubes aligned with the node cubes of X_5 contain whole balls.
        const CubeIntegral aligned = integral_over_cube(nu, Box{{Rational(1, 10), Rational(1, 10)}, {Rational(1, 2), Rational(1, 2)}});
        CHECK(aligned.straddling_balls == 0);
        CHECK(aligned.inside_balls == 4);
        CHECK(aligned.total == doctest::Approx(0.16 - 4 * kPi / 100 + 2 * 4 * kPi / 100).epsilon(1e-12));
        CHECK_THROWS_AS(integral_over_cube(nu, Box{{0, 0, 0}, {1, 1, 1}}), Error);
    }

    TEST_CASE("shell integrals") {
        const FieldFamily fam = unit_family(builtin_sigma1());
        const NuField nu(fam, fam.m() + 1);
        CHECK(shell_integral(nu, ProfileTransform::identity(), 0.5).value == doctest::Approx(kPi / 16).epsilon(1e-10));
        CHECK(shell_integral(nu, ProfileTransform::identity(), 1e-9).value == doctest::Approx(kPi / 8).epsilon(1e-8));
        CHECK_THROWS_AS(shell_integral(NuField(fam, 3), ProfileTransform::identity(), 0.5), Error);
        CHECK_THROWS_AS(shell_integral(nu, ProfileTransform::identity(), 1.0), Error);
    }
}
