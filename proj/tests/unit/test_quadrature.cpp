#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gen.hpp"

#include "gridsing/error.hpp"
#include "gridsing/quadrature.hpp"

using namespace gridsing;

TEST_SUITE("quadrature") {
    TEST_CASE("Gauss-Legendre is exact for low degree polynomials") {
        const auto& gl = GaussLegendre::instance();
        double wsum = 0.0;
        for (double w : gl.weights()) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
        for (int k = 0; k <= 31; ++k) {
            const double got = gl.integrate([k](double x) { return std::pow(x, k); }, 0.0, 1.0);
            CHECK(got == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
        const double deg32 = gl.integrate([](double x) { return std::pow(x, 32); }, -1.0, 1.0);
        CHECK(std::abs(deg32 - 2.0 / 33.0) > 1e-12);
    }

    TEST_CASE("adaptive rule on a smooth integrand") {
        const IntervalEstimate e = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-13);
        CHECK(e.converged);
        CHECK(e.value == doctest::Approx(2.0).epsilon(1e-13));
    }

    TEST_CASE("sigma1 in the plane integrates to one") {
        const QuadratureResult r = radial_quadrature(builtin_sigma1(), 2, 0.0, {.tol = 1e-12});
        CHECK(r.verdict == QuadratureVerdict::Converged);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
        for (std::size_t i = 1; i < r.partial_sums.size(); ++i) CHECK(r.partial_sums[i] >= r.partial_sums[i - 1]);
    }

    TEST_CASE("power profiles match 1/(n - s)") {
        for (std::size_t n = 2; n <= 4; ++n) {
            for (double s : {0.0, 0.5, 1.0, 1.5}) {
                const QuadratureResult r = radial_quadrature(builtin_power(s), n, 0.0, {.tol = 1e-11});
                CHECK(r.verdict == QuadratureVerdict::Converged);
                CHECK(r.value == doctest::Approx(1.0 / (static_cast<double>(n) - s)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("a harmonic integrand is declared divergent") {
        // sigma = rho^-2 in the plane: each dyadic panel carries ln 2.
        const QuadratureResult r = radial_quadrature(builtin_power(2.0), 2, 0.0);
        CHECK(r.verdict == QuadratureVerdict::Divergent);
        CHECK(r.value == doctest::Approx(static_cast<double>(r.panels) * std::numbers::ln2).epsilon(1e-9));
        CHECK_THROWS_AS(radial_integral(builtin_power(2.0), 2), Error);
        const SigmaProfile table = profile_from_text("at0 1\npiece 0 inf : rho^(-3)\n");
        CHECK(radial_quadrature(table, 2, 0.0).verdict == QuadratureVerdict::Divergent);
    }

    TEST_CASE("truncated integrals") {
        gen::Rng rng(41);
        for (int i = 0; i < 50; ++i) {
            const double eps = std::exp(-gen::real(rng, 0.1, 30.0));
            const QuadratureResult r = radial_quadrature(builtin_sigma1(), 3, eps, {.tol = 1e-11});
            CHECK(r.verdict == QuadratureVerdict::Converged);
            CHECK(r.value == doctest::Approx(0.5 * (1.0 - eps * eps)).epsilon(1e-9));
        }
        CHECK_THROWS_AS(radial_quadrature(builtin_sigma1(), 2, 1.0), Error);
    }

    TEST_CASE("segments across the loglog knee match the closed tail") {
        gen::Rng rng(42);
        for (std::size_t n : {2u, 3u}) {
            const SigmaProfile s = builtin_loglog(n);
            for (int i = 0; i < 40; ++i) {
                const double a = std::exp(-gen::real(rng, 3.0, 40.0));
                const double b = std::exp(-gen::real(rng, 0.0, 2.5));
                const IntervalEstimate e = radial_segment(s, n, a, b, 1e-11);
                const double closed = *s.radial_tail(b, n) - *s.radial_tail(a, n);
                CHECK(e.value == doctest::Approx(closed).epsilon(1e-8));
            }
        }
    }

    TEST_CASE("radial integral provenance") {
        CHECK(radial_integral(builtin_sigma1(), 2).provenance == "exact");
        const SigmaProfile table = profile_from_text("at0 1\npiece 0 inf : 1/rho\n");
        const RadialIntegral q = radial_integral(table, 2, 1e-9);
        CHECK(q.provenance.rfind("quadrature", 0) == 0);
        CHECK(q.value == doctest::Approx(1.0).epsilon(1e-8));
    }
}
