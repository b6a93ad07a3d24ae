#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "gen.hpp"

#include "gridsing/error.hpp"
#include "gridsing/grid.hpp"

using namespace gridsing;

namespace {

using Index = std::vector<std::int64_t>;

// Brute force: every integer vector in a padded range around the bounding
// box, kept when the side-1/t cube around index/t sits inside one box or,
// failing that, passes the exact union test on the cube's corners grid.
std::set<Index> nodes_oracle(const Domain& dom, std::int64_t t) {
    const Box bb = dom.bounding_box();
    const std::size_t n = dom.dim();
    std::vector<std::int64_t> lo(n), hi(n);
    for (std::size_t d = 0; d < n; ++d) {
        lo[d] = floor(Rational(bb.lower[d] * t)).get_si() - 1;
        hi[d] = ceil(Rational(bb.upper[d] * t)).get_si() + 1;
    }
    std::set<Index> out;
    Index idx(lo);
    while (true) {
        Box cube;
        for (std::size_t d = 0; d < n; ++d) {
            cube.lower.push_back(Rational(2 * idx[d] - 1, 2 * t));
            cube.upper.push_back(Rational(2 * idx[d] + 1, 2 * t));
            cube.lower.back().canonicalize();
            cube.upper.back().canonicalize();
        }
        if (dom.contains_open_box(cube)) out.insert(idx);
        std::size_t d = 0;
        while (d < n && ++idx[d] > hi[d]) {
            idx[d] = lo[d];
            ++d;
        }
        if (d == n) break;
    }
    return out;
}

std::set<Index> as_set(const NodeSet& s) {
    std::set<Index> out;
    for (const auto& y : s.nodes()) out.insert(y.index);
    return out;
}

// V_0 = 1, V_1 = 2, V_n = 2 pi V_{n-2} / n.
double ball_volume_recurrence(std::size_t n) {
    double v[9] = {1.0, 2.0};
    for (std::size_t k = 2; k <= n; ++k) v[k] = 2.0 * std::numbers::pi * v[k - 2] / static_cast<double>(k);
    return v[n];
}

}  // namespace

TEST_SUITE("grid") {
    TEST_CASE("unit square node sets") {
        const Domain sq = Domain::unit_cube(2);
        CHECK(enumerate_nodes(sq, 1).count() == 0);
        const NodeSet two = enumerate_nodes(sq, 2);
        REQUIRE(two.count() == 1);
        CHECK(two.nodes()[0].coords() == RationalVec{Rational(1, 2), Rational(1, 2)});
        CHECK(enumerate_nodes(sq, 5).count() == 16);
        for (GridIndex t = 2; t <= 12; ++t) CHECK(enumerate_nodes(sq, t).count() == (t - 1) * (t - 1));
    }

    TEST_CASE("enumeration matches brute force on random unions") {
        gen::Rng rng(21);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t dim = trial % 4 == 0 ? 3 : 2;
            const Domain dom = gen::domain(rng, dim, 3, 3, 2);
            for (std::int64_t t : {1, 2, 3, 5, 7}) {
                const NodeSet s = enumerate_nodes(dom, static_cast<GridIndex>(t));
                CHECK(as_set(s) == nodes_oracle(dom, t));
            }
        }
    }

    TEST_CASE("node sets are sorted and membership is consistent") {
        const Domain two(2, {Box{{0, 0}, {1, 1}}, Box{{Rational(1, 2), 0}, {Rational(3, 2), 1}}});
        const NodeSet s = enumerate_nodes(two, 6);
        for (std::size_t i = 1; i < s.count(); ++i) CHECK(s.nodes()[i - 1] < s.nodes()[i]);
        for (const auto& y : s.nodes()) CHECK(s.contains(y.index));
        const std::vector<std::int64_t> outside{0, 3};
        CHECK_FALSE(s.contains(outside));
    }

    TEST_CASE("minimal m") {
        CHECK(minimal_m(Domain::unit_cube(2)) == 1);
        CHECK(minimal_m(Domain::unit_cube(3)) == 1);
        const Domain big(2, {Box{{0, 0}, {3, 3}}});
        CHECK(minimal_m(big) == 1);
        std::set<Index> x1;
        for (std::int64_t a : {1, 2}) for (std::int64_t b : {1, 2}) x1.insert({a, b});
        CHECK(as_set(enumerate_nodes(big, 1)) == x1);
        const Domain apart(2, {Box{{0, 0}, {1, 1}}, Box{{2, 0}, {3, 1}}});
        CHECK(minimal_m(apart) == minimal_m(Domain::unit_cube(2)));
        // Width 1/4 fits a cube of side 1/t around i/t with i >= 1 only once t >= 6.
        const Domain thin(2, {Box{{0, 0}, {Rational(1, 4), 1}}});
        CHECK(minimal_m(thin) == 5);
        for (GridIndex t = 6; t <= 20; ++t) CHECK_FALSE(enumerate_nodes(thin, t).empty());
        CHECK(enumerate_nodes(thin, 5).empty());
    }

    TEST_CASE("minimal m agrees with a scan on random domains") {
        gen::Rng rng(22);
        for (int trial = 0; trial < 30; ++trial) {
            const Domain dom = gen::domain(rng, 2, 3, 6, 1);
            const GridIndex m = minimal_m(dom);
            for (GridIndex t = m + 1; t <= m + 15; ++t) CHECK_FALSE(enumerate_nodes(dom, t).empty());
            if (m > 1) CHECK(enumerate_nodes(dom, m).empty());
        }
    }

    TEST_CASE("ball union measure") {
        BallUnion none;
        CHECK(ball_union_measure(none, 2) == 0.0);
        const NodeSet one = enumerate_nodes(Domain::unit_cube(2), 2);
        const BallUnion g2 = grid_balls(one);
        CHECK(g2.radius == Rational(1, 4));
        CHECK(ball_union_measure(g2, 2) == doctest::Approx(std::numbers::pi / 16).epsilon(1e-15));
        const BallUnion g5 = shrunk_balls(enumerate_nodes(Domain::unit_cube(2), 5), 1);
        CHECK(g5.radius == Rational(1, 10));
        CHECK(ball_union_measure(g5, 2) == doctest::Approx(0.5026548245743669).epsilon(1e-15));
        CHECK(16 * std::numbers::pi / 100 == doctest::Approx(0.5026548245743669).epsilon(1e-15));
        CHECK(g5.pairwise_disjoint());
        CHECK(shrunk_balls(enumerate_nodes(Domain::unit_cube(2), 5), 3).radius == Rational(1, 30));
    }

    TEST_CASE("unit ball constants") {
        const auto c2 = unit_ball_constants(2);
        CHECK(c2.ball_volume == doctest::Approx(std::numbers::pi).epsilon(1e-15));
        CHECK(c2.sphere_area == doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
        CHECK(c2.alpha == doctest::Approx(0.7853981633974483).epsilon(1e-15));
        const auto c3 = unit_ball_constants(3);
        CHECK(c3.ball_volume == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-15));
        CHECK(c3.sphere_area == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
        CHECK(c3.alpha == doctest::Approx(0.5235987755982988).epsilon(1e-15));
        for (std::size_t n = 2; n <= 8; ++n) {
            const auto c = unit_ball_constants(n);
            CHECK(c.ball_volume == doctest::Approx(ball_volume_recurrence(n)).epsilon(1e-14));
            CHECK(c.alpha > 0.0);
            CHECK(c.alpha < 1.0);
        }
        CHECK_THROWS_AS(unit_ball_constants(1), Error);
    }
}
