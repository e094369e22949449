#include "gaugeworks/gauge.hpp"
#include "gaugeworks/rng.hpp"

#include <doctest.h>

using namespace gaugeworks;

namespace {
Gauge g_two() { return Gauge({{1, 1}, {Rational(1, 2), Rational(1, 4)}}); }
}  // namespace

TEST_CASE("eval interpolates exactly") {
    const Gauge g = g_two();
    // between breakpoints: 1/4 + ((3/4 - 1/2)/(1 - 1/2)) * (1 - 1/4) = 5/8
    CHECK(g.eval(Rational(3, 4)) == Rational(5, 8));
    CHECK(g.eval(0) == 0);
    CHECK(g.eval(Rational(1, 2)) == Rational(1, 4));
    CHECK(g.eval(1) == 1);
    // below the smallest breakpoint: chord to the origin
    CHECK(g.eval(Rational(1, 4)) == Rational(1, 8));
    // above the largest: last segment slope 3/2
    CHECK(g.eval(2) == Rational(1) + Rational(3, 2));
    CHECK_THROWS_AS(g.eval(Rational(-1)), Error);
}

TEST_CASE("gauge constructor enforces the invariants") {
    CHECK_THROWS_AS(Gauge(std::vector<Gauge::Breakpoint>{}), Error);
    CHECK_THROWS_AS(Gauge({{1, 1}, {1, Rational(1, 2)}}), Error);          // x not decreasing
    CHECK_THROWS_AS(Gauge({{1, 1}, {Rational(1, 2), 1}}), Error);          // y not strict
    CHECK_THROWS_AS(Gauge({{1, 1}, {Rational(1, 2), Rational(-1)}}), Error);
}

TEST_CASE("gauge monotonicity on random pairs") {
    const Gauge g = g_two();
    SeededRng rng(11);
    for (int i = 0; i < 400; ++i) {
        Rational x = rng.unit() * 2, y = rng.unit() * 2;
        if (x > y) std::swap(x, y);
        CHECK(g.eval(x) <= g.eval(y));
    }
}

TEST_CASE("pointwise_min is idempotent and matches the pointwise oracle") {
    const Gauge g = g_two();
    const Gauge m = pointwise_min(g, g);
    SeededRng rng(17);
    for (int i = 0; i < 200; ++i) {
        const Rational x = rng.unit() * 3;
        CHECK(m.eval(x) == g.eval(x));
    }
}

TEST_CASE("pointwise_min finds the exact crossing") {
    const Gauge g1 = g_two();
    const Gauge g2({{1, Rational(1, 2)}});  // line of slope 1/2 through the origin
    const Gauge m = pointwise_min(g1, g2);
    // segments cross at x* = 1/2 (solving 1/4 + (x-1/2)*3/2 = x/2)
    bool has_half = false;
    for (const auto& [x, y] : m.breakpoints())
        if (x == Rational(1, 2)) {
            has_half = true;
            CHECK(y == Rational(1, 4));
        }
    CHECK(has_half);
    SeededRng rng(23);
    for (int i = 0; i < 1000; ++i) {
        const Rational x = rng.unit() * 3;
        CHECK(m.eval(x) == std::min(g1.eval(x), g2.eval(x)));
    }
}

TEST_CASE("pointwise_min lower-bounds both inputs and meets one of them") {
    const Gauge g1({{1, 1}, {Rational(1, 3), Rational(1, 9)}});
    const Gauge g2({{Rational(4, 5), Rational(1, 2)}, {Rational(1, 7), Rational(1, 5)}});
    const Gauge m = pointwise_min(g1, g2);
    SeededRng rng(29);
    for (int i = 0; i < 1000; ++i) {
        const Rational x = rng.unit() * 2;
        const Rational v = m.eval(x);
        CHECK(v <= g1.eval(x));
        CHECK(v <= g2.eval(x));
        CHECK((v == g1.eval(x) || v == g2.eval(x)));
    }
}

TEST_CASE("check_ratio_monotone matches the worked examples") {
    // ratios 1 then 1/2: smaller x got the smaller ratio, so this fails
    const auto bad = check_ratio_monotone(g_two());
    CHECK_FALSE(bad.pass);
    CHECK(bad.witness.at("x_hi") == "1/1");
    CHECK(bad.witness.at("x_lo") == "1/2");

    const auto good = check_ratio_monotone(Gauge({{1, 1}, {Rational(1, 2), Rational(3, 4)}}));
    CHECK(good.pass);

    CHECK(check_ratio_monotone(Gauge({{1, 1}})).pass);
}

TEST_CASE("scale multiplies values and rejects nonpositive factors") {
    const Gauge g = g_two();
    const Gauge s1 = scale(g, 1);
    const Gauge s2 = scale(Gauge({{1, 1}}), 2);
    CHECK(s2.breakpoints()[0].second == Rational(2));
    SeededRng rng(31);
    for (int i = 0; i < 100; ++i) {
        const Rational x = rng.unit() * 2;
        const Rational c = rng.unit() + Rational(1, 7);
        CHECK(scale(g, c).eval(x) == c * g.eval(x));
        CHECK(s1.eval(x) == g.eval(x));
    }
    CHECK_THROWS_WITH_AS(scale(g, 0), "scale factor must be positive", Error);
    CHECK_THROWS_AS(scale(g, Rational(-2)), Error);
}

TEST_CASE("check_concave matches the worked examples") {
    // slopes in x-increasing order: 3/2 (origin to 1/2) then 1/2 -> nonincreasing
    CHECK(check_concave(Gauge({{1, 1}, {Rational(1, 2), Rational(3, 4)}})).pass);
    // slopes 1/4 then 7/4 -> increasing -> fail
    CHECK_FALSE(check_concave(Gauge({{1, 1}, {Rational(1, 2), Rational(1, 8)}})).pass);
    CHECK(check_concave(Gauge({{1, 1}})).pass);
}
