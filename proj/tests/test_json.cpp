#include "gaugeworks/json_io.hpp"
#include "gaugeworks/rng.hpp"

#include <doctest.h>

using namespace gaugeworks;

TEST_CASE("rational wire format") {
    CHECK(rational_json(Rational(1, 8)) == "1/8");
    CHECK(rational_json(Rational(1)) == "1/1");
    CHECK(rational_from(Json("6/8"), "t") == Rational(3, 4));
    CHECK_THROWS_AS(rational_from(Json("3/0"), "t"), ParseError);
    CHECK_THROWS_AS(rational_from(Json::object(), "t"), ParseError);
}

TEST_CASE("bigint wire format switches to strings past 64 bits") {
    CHECK(bigint_json(BigInt(42)) == Json(42));
    const BigInt huge = BigInt(1) << 100;
    const Json j = bigint_json(huge);
    CHECK(j.is_string());
    CHECK(bigint_from(j, "t") == huge);
    CHECK(bigint_from(Json(-7), "t") == -7);
}

TEST_CASE("model round trip with validation") {
    OpenSetModel m;
    m.levels.push_back(IntervalFamily{{Interval(0, Rational(1, 2)), Interval(Rational(3, 5), 1)}});
    m.levels.push_back(IntervalFamily{{Interval(Rational(1, 10), Rational(2, 5))}});
    const auto j = model_json(m);
    const auto back = model_from(j);
    REQUIRE(back.levels.size() == 2);
    CHECK(back.levels[0].intervals[0].right == Rational(1, 2));
    CHECK(model_json(back) == j);
    Json bad = j;
    bad["levels"][0][0]["left"] = "9/10";  // overlaps the second component
    CHECK_THROWS_AS(model_from(bad), Error);
}

TEST_CASE("gauge round trip rejects invalid breakpoint lists") {
    const Gauge g({{1, 1}, {Rational(1, 2), Rational(1, 4)}});
    const auto back = gauge_from(gauge_json(g));
    CHECK(back.breakpoints() == g.breakpoints());
    Json bad = gauge_json(g);
    bad["breakpoints"][1][0] = "1/1";  // x not strictly decreasing
    CHECK_THROWS_AS(gauge_from(bad), ParseError);
}

TEST_CASE("system round trip: explicit and lattice levels") {
    const auto sys = build_system(all_unit_model(2), {BigInt(4), BigInt(2048)}, 2);
    const auto back = system_from(system_json(sys));
    REQUIRE(back.depth() == 2);
    CHECK(back.level(2).count == sys.level(2).count);
    CHECK(*back.level(2).points == *sys.level(2).points);
    CHECK(system_json(back) == system_json(sys));

    // deep lattice level: F omitted, counts survive
    NullCover cover;
    cover.rounds.push_back(IntervalFamily{{Interval(0, Rational(1, 1000))}});
    const auto sched = schedule_scales(all_unit_model(2), cover, 2);
    const auto sj = system_json(sched.sys2);
    CHECK_FALSE(sj["levels"][1].contains("F"));
    const auto back2 = system_from(sj);
    CHECK(back2.level(2).count == sched.sys2.level(2).count);
    CHECK(back2.leaves_in(Interval(0, 1)) == sched.sys2.leaf_count());
    CHECK(system_json(back2) == sj);
}

TEST_CASE("cover and measure round trips") {
    NullCover c;
    c.rounds.push_back(IntervalFamily{{Interval(0, Rational(1, 4))}});
    c.rounds.push_back(IntervalFamily{{Interval(Rational(1, 2), Rational(3, 4)),
                                       Interval(Rational(4, 5), Rational(9, 10))}});
    c.groups.push_back({Rational(1, 100), BigInt(12), 2});
    const auto back = cover_from(cover_json(c));
    CHECK(back.rounds.size() == 2);
    CHECK(back.groups.size() == 1);
    CHECK(back.total_length() == c.total_length());
    CHECK(cover_json(back) == cover_json(c));

    DiscreteMeasure m;
    m.support.emplace_back(Rational(0), Rational(1, 2));
    m.support.emplace_back(Rational(1, 16), Rational(1, 2));
    const auto mj = measure_json(m);
    const auto mb = measure_from(mj);
    CHECK(mb.mass() == 1);
    CHECK(measure_json(mb) == mj);
}

TEST_CASE("schedule round trip preserves every certificate") {
    NullCover cover;
    cover.rounds.push_back(IntervalFamily{{Interval(0, Rational(1, 1000))}});
    const auto sched = schedule_scales(all_unit_model(2), cover, 2);
    const auto j = schedule_json(sched);
    const auto back = schedule_from(j);
    CHECK(back.m1 == sched.m1);
    CHECK(back.m2 == sched.m2);
    CHECK(back.rho1 == sched.rho1);
    CHECK(back.rho2 == sched.rho2);
    CHECK(back.certificates.size() == sched.certificates.size());
    CHECK(schedule_json(back) == j);
    // a reparsed schedule still verifies
    CHECK(verify_null(back, cover).pass);
}

TEST_CASE("digit vector and bases round trips") {
    DigitVector v;
    v.digits = {BigInt(1), BigInt(0), BigInt(3)};
    CHECK(digit_vector_from(digit_vector_json(v)).digits == v.digits);
    const auto b = davies_bases(5);
    const auto back = bases_from(bases_json(b));
    CHECK(back.bases == b.bases);
    CHECK(*back.davies_caps == *b.davies_caps);
    Json bad = bases_json(b);
    bad["davies_caps"][2] = 1;  // below n_i^i
    CHECK_THROWS_AS(bases_from(bad), ParseError);
}
