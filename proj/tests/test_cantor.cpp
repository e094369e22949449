#include "gaugeworks/cantor.hpp"
#include "gaugeworks/rng.hpp"

#include <doctest.h>

using namespace gaugeworks;

namespace {

Level toy_parent(std::vector<Rational> pts, Rational r) {
    Level l;
    l.m = BigInt(pts.size());
    l.r = std::move(r);
    l.n = BigInt(pts.size());
    l.count = BigInt(pts.size());
    l.points = std::move(pts);
    return l;
}

}  // namespace

TEST_CASE("build_grid over (0,1) picks the window left endpoints") {
    const auto grid = build_grid(4, IntervalFamily{{Interval(0, 1)}});
    CHECK(grid.r == Rational(1, 161));
    REQUIRE(grid.points.size() == 4);
    CHECK(grid.points[0] == Rational(9, 40));
    CHECK(grid.points[1] == Rational(19, 40));
    CHECK(grid.points[2] == Rational(29, 40));
    CHECK(grid.points[3] == Rational(39, 40));
    // every point admissible: [x, x+r] strictly inside (0,1)
    for (const auto& x : grid.points) {
        CHECK(x > 0);
        CHECK(x + grid.r < 1);
    }
}

TEST_CASE("build_grid fails at the first infeasible window") {
    const IntervalFamily G{{Interval(0, Rational(49, 100))}};
    CHECK_THROWS_WITH_AS(build_grid(4, G), "grid infeasible at j=3", Error);
}

TEST_CASE("build_grid with m=1 succeeds at 9/10") {
    // 9/10 + 1/11 = 109/110 < 1, so the leftmost window point is admissible
    CHECK(Rational(9, 10) + Rational(1, 11) < 1);
    const auto grid = build_grid(1, IntervalFamily{{Interval(0, 1)}});
    REQUIRE(grid.points.size() == 1);
    CHECK(grid.points[0] == Rational(9, 10));
    CHECK(grid.r == Rational(1, 11));
}

TEST_CASE("grid points obey the window bound |x - j/m| <= 1/(10m)") {
    IntervalFamily G{{Interval(Rational(1, 100), Rational(2, 5)),
                      Interval(Rational(1, 2), Rational(99, 100))}};
    const BigInt m = 12;
    const Rational r = grid_r(m);
    for (BigInt j = 1; j <= m; ++j) {
        auto x = grid_point(G, m, r, j);
        if (!x) continue;
        CHECK(rat_abs(*x - Rational(j, m)) <= Rational(1, 10 * m));
        bool inside = false;
        for (const auto& comp : G.intervals)
            if (comp.left < *x && *x + r < comp.right) inside = true;
        CHECK(inside);
    }
}

TEST_CASE("refine_balanced keeps the candidates inside the artificial root") {
    const Level root = toy_parent({Rational(0)}, Rational(1, 4));
    const auto grid = build_grid(16, IntervalFamily{{Interval(0, 1)}});
    const Level child = refine_balanced(root, grid);
    // oracle: grid points (10j-1)/160 with x + 1/2561 <= 1/4, i.e. j = 1..4
    REQUIRE(child.n == 4);
    CHECK((*child.points)[0] == Rational(9, 160));
    CHECK((*child.points)[1] == Rational(19, 160));
    CHECK((*child.points)[2] == Rational(29, 160));
    CHECK((*child.points)[3] == Rational(39, 160));
    for (const auto& x : *child.points) CHECK(x + grid.r <= Rational(1, 4));
}

TEST_CASE("refine_balanced trims every parent to the minimum count, leftmost kept") {
    const Level parents = toy_parent({Rational(0), Rational(62, 125)}, Rational(1, 4));
    const auto grid = build_grid(24, IntervalFamily{{Interval(0, 1)}});
    // oracle by enumeration over windows x_j = (10j-1)/240, r_g = 1/5761:
    //   parent [0, 1/4]:          j = 1..6  (x_6 + r_g = 59/240 + 1/5761 <= 1/4)
    //   parent [62/125, ...+1/4]: j = 13..17 (x_12 = 119/240 < 62/125; x_18 + r_g too far)
    CHECK(Rational(59, 240) + grid.r <= Rational(1, 4));
    CHECK(Rational(119, 240) < Rational(62, 125));
    CHECK(Rational(129, 240) >= Rational(62, 125));
    CHECK(Rational(179, 240) + grid.r > Rational(62, 125) + Rational(1, 4));
    const Level child = refine_balanced(parents, grid);
    CHECK(child.n == 5);
    CHECK(child.count == 10);
    REQUIRE(child.points->size() == 10);
    for (int j = 1; j <= 5; ++j)
        CHECK((*child.points)[static_cast<std::size_t>(j - 1)] == Rational(10 * j - 1, 240));
    for (int j = 13; j <= 17; ++j)
        CHECK((*child.points)[static_cast<std::size_t>(j - 8)] == Rational(10 * j - 1, 240));
    // the rightmost candidate of parent 1 (window 6) was discarded
    for (const auto& x : *child.points) CHECK(x != Rational(59, 240));
}

TEST_CASE("refine_balanced reports an empty parent") {
    const Level far = toy_parent({Rational(3, 2)}, Rational(1, 4));
    const auto grid = build_grid(16, IntervalFamily{{Interval(0, 1)}});
    CHECK_THROWS_WITH_AS(refine_balanced(far, grid), "refinement empty at parent 3/2", Error);
}

TEST_CASE("build_system (4, 10000) at depth 2 satisfies the est bounds") {
    const auto model = all_unit_model(2);
    const auto sys = build_system(model, {BigInt(4), BigInt(10000)}, 2);
    REQUIRE(sys.depth() == 2);
    CHECK(sys.level(1).count == 4);
    CHECK(sys.level(1).r == Rational(1, 161));
    const Rational rm = sys.level(1).r * Rational(10000);
    CHECK(rm / 2 * 4 <= Rational(sys.level(2).count));
    CHECK(Rational(sys.level(2).count) <= 2 * rm * 4);
    CHECK(verify_structure(sys).pass);
}

TEST_CASE("lattice and explicit builds agree exactly") {
    const auto model = all_unit_model(2);
    BuildOptions explicit_opts;
    explicit_opts.prefer_lattice = false;
    const std::vector<BigInt> schedule{BigInt(4), BigInt(2048)};
    const auto lat = build_system(model, schedule, 2);
    const auto exp = build_system(model, schedule, 2, explicit_opts);
    REQUIRE(lat.depth() == exp.depth());
    for (int k = 1; k <= 2; ++k) {
        CHECK(lat.level(k).r == exp.level(k).r);
        CHECK(lat.level(k).n == exp.level(k).n);
        CHECK(lat.level(k).count == exp.level(k).count);
        REQUIRE(lat.level(k).has_points());
        REQUIRE(exp.level(k).has_points());
        CHECK(*lat.level(k).points == *exp.level(k).points);
    }
    // depth 3: the full grid is too large to materialize, so compare the
    // lattice refinement against the window-by-window scan directly
    const auto lat3 = build_system(all_unit_model(3), {BigInt(4), BigInt(2048), BigInt(1) << 27}, 3);
    const Level scan3 =
        detail::refine_lazy(IntervalFamily{{Interval(0, 1)}}, exp.levels.back(), BigInt(1) << 27);
    REQUIRE(lat3.level(3).has_points());
    REQUIRE(scan3.has_points());
    CHECK(lat3.level(3).n == scan3.n);
    CHECK(*lat3.level(3).points == *scan3.points);
}

TEST_CASE("index counting agrees with binary search counting") {
    const auto model = all_unit_model(2);
    const auto sys = build_system(model, {BigInt(4), BigInt(2048)}, 2);
    REQUIRE(sys.indexable());
    REQUIRE(sys.level(2).has_points());
    // strip the lattice to force the binary-search path
    LevelSystem pts_only = sys;
    for (auto& l : pts_only.levels) {
        l.lat.reset();
        l.full_grid = false;
    }
    SeededRng rng(77);
    for (int i = 0; i < 500; ++i) {
        Rational a = rng.unit(), b = rng.unit();
        if (a > b) std::swap(a, b);
        const Interval I(a, b);
        CHECK(sys.leaves_in(I) == pts_only.leaves_in(I));
    }
    CHECK(sys.leaves_in(Interval(0, 1)) == sys.leaf_count());
}

TEST_CASE("build_system rejects a too-coarse schedule") {
    const auto model = all_unit_model(2);
    CHECK_THROWS_AS(build_system(model, {BigInt(4), BigInt(5)}, 2), Error);
    try {
        build_system(model, {BigInt(4), BigInt(5)}, 2);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("grid too coarse") != std::string::npos);
    }
}

TEST_CASE("build_system depth 1 is the bare grid") {
    const auto sys = build_system(all_unit_model(1), {BigInt(4)}, 1);
    CHECK(sys.depth() == 1);
    CHECK(sys.level(1).count == 4);
    CHECK(natural_gauge(sys).breakpoints() ==
          std::vector<Gauge::Breakpoint>{{Rational(1, 161), Rational(1, 4)}});
}

TEST_CASE("build_system_auto doubles to the first workable schedule") {
    const auto sys = build_system_auto(all_unit_model(3), 4, 3);
    REQUIRE(sys.depth() == 3);
    CHECK(sys.level(1).m == 4);
    CHECK(sys.level(2).m == 512);
    CHECK(sys.level(3).m == 8388608);
    CHECK(sys.level(2).n == 3);
    CHECK(sys.level(3).n == 3);
    CHECK(sys.leaf_count() == 36);
    CHECK(check_ratio_monotone(natural_gauge(sys)).pass);
    CHECK(verify_structure(materialize(sys)).pass);
}

TEST_CASE("measure_of_interval worked examples") {
    const auto sys = build_system(all_unit_model(2), {BigInt(4), BigInt(2048)}, 2);
    const Level& deepest = sys.levels.back();
    REQUIRE(deepest.has_points());
    // a single level-K interval carries exactly 1/|F_K|
    for (const auto& x : *deepest.points)
        CHECK(measure_of_interval(sys, Interval(x, x + deepest.r)) == Rational(1, deepest.count));
    CHECK(measure_of_interval(sys, Interval(0, 1)) == 1);
    // far away from every level-1 interval
    CHECK(measure_of_interval(sys, Interval(Rational(1, 100), Rational(2, 100))) == 0);
}

TEST_CASE("level measures are additive at every level") {
    const auto sys = build_system(all_unit_model(2), {BigInt(4), BigInt(2048)}, 2);
    for (int k = 1; k <= sys.depth(); ++k) {
        const Level& L = sys.level(k);
        REQUIRE(L.has_points());
        Rational total = 0;
        for (const auto& x : *L.points) total += measure_of_interval(sys, Interval(x, x + L.r));
        CHECK(total == 1);
    }
}

TEST_CASE("natural gauge of a 2-level system") {
    const auto sys = build_system(all_unit_model(2), {BigInt(4), BigInt(10000)}, 2);
    const Gauge g = natural_gauge(sys);
    REQUIRE(g.breakpoints().size() == 2);
    CHECK(g.breakpoints()[0] == Gauge::Breakpoint{Rational(1, 161), Rational(1, 4)});
    CHECK(g.breakpoints()[1].first == sys.level(2).r);
    CHECK(g.breakpoints()[1].second == Rational(1, sys.level(2).count));
    CHECK(check_ratio_monotone(g).pass);
}

TEST_CASE("toy systems behave like balanced systems") {
    const auto toy = make_toy_system(3, 3);
    CHECK(toy.leaf_count() == 9);
    CHECK(verify_structure(toy).pass);
    Rational total = 0;
    const Level& L = toy.levels.back();
    for (const auto& x : *L.points) total += measure_of_interval(toy, Interval(x, x + L.r));
    CHECK(total == 1);
}

TEST_CASE("point_of_rank walks the lattice in order") {
    const auto sys = build_system(all_unit_model(2), {BigInt(4), BigInt(2048)}, 2);
    REQUIRE(sys.level(2).has_points());
    for (BigInt rank = 1; rank <= sys.level(2).count; ++rank)
        CHECK(sys.point_of_rank(2, rank) ==
              sys.level(2).value_of_index(sys.index_of_rank(2, rank)));
}
