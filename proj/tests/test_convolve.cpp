#include "gaugeworks/convolve.hpp"
#include "gaugeworks/digits.hpp"
#include "gaugeworks/rng.hpp"

#include <doctest.h>

#include <algorithm>

using namespace gaugeworks;

namespace {

DiscreteMeasure measure(std::initializer_list<std::pair<Rational, Rational>> pts) {
    DiscreteMeasure m;
    for (const auto& [p, w] : pts) m.support.emplace_back(p, w);
    m.normalize();
    return m;
}

DiscreteMeasure random_measure(SeededRng& rng, std::size_t max_support) {
    DiscreteMeasure m;
    const std::size_t n = 1 + rng.below(max_support);
    for (std::size_t i = 0; i < n; ++i)
        m.support.emplace_back(Rational(BigInt(rng.below(1000)), BigInt(1 + rng.below(50))),
                               Rational(BigInt(1 + rng.below(20)), BigInt(1 + rng.below(20))));
    m.normalize();
    return m;
}

}  // namespace

TEST_CASE("pushforward_sum reproduces the worked 2x2 example") {
    const auto k1 = measure({{Rational(0), Rational(1, 2)}, {Rational(1, 4), Rational(1, 2)}});
    const auto k2 = measure({{Rational(0), Rational(1, 2)}, {Rational(1, 16), Rational(1, 2)}});
    const auto conv = pushforward_sum({k1, k2});
    REQUIRE(conv.support.size() == 4);
    const std::vector<Rational> expect{Rational(0), Rational(1, 16), Rational(1, 4), Rational(5, 16)};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(conv.support[i].first == expect[i]);
        CHECK(conv.support[i].second == Rational(1, 4));
    }
}

TEST_CASE("single measures and point masses are neutral") {
    const auto m = measure({{Rational(1, 3), Rational(2, 5)}, {Rational(1, 2), Rational(3, 5)}});
    const auto same = pushforward_sum({m});
    REQUIRE(same.support.size() == m.support.size());
    for (std::size_t i = 0; i < m.support.size(); ++i) {
        CHECK(same.support[i].first == m.support[i].first);
        CHECK(same.support[i].second == m.support[i].second);
    }
    const auto shifted = pushforward_sum({point_mass(0), m});
    REQUIRE(shifted.support.size() == m.support.size());
    for (std::size_t i = 0; i < m.support.size(); ++i)
        CHECK(shifted.support[i].second == m.support[i].second);
}

TEST_CASE("mass conservation and permutation invariance on random triples") {
    SeededRng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_measure(rng, 8);
        const auto b = random_measure(rng, 8);
        const auto c = random_measure(rng, 8);
        const auto abc = pushforward_sum({a, b, c});
        CHECK(abc.mass() == a.mass() * b.mass() * c.mass());
        const auto cab = pushforward_sum({c, a, b});
        REQUIRE(abc.support.size() == cab.support.size());
        for (std::size_t i = 0; i < abc.support.size(); ++i) {
            CHECK(abc.support[i].first == cab.support[i].first);
            CHECK(abc.support[i].second == cab.support[i].second);
        }
        // re-bracketing via a partial fold
        const auto ab = pushforward_sum({a, b});
        const auto ab_c = pushforward_sum({ab, c});
        REQUIRE(abc.support.size() == ab_c.support.size());
        for (std::size_t i = 0; i < abc.support.size(); ++i) {
            CHECK(abc.support[i].first == ab_c.support[i].first);
            CHECK(abc.support[i].second == ab_c.support[i].second);
        }
    }
}

TEST_CASE("support is inside the sumset, with equality for distinct sums") {
    SeededRng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_measure(rng, 6);
        const auto b = random_measure(rng, 6);
        const auto conv = pushforward_sum({a, b});
        std::set<Rational> sumset;
        for (const auto& [p, wp] : a.support)
            for (const auto& [q, wq] : b.support) sumset.insert(p + q);
        CHECK(conv.support.size() <= sumset.size());
        for (const auto& [s, w] : conv.support) CHECK(sumset.count(s) == 1);
        if (conv.support.size() == a.support.size() * b.support.size())
            CHECK(conv.support.size() == sumset.size());
    }
}

TEST_CASE("pushforward_sum rejects oversized products and empty factors") {
    const auto a = measure({{Rational(0), 1}, {Rational(1), 1}});
    CHECK_THROWS_AS(pushforward_sum({a, a, a}, BigInt(4)), Error);
    DiscreteMeasure empty;
    CHECK_THROWS_AS(pushforward_sum({empty}), Error);
    CHECK_THROWS_AS(measure({{Rational(0), Rational(0)}}), Error);
}

TEST_CASE("pigeonhole over disjoint translates") {
    const auto K = measure({{Rational(0), Rational(1, 2)}, {Rational(1, 100), Rational(1, 2)}});
    const std::vector<Rational> translates{Rational(0), Rational(1), Rational(2), Rational(3),
                                           Rational(4)};
    std::vector<std::vector<Rational>> parts(2);
    int toggle = 0;
    for (const auto& t : translates) {
        parts[static_cast<std::size_t>(toggle % 2)].push_back(t);
        parts[static_cast<std::size_t>(toggle % 2)].push_back(t + Rational(1, 100));
        ++toggle;
    }
    const auto rep = pigeonhole_translates(K, translates, parts);
    CHECK(rep.cert.pass);
    CHECK(rep.floor_bound == 3);
    CHECK(rep.best_hits >= 3);
    // independent recount: translate t lands in the part holding its support
    for (std::size_t t = 0; t < translates.size(); ++t) CHECK(rep.chosen_part[t] == t % 2);
}

TEST_CASE("single translate and single part takes full mass") {
    const auto K = measure({{Rational(0), 1}});
    CHECK_THROWS_AS(pigeonhole_translates(K, {Rational(0)}, {{Rational(0)}}), Error);
    // |parts| < |translates| is a hard precondition
    const auto rep = pigeonhole_translates(
        K, {Rational(0), Rational(1)}, {{Rational(0), Rational(1)}});
    CHECK(rep.best_hits == 2);
    CHECK(rep.hits[0] == 2);
}

TEST_CASE("pigeonhole validates the partition") {
    const auto K = measure({{Rational(0), 1}});
    const std::vector<Rational> ts{Rational(0), Rational(1), Rational(2)};
    CHECK_THROWS_AS(pigeonhole_translates(K, ts, {{Rational(0)}, {Rational(1)}}), Error);
    CHECK_THROWS_AS(
        pigeonhole_translates(K, ts, {{Rational(0), Rational(1)}, {Rational(1), Rational(2)}}),
        Error);
    CHECK_THROWS_AS(
        pigeonhole_translates(K, ts, {{Rational(0), Rational(7)}, {Rational(1), Rational(2)}}),
        Error);
}

TEST_CASE("pigeonhole on the digit pipeline translates") {
    // P-translates of a 2-component K at L = 3, parts split by the first level
    BaseSystem b;
    for (int i = 1; i <= 12; ++i) b.bases.push_back(bigint_pow(4, static_cast<unsigned long>(i)));
    DigitSetSpec spec;
    spec.base = b;
    const auto U1 = uniformize(spec, {DigitVector{{1, 2}}, DigitVector{{0, 3, 1}}}, 1, 2);
    const auto U2 = uniformize(spec, {DigitVector{{0, 1, 1}}, DigitVector{{0, 0, 2, 1}}}, 2, 3);
    std::vector<DigitVector> K;
    for (const auto& x : U1.vectors)
        for (const auto& y : U2.vectors) K.push_back(digit_sum(b, x, y));
    const auto table = r_table_from_components(b, {U1.vectors, U2.vectors}, 12);
    const auto P = build_perfect(b, table, 3);

    DiscreteMeasure Km;
    for (const auto& v : K) Km.support.emplace_back(value_of(b, v), Rational(1, K.size()));
    Km.normalize();

    std::vector<Rational> translates;
    std::vector<std::vector<Rational>> parts(2);
    for (int bit = 0; bit < 8; ++bit) {
        const std::vector<int> sel{(bit >> 2) & 1, (bit >> 1) & 1, bit & 1};
        const auto t = value_of(b, perfect_translate_digits(P, sel));
        translates.push_back(t);
        for (const auto& [p, w] : Km.support)
            parts[static_cast<std::size_t>(sel[0])].push_back(p + t);
    }
    const auto rep = pigeonhole_translates(Km, translates, parts);
    CHECK(rep.cert.pass);
    CHECK(rep.floor_bound == 4);
    CHECK(rep.best_hits == 4);
    // independent recount: the chosen part matches the first selection bit
    for (int bit = 0; bit < 8; ++bit)
        CHECK(rep.chosen_part[static_cast<std::size_t>(bit)] ==
              static_cast<std::size_t>((bit >> 2) & 1));
}
