#pragma once

#include "gaugeworks/certificate.hpp"
#include "gaugeworks/numeric.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gaugeworks {

// Finitely supported measure with rational weights.
struct DiscreteMeasure {
    std::vector<std::pair<Rational, Rational>> support;  // (point, weight), sorted by point

    void normalize() {
        std::map<Rational, Rational> acc;
        for (const auto& [p, w] : support) {
            if (w <= 0) throw Error("discrete measure weights must be positive");
            acc[p] += w;
        }
        support.assign(acc.begin(), acc.end());
    }

    Rational mass() const {
        Rational s = 0;
        for (const auto& [p, w] : support) s += w;
        return s;
    }
};

inline DiscreteMeasure point_mass(const Rational& at, const Rational& w = 1) {
    DiscreteMeasure m;
    m.support.emplace_back(at, w);
    return m;
}

// Pushforward of the product measure under summation: the convolution.
// weight(s) = sum over tuples with sum s of the product of weights.
inline DiscreteMeasure pushforward_sum(const std::vector<DiscreteMeasure>& measures,
                                       const BigInt& tuple_cap = BigInt(1) << 22) {
    BigInt tuples = 1;
    for (const auto& m : measures) {
        if (m.support.empty()) throw Error("cannot convolve an empty measure");
        tuples *= BigInt(m.support.size());
        if (tuples > tuple_cap) throw Error("tuple cap exceeded in pushforward_sum");
    }
    std::map<Rational, Rational> acc;
    acc[Rational(0)] = 1;
    for (const auto& m : measures) {
        std::map<Rational, Rational> next;
        for (const auto& [s, ws] : acc)
            for (const auto& [p, wp] : m.support) next[s + p] += ws * wp;
        acc = std::move(next);
    }
    DiscreteMeasure out;
    out.support.assign(acc.begin(), acc.end());
    return out;
}

struct PigeonholeReport {
    std::vector<std::size_t> chosen_part;  // per translate: first part with positive mass
    std::vector<std::size_t> hits;         // per part: number of translates choosing it
    std::size_t best_part = 0;
    std::size_t best_hits = 0;
    std::size_t floor_bound = 0;  // ceil(|translates| / |parts|)
    Certificate cert;
};

// Finite analogue of the sigma-finiteness accumulation: every translate of K
// pushes positive mass into some part, so one part is hit by at least
// ceil(T/P) translates.
inline PigeonholeReport pigeonhole_translates(const DiscreteMeasure& K,
                                              const std::vector<Rational>& translates,
                                              const std::vector<std::vector<Rational>>& parts) {
    if (parts.empty() || translates.empty()) throw Error("translates and parts must be nonempty");
    if (parts.size() >= translates.size())
        throw Error("pigeonhole requires fewer parts than translates");

    // the parts must partition the union of translated supports exactly
    std::set<Rational> uni;
    for (const auto& t : translates)
        for (const auto& [p, w] : K.support) uni.insert(p + t);
    std::set<Rational> covered;
    for (const auto& part : parts)
        for (const auto& x : part) {
            if (!uni.count(x))
                throw Error("partition point " + to_pq_string(x) + " outside the union");
            if (!covered.insert(x).second)
                throw Error("partition point " + to_pq_string(x) + " covered twice");
        }
    if (covered.size() != uni.size()) {
        for (const auto& x : uni)
            if (!covered.count(x)) throw Error("partition misses point " + to_pq_string(x));
    }

    PigeonholeReport rep;
    rep.cert.name = "pigeonhole";
    rep.hits.assign(parts.size(), 0);
    std::vector<std::set<Rational>> part_sets;
    part_sets.reserve(parts.size());
    for (const auto& part : parts) part_sets.emplace_back(part.begin(), part.end());
    for (const auto& t : translates) {
        std::size_t chosen = parts.size();
        for (std::size_t pi = 0; pi < parts.size() && chosen == parts.size(); ++pi) {
            Rational mass = 0;
            for (const auto& [p, w] : K.support)
                if (part_sets[pi].count(p + t)) mass += w;
            if (mass > 0) chosen = pi;
        }
        if (chosen == parts.size()) throw Error("translate receives no positive part mass");
        rep.chosen_part.push_back(chosen);
        ++rep.hits[chosen];
    }
    rep.best_part = 0;
    for (std::size_t pi = 1; pi < parts.size(); ++pi)
        if (rep.hits[pi] > rep.hits[rep.best_part]) rep.best_part = pi;
    rep.best_hits = rep.hits[rep.best_part];
    rep.floor_bound = (translates.size() + parts.size() - 1) / parts.size();
    rep.cert.check("pigeonhole: best part hit count >= ceil(T/P)", Rational(rep.best_hits),
                   Rel::GE, Rational(rep.floor_bound));
    rep.cert.note("analogue", "finite analogue of non-sigma-finite accumulation");
    return rep;
}

}  // namespace gaugeworks
