#pragma once

#include "gaugeworks/cantor.hpp"
#include "gaugeworks/certificate.hpp"
#include "gaugeworks/gauge.hpp"
#include "gaugeworks/interval.hpp"
#include "gaugeworks/parallel.hpp"
#include "gaugeworks/rng.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace gaugeworks {

// Weight of the obvious level-k cover: |F_k| * g(r_k).
inline Rational canonical_upper_bound(const LevelSystem& sys, const Gauge& g, int k) {
    if (k < 1 || k > sys.depth()) throw Error("level index out of range");
    const Level& L = sys.level(k);
    return Rational(L.count) * g.eval(L.r);
}

inline Rational min_canonical_upper_bound(const LevelSystem& sys, const Gauge& g) {
    Rational best = canonical_upper_bound(sys, g, 1);
    for (int k = 2; k <= sys.depth(); ++k) best = std::min(best, canonical_upper_bound(sys, g, k));
    return best;
}

struct BoundCertificate {
    Rational lower;
    Rational upper;
    int depth = 0;
    std::string method;
    bool pass = true;
    Certificate detail;
    std::vector<std::pair<Interval, CheckRecord>> witnesses;  // violations only
};

// Random intervals for the mass-distribution family. Diameters are stratified
// over the level bands [r_{k+1}, r_k] (with r_0 = 1) and never drop below
// r_K: below the deepest level a depth-K truncation genuinely concentrates
// more mass than the gauge allows, matching the depth tag on the certificate.
inline IntervalFamily random_test_intervals(const LevelSystem& sys, std::size_t count,
                                            std::uint64_t seed) {
    SeededRng rng(seed);
    IntervalFamily fam;
    fam.intervals.reserve(count);
    const int K = sys.depth();
    for (std::size_t i = 0; i < count; ++i) {
        const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
        const Rational hi = k == 0 ? Rational(1) : sys.level(k).r;
        const Rational lo = sys.level(k + 1).r;
        const Rational diam = rng.between(lo, hi);
        const Rational left = rng.between(0, 1 - diam);
        fam.intervals.emplace_back(left, left + diam);
    }
    return fam;
}

namespace detail {

// Structured test intervals: (a) every level interval [x, x+r_k], (b) spans
// over consecutive F_k points (both bare and extended by r_k). For lattice
// levels the per-parent pattern repeats exactly, so representatives around
// each ancestor boundary stand in for the full enumeration.
inline IntervalFamily structured_intervals(const LevelSystem& sys, Certificate& cert) {
    IntervalFamily fam;
    for (int k = 1; k <= sys.depth(); ++k) {
        const Level& L = sys.level(k);
        if (L.has_points()) {
            const auto& pts = *L.points;
            for (const auto& x : pts) fam.intervals.emplace_back(x, x + L.r);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                fam.intervals.emplace_back(pts[i], pts[i + 1]);
                fam.intervals.emplace_back(pts[i], pts[i + 1] + L.r);
            }
        } else {
            // lattice level: identical child blocks, so cover the distinct
            // gap patterns: representative ranks at the block edges around
            // each ancestor-boundary crossing, plus first/middle/last.
            cert.note("level " + std::to_string(k),
                      "lattice level: structured family sampled at block boundaries");
            std::set<BigInt> ranks{BigInt(1), BigInt(2), L.count / 2, L.count - 1, L.count};
            BigInt block = 1;
            for (int d = k; d >= 2; --d) {
                block *= sys.level(d).n;
                if (block < L.count) {
                    ranks.insert(block);
                    ranks.insert(block + 1);
                }
            }
            std::vector<Rational> pts;
            for (const auto& rk : ranks)
                if (rk >= 1 && rk <= L.count) pts.push_back(sys.point_of_rank(k, rk));
            std::sort(pts.begin(), pts.end());
            for (const auto& x : pts) fam.intervals.emplace_back(x, x + L.r);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                fam.intervals.emplace_back(pts[i], pts[i + 1]);
                fam.intervals.emplace_back(pts[i], pts[i + 1] + L.r);
            }
        }
    }
    return fam;
}

}  // namespace detail

// Verifies mu(I) <= factor * g(diam I) over the structured family plus the
// caller-supplied intervals, all comparisons exact. A pass certifies the
// depth-K bracket [1/factor, min_k |F_k| g(r_k)].
inline BoundCertificate mass_distribution_check(const LevelSystem& sys, const Gauge& g,
                                                const Rational& factor,
                                                const IntervalFamily& tests) {
    if (factor <= 0) throw Error("mass distribution factor must be positive");
    BoundCertificate out;
    out.method = "mass_distribution";
    out.depth = sys.depth();
    out.detail.name = "mass_distribution";

    IntervalFamily fam = detail::structured_intervals(sys, out.detail);
    fam.intervals.insert(fam.intervals.end(), tests.intervals.begin(), tests.intervals.end());

    const std::size_t n = fam.intervals.size();
    std::vector<unsigned char> ok(n, 0);
    std::vector<Rational> mu(n), bound(n);
    parallel_for(n, [&](std::size_t i) {
        const Interval& I = fam.intervals[i];
        mu[i] = measure_of_interval(sys, I);
        bound[i] = factor * g.eval(I.diam());
        ok[i] = mu[i] <= bound[i] ? 1 : 0;
    });
    std::size_t violations = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!ok[i]) {
            ++violations;
            CheckRecord rec{"mu(I) <= factor*g(diam I)", to_pq_string(mu[i]), "<=",
                            to_pq_string(bound[i]), false};
            out.witnesses.emplace_back(fam.intervals[i], rec);
            if (out.witnesses.size() >= 8) break;
        }
    }
    out.pass = violations == 0;
    out.detail.pass = out.pass;
    out.detail.note("intervals tested", std::to_string(n));
    if (!out.pass) {
        out.detail.fail("mass distribution violated on " + std::to_string(violations) + " intervals");
        const auto& w = out.witnesses.front().first;
        out.detail.witness["interval_left"] = to_pq_string(w.left);
        out.detail.witness["interval_right"] = to_pq_string(w.right);
        out.lower = 0;
    } else {
        out.lower = 1 / factor;
    }
    out.upper = min_canonical_upper_bound(sys, g);
    return out;
}

// Minimal antichain cover weight over the construction tree, nodes restricted
// to r_level <= max_diam. Balance makes every node of a level equivalent, so
// the bottom-up recursion collapses to one value per level.
inline Rational net_measure_dp(const LevelSystem& sys, const Gauge& g, const Rational& max_diam,
                               const BigInt& node_cap = BigInt(10000)) {
    BigInt nodes = 0;
    for (const auto& l : sys.levels) nodes += l.count;
    if (nodes > node_cap) throw Error("node limit exceeded");
    const int K = sys.depth();
    bool feasible = false;
    Rational cost;  // optimal cover weight of one level-K..k subtree
    for (int k = K; k >= 1; --k) {
        const Level& L = sys.level(k);
        const bool admissible = L.r <= max_diam;
        if (k == K) {
            if (!admissible) throw Error("no admissible antichain: deepest level exceeds max_diam");
            cost = g.eval(L.r);
            feasible = true;
            continue;
        }
        const Rational via_children = Rational(sys.level(k + 1).n) * cost;
        if (admissible)
            cost = std::min(g.eval(L.r), via_children);
        else
            cost = via_children;
    }
    (void)feasible;
    return Rational(sys.level(1).count) * cost;
}

struct BoxRow {
    Rational delta;
    BigInt count;
    double ratio = 0.0;  // log(count)/log(1/delta), reporting only
};

namespace detail {

inline double ratio_float(const BigInt& count, const Rational& delta) {
    if (count <= 1) return 0.0;
    const double logc = std::log(to_double(count));
    const double logd = std::log(to_double(Rational(1) / delta));
    return logd > 0 ? logc / logd : 0.0;
}

// grid cells [i*delta, (i+1)*delta) hit by a closed interval; degenerate
// intervals occupy the single cell containing the point
inline void add_cells(std::set<std::pair<BigInt, BigInt>>& ranges, const Interval& I,
                      const Rational& delta) {
    const BigInt lo = rat_floor(I.left / delta);
    BigInt hi = rat_ceil(I.right / delta) - 1;
    if (hi < lo) hi = lo;
    ranges.emplace(lo, hi);
}

inline BigInt count_cells(std::set<std::pair<BigInt, BigInt>>& ranges) {
    BigInt total = 0;
    BigInt cur_lo = 0, cur_hi = -1;
    bool open = false;
    for (const auto& [lo, hi] : ranges) {
        if (!open) {
            cur_lo = lo;
            cur_hi = hi;
            open = true;
        } else if (lo <= cur_hi + 1) {
            if (hi > cur_hi) cur_hi = hi;
        } else {
            total += cur_hi - cur_lo + 1;
            cur_lo = lo;
            cur_hi = hi;
        }
    }
    if (open) total += cur_hi - cur_lo + 1;
    return total;
}

}  // namespace detail

// Box counts of the depth-K truncation (union of the deepest level
// intervals) at the given scales; counts and deltas exact, ratio float-only.
inline std::vector<BoxRow> box_counting(const LevelSystem& sys, const std::vector<Rational>& scales) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] <= 0) throw Error("box counting scales must be positive");
        if (i > 0 && scales[i] >= scales[i - 1]) throw Error("box counting scales must decrease");
    }
    const Level& L = sys.levels.back();
    if (!L.has_points()) throw Error("box counting needs an explicit deepest level");
    std::vector<BoxRow> rows;
    for (const auto& d : scales) {
        std::set<std::pair<BigInt, BigInt>> ranges;
        for (const auto& x : *L.points) detail::add_cells(ranges, Interval(x, x + L.r), d);
        BoxRow row;
        row.delta = d;
        row.count = detail::count_cells(ranges);
        row.ratio = detail::ratio_float(row.count, d);
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<BoxRow> box_counting_points(const std::vector<Rational>& pts,
                                               const std::vector<Rational>& scales) {
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] <= 0) throw Error("box counting scales must be positive");
        if (i > 0 && scales[i] >= scales[i - 1]) throw Error("box counting scales must decrease");
    }
    std::vector<BoxRow> rows;
    for (const auto& d : scales) {
        std::set<std::pair<BigInt, BigInt>> ranges;
        for (const auto& x : pts) detail::add_cells(ranges, Interval(x, x), d);
        BoxRow row;
        row.delta = d;
        row.count = detail::count_cells(ranges);
        row.ratio = detail::ratio_float(row.count, d);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gaugeworks
