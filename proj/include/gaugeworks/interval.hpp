#pragma once

#include "gaugeworks/certificate.hpp"
#include "gaugeworks/numeric.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace gaugeworks {

// Closed rational interval on the line. Open sets are stored with the same
// record and interpreted as open at use sites (containment tests there use
// strict endpoint inequalities).
struct Interval {
    Rational left;
    Rational right;

    Interval() = default;
    Interval(Rational l, Rational r) : left(std::move(l)), right(std::move(r)) {
        if (left > right) throw Error("interval with left > right");
    }

    Rational diam() const { return right - left; }

    bool contains_closed(const Rational& x) const { return left <= x && x <= right; }
    bool contains_open(const Rational& x) const { return left < x && x < right; }
};

struct IntervalFamily {
    std::vector<Interval> intervals;

    IntervalFamily() = default;
    explicit IntervalFamily(std::vector<Interval> iv) : intervals(std::move(iv)) {}

    Rational total_length() const {
        Rational s = 0;
        for (const auto& i : intervals) s += i.diam();
        return s;
    }
};

// c(delta): total length of the members with diam <= delta.
inline Rational tail_mass(const IntervalFamily& family, const Rational& delta) {
    if (delta < 0) throw Error("tail_mass requires delta >= 0");
    Rational s = 0;
    for (const auto& i : family.intervals) {
        const Rational d = i.diam();
        if (d <= delta) s += d;
    }
    return s;
}

// Finite model of a nested decreasing sequence of open sets inside (0,1):
// level n is a finite union of disjoint open intervals.
struct OpenSetModel {
    std::vector<IntervalFamily> levels;
};

// Sorts a level and enforces: nondegenerate, pairwise disjoint (as open
// intervals), contained in (0,1).
inline void validate_model_level(IntervalFamily& fam) {
    std::sort(fam.intervals.begin(), fam.intervals.end(),
              [](const Interval& a, const Interval& b) { return a.left < b.left; });
    for (std::size_t i = 0; i < fam.intervals.size(); ++i) {
        const auto& iv = fam.intervals[i];
        if (iv.left >= iv.right) throw Error("model interval must have left < right");
        if (iv.left < 0 || iv.right > 1) throw Error("model interval must lie inside (0,1)");
        if (i > 0 && fam.intervals[i - 1].right > iv.left)
            throw Error("model intervals must be pairwise disjoint");
    }
}

inline void validate_model(OpenSetModel& model) {
    for (auto& level : model.levels) validate_model_level(level);
}

// Does the open interval (a,b) sit inside a single component of the sorted
// disjoint family? If not, returns a point of (a,b) missed by the family.
inline std::optional<Rational> uncovered_point(const IntervalFamily& parents, const Interval& child) {
    for (const auto& p : parents.intervals)
        if (p.left <= child.left && child.right <= p.right) return std::nullopt;
    // walk the components to locate the first uncovered gap
    Rational cursor = child.left;
    for (const auto& p : parents.intervals) {
        if (p.right <= cursor) continue;
        if (p.left > cursor) {
            const Rational hi = std::min(p.left, child.right);
            return (cursor + hi) / 2;
        }
        cursor = p.right;
        if (cursor >= child.right) break;
    }
    if (cursor < child.right) return (cursor + child.right) / 2;
    // union covers it but across several touching components; the shared
    // endpoints are not interior points of the open union
    for (const auto& p : parents.intervals)
        if (child.left < p.right && p.right < child.right) return p.right;
    return std::nullopt;
}

inline Certificate validate_nested(const OpenSetModel& model) {
    Certificate cert;
    cert.name = "nested_model";
    for (std::size_t n = 0; n + 1 < model.levels.size(); ++n) {
        for (const auto& child : model.levels[n + 1].intervals) {
            if (auto w = uncovered_point(model.levels[n], child)) {
                cert.fail("level " + std::to_string(n + 2) + " escapes level " + std::to_string(n + 1));
                cert.witness["point"] = to_pq_string(*w);
                cert.witness["level"] = std::to_string(n + 2);
                return cert;
            }
        }
    }
    cert.note("levels", std::to_string(model.levels.size()));
    return cert;
}

inline OpenSetModel all_unit_model(int depth) {
    OpenSetModel m;
    m.levels.assign(static_cast<std::size_t>(depth), IntervalFamily{{Interval(0, 1)}});
    return m;
}

inline bool is_full_unit_level(const IntervalFamily& fam) {
    return fam.intervals.size() == 1 && fam.intervals[0].left == 0 && fam.intervals[0].right == 1;
}

}  // namespace gaugeworks
