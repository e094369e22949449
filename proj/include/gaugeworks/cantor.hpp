#pragma once

#include "gaugeworks/certificate.hpp"
#include "gaugeworks/gauge.hpp"
#include "gaugeworks/interval.hpp"
#include "gaugeworks/numeric.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace gaugeworks {

// r(m) = 1/(10 m^2 + 1), strictly below the 1/(10 m^2) bound.
inline Rational grid_r(const BigInt& m) { return Rational(1, 10 * m * m + 1); }

// Leftmost admissible point of window j: candidates are w_left + t*(r/2) and
// [x, x+r] must sit strictly inside one open component of G.
inline std::optional<Rational> grid_point(const IntervalFamily& G, const BigInt& m,
                                          const Rational& r, const BigInt& j) {
    if (j < 1 || j > m) throw Error("grid window index out of range");
    const Rational w_left = Rational(10 * j - 1, 10 * m);
    const Rational w_right = Rational(10 * j + 1, 10 * m);
    const Rational step = r / 2;
    const BigInt t_max = rat_floor((w_right - w_left) / step);
    std::optional<Rational> best;
    for (const auto& comp : G.intervals) {
        // x > comp.left  and  x + r < comp.right, x on the scan lattice
        BigInt t_lo = 0;
        if (comp.left >= w_left) t_lo = rat_floor((comp.left - w_left) / step) + 1;
        BigInt t_hi = t_max;
        const Rational upper = comp.right - r;  // need x < upper
        if (upper <= w_left) continue;
        const BigInt t_u = rat_ceil((upper - w_left) / step) - 1;
        if (t_u < t_hi) t_hi = t_u;
        if (t_lo > t_hi) continue;
        const Rational x = w_left + Rational(t_lo) * step;
        if (!best || x < *best) best = x;
    }
    return best;
}

// The full m-point grid E_m inside G. Materializes every window, so m is
// capped; deep constructions use the lattice path below instead.
struct GridSpec {
    BigInt m;
    Rational r;
    std::vector<Rational> points;
};

inline GridSpec build_grid(const BigInt& m, const IntervalFamily& G,
                           const BigInt& enum_cap = BigInt(1) << 22) {
    if (m < 1) throw Error("grid size must be positive");
    if (m > enum_cap) throw Error("grid too large to materialize (m exceeds enumeration cap)");
    GridSpec grid;
    grid.m = m;
    grid.r = grid_r(m);
    grid.points.reserve(static_cast<std::size_t>(m.convert_to<std::uint64_t>()));
    for (BigInt j = 1; j <= m; ++j) {
        auto x = grid_point(G, m, grid.r, j);
        if (!x) throw Error("grid infeasible at j=" + j.str());
        grid.points.push_back(*x);
    }
    return grid;
}

// One level of a balanced system. Small systems carry the sorted left
// endpoints F explicitly. Over the full-(0,1) model with m divisible by the
// parent m, every parent receives the same child-index pattern
//   i = j*s + lo + t   (t = 0..n-1, j the parent index)
// and the level is stored as that lattice; F is then implicit and counting
// runs over indices.
struct Level {
    BigInt m;
    Rational r;
    BigInt n;      // children per parent (level 1: n = count)
    BigInt count;  // |F_k|

    struct Lattice {
        BigInt s;   // m_k / m_{k-1}
        BigInt lo;  // first child offset
    };
    std::optional<Lattice> lat;             // levels >= 2 on the lattice path
    bool full_grid = false;                 // level 1 lattice path: indices 1..m
    std::optional<std::vector<Rational>> points;

    bool indexable() const { return lat.has_value() || full_grid; }
    bool has_points() const { return points.has_value(); }

    Rational value_of_index(const BigInt& i) const {
        return Rational(10 * i - 1, 10 * m);
    }
};

struct LevelSystem {
    std::vector<Level> levels;

    int depth() const { return static_cast<int>(levels.size()); }
    const Level& level(int k) const { return levels.at(static_cast<std::size_t>(k - 1)); }
    BigInt leaf_count() const { return levels.back().count; }

    bool indexable() const {
        for (const auto& l : levels)
            if (!l.indexable()) return false;
        return true;
    }
    bool all_points() const {
        for (const auto& l : levels)
            if (!l.has_points()) return false;
        return true;
    }

    // ---- index-space machinery (lattice systems) ----

    // number of valid level-k indices <= bound
    BigInt indices_le(int k, const BigInt& bound) const {
        const Level& L = level(k);
        if (k == 1) {
            if (bound < 1) return 0;
            return bound >= L.m ? L.m : bound;
        }
        const auto& lat = *L.lat;
        // parents whose whole child block is <= bound
        const BigInt p_full = floor_div(bound - lat.lo - (L.n - 1), lat.s);
        BigInt total = indices_le(k - 1, p_full) * L.n;
        const BigInt p_next = p_full + 1;
        const BigInt t = bound - p_next * lat.s - lat.lo;
        if (t >= 0 && t < L.n && index_valid(k - 1, p_next)) total += t + 1;
        return total;
    }

    bool index_valid(int k, const BigInt& i) const {
        const Level& L = level(k);
        if (k == 1) return i >= 1 && i <= L.m;
        const auto& lat = *L.lat;
        const BigInt j = floor_div(i - lat.lo, lat.s);
        const BigInt t = i - lat.lo - j * lat.s;
        return t >= 0 && t < L.n && index_valid(k - 1, j);
    }

    // level-k index of the member with the given 1-based rank
    BigInt index_of_rank(int k, const BigInt& rank) const {
        const Level& L = level(k);
        if (rank < 1 || rank > L.count) throw Error("rank out of range");
        if (k == 1) return rank;
        const auto& lat = *L.lat;
        const BigInt parent_rank = floor_div(rank - 1, L.n) + 1;
        const BigInt t = (rank - 1) % L.n;
        return index_of_rank(k - 1, parent_rank) * lat.s + lat.lo + t;
    }

    Rational point_of_rank(int k, const BigInt& rank) const {
        const Level& L = level(k);
        if (L.has_points()) return (*L.points)[static_cast<std::size_t>((rank - 1).convert_to<std::uint64_t>())];
        return L.value_of_index(index_of_rank(k, rank));
    }

    // ---- leaf counting (both representations) ----

    // number of deepest-level left endpoints x with x <= v
    BigInt leaves_le(const Rational& v) const {
        const Level& L = levels.back();
        if (L.indexable()) {
            // (10 i - 1)/(10 m) <= v  <=>  i <= (10 v m + 1)/10
            const BigInt i_max = rat_floor((Rational(10) * v * L.m + 1) / 10);
            return indices_le(depth(), i_max);
        }
        const auto& pts = *L.points;
        return BigInt(std::upper_bound(pts.begin(), pts.end(), v) - pts.begin());
    }

    BigInt leaves_lt(const Rational& v) const {
        const Level& L = levels.back();
        if (L.indexable()) {
            const BigInt i_min = rat_ceil((Rational(10) * v * L.m + 1) / 10);
            return indices_le(depth(), i_min - 1);
        }
        const auto& pts = *L.points;
        return BigInt(std::lower_bound(pts.begin(), pts.end(), v) - pts.begin());
    }

    // leaf left endpoints inside the closed interval I
    BigInt leaves_in(const Interval& I) const { return leaves_le(I.right) - leaves_lt(I.left); }
};

// mu(I): level-K intervals fully inside I plus boundary intervals whose left
// endpoint lies in I; with the left-endpoint convention this is exactly the
// count of deepest-level left endpoints in I, over |F_K|.
struct NaturalMeasure {
    const LevelSystem* system;
};

inline Rational measure_of_interval(const NaturalMeasure& mu, const Interval& I) {
    return Rational(mu.system->leaves_in(I), mu.system->leaf_count());
}

inline Rational measure_of_interval(const LevelSystem& system, const Interval& I) {
    return Rational(system.leaves_in(I), system.leaf_count());
}

namespace detail {

// Candidate points of grid m inside one parent interval [y, y+rp], leftmost
// first, without materializing the whole grid.
inline std::vector<Rational> candidates_in_parent(const IntervalFamily& G, const BigInt& m,
                                                  const Rational& rg, const Rational& y,
                                                  const Rational& rp) {
    std::vector<Rational> out;
    // windows intersecting [y, y+rp]
    BigInt j_lo = rat_ceil((Rational(10) * y * m - 1) / 10);
    if (j_lo < 1) j_lo = 1;
    BigInt j_hi = rat_floor((Rational(10) * (y + rp) * m + 1) / 10);
    if (j_hi > m) j_hi = m;
    const Rational hi = y + rp - rg;
    for (BigInt j = j_lo; j <= j_hi; ++j) {
        auto x = grid_point(G, m, rg, j);
        if (x && *x >= y && *x <= hi) out.push_back(*x);
    }
    return out;
}

}  // namespace detail

// Balanced refinement: per parent collect the grid points whose interval sits
// inside the parent interval, equalize cardinalities by trimming every parent
// to the minimum count, keeping leftmost candidates.
inline Level refine_balanced(const Level& parent, const GridSpec& grid) {
    if (!parent.has_points()) throw Error("refine_balanced requires explicit parent points");
    std::vector<std::vector<Rational>> per_parent;
    per_parent.reserve(parent.points->size());
    BigInt n = -1;
    for (const auto& y : *parent.points) {
        std::vector<Rational> cand;
        const Rational hi = y + parent.r - grid.r;
        auto lo_it = std::lower_bound(grid.points.begin(), grid.points.end(), y);
        for (auto it = lo_it; it != grid.points.end() && *it <= hi; ++it) cand.push_back(*it);
        if (cand.empty()) throw Error("refinement empty at parent " + to_pq_string(y));
        if (n < 0 || BigInt(cand.size()) < n) n = BigInt(cand.size());
        per_parent.push_back(std::move(cand));
    }
    Level out;
    out.m = grid.m;
    out.r = grid.r;
    out.n = n;
    out.count = parent.count * n;
    out.points.emplace();
    const auto keep = static_cast<std::size_t>(n.convert_to<std::uint64_t>());
    for (auto& cand : per_parent)
        out.points->insert(out.points->end(), cand.begin(), cand.begin() + keep);
    return out;
}

namespace detail {

// Lazy variant of build_grid + refine_balanced: identical selection, but only
// windows near the parents are visited.
inline Level refine_lazy(const IntervalFamily& G, const Level& parent, const BigInt& m) {
    if (!parent.has_points()) throw Error("refine requires explicit parent points");
    const Rational rg = grid_r(m);
    std::vector<std::vector<Rational>> per_parent;
    BigInt n = -1;
    for (const auto& y : *parent.points) {
        auto cand = candidates_in_parent(G, m, rg, y, parent.r);
        if (cand.empty()) throw Error("refinement empty at parent " + to_pq_string(y));
        if (n < 0 || BigInt(cand.size()) < n) n = BigInt(cand.size());
        per_parent.push_back(std::move(cand));
    }
    Level out;
    out.m = m;
    out.r = rg;
    out.n = n;
    out.count = parent.count * n;
    out.points.emplace();
    const auto keep = static_cast<std::size_t>(n.convert_to<std::uint64_t>());
    for (auto& cand : per_parent)
        out.points->insert(out.points->end(), cand.begin(), cand.begin() + keep);
    return out;
}

// Lattice refinement over the full (0,1) level: every window j yields the
// point (10j-1)/(10m), so child indices of parent j form j*s + [lo, lo+n).
inline Level refine_lattice(const Level& parent, const BigInt& m) {
    if (!parent.indexable()) throw Error("lattice refinement requires an indexable parent");
    if (m % parent.m != 0) throw Error("lattice refinement requires divisible grid sizes");
    const BigInt s = m / parent.m;
    const Rational rg = grid_r(m);
    // i >= j*s + (1-s)/10          (left containment)
    // i <= j*s + ((1-s) + 10 m (rp - rg))/10   (right containment)
    const BigInt lo = ceil_div(1 - s, 10);
    const Rational hi_q = (Rational(1 - s) + Rational(10) * m * (parent.r - rg)) / 10;
    const BigInt hi = rat_floor(hi_q);
    const BigInt n = hi - lo + 1;
    if (n < 1) throw Error("refinement empty (lattice)");
    Level out;
    out.m = m;
    out.r = rg;
    out.n = n;
    out.count = parent.count * n;
    out.lat = Level::Lattice{s, lo};
    return out;
}

inline Level level_one(const IntervalFamily& G, const BigInt& m, const BigInt& enum_cap) {
    Level l;
    l.m = m;
    l.r = grid_r(m);
    l.n = m;
    l.count = m;
    if (is_full_unit_level(G)) {
        l.full_grid = true;
        if (m <= enum_cap) {
            l.points.emplace();
            for (BigInt j = 1; j <= m; ++j) l.points->push_back(l.value_of_index(j));
        }
    } else {
        GridSpec grid = build_grid(m, G, enum_cap);
        l.points = std::move(grid.points);
    }
    return l;
}

}  // namespace detail

struct BuildOptions {
    BigInt enum_cap = BigInt(1) << 22;         // largest grid we will materialize
    BigInt materialize_cap = BigInt(1) << 17;  // systems smaller than this also get explicit F
    bool prefer_lattice = true;                // tests disable this to force the explicit path
};

// Child-count bounds plus the spacing/nesting facts that only need arithmetic.
inline Certificate level_certificate(const Level& parent, const Level& child, int k) {
    Certificate cert;
    cert.name = "level_" + std::to_string(k);
    const Rational rm = parent.r * Rational(child.m);
    cert.check("balanced count lower bound (r_{k-1} m_k / 2)|F_{k-1}| <= |F_k|", rm / 2 * Rational(parent.count),
               Rel::LE, Rational(child.count));
    cert.check("balanced count upper bound |F_k| <= 2 r_{k-1} m_k |F_{k-1}|", Rational(child.count), Rel::LE,
               2 * rm * Rational(parent.count));
    cert.check("child interval shorter than lattice spacing", child.r, Rel::LT,
               Rational(1, child.m));
    cert.check("children nest strictly below parent diameter",
               Rational(child.n) * child.r, Rel::LT, parent.r);
    return cert;
}

// Exhaustive structural invariants for explicit systems: spacing >= 0.8/m,
// nesting in exactly one parent, balanced child counts.
inline Certificate verify_structure(const LevelSystem& sys) {
    Certificate cert;
    cert.name = "structure";
    for (int k = 1; k <= sys.depth(); ++k) {
        const Level& L = sys.level(k);
        if (!L.has_points()) {
            cert.note("level " + std::to_string(k), "implicit lattice; structural facts certified arithmetically");
            continue;
        }
        const auto& pts = *L.points;
        const Rational min_gap = Rational(8, 10) / Rational(L.m);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i + 1] - pts[i] < min_gap) {
                cert.fail("spacing violation at level " + std::to_string(k));
                cert.witness["x"] = to_pq_string(pts[i]);
                return cert;
            }
        }
        if (k > 1 && sys.level(k - 1).has_points()) {
            const Level& P = sys.level(k - 1);
            BigInt per = -1;
            std::size_t child = 0;
            for (const auto& y : *P.points) {
                BigInt cnt = 0;
                while (child < pts.size() && pts[child] + L.r <= y + P.r) {
                    if (pts[child] < y) {
                        cert.fail("child escapes parent at level " + std::to_string(k));
                        cert.witness["x"] = to_pq_string(pts[child]);
                        return cert;
                    }
                    ++cnt;
                    ++child;
                }
                if (per < 0) per = cnt;
                if (cnt != per || cnt != L.n) {
                    cert.fail("unbalanced children at level " + std::to_string(k));
                    cert.witness["parent"] = to_pq_string(y);
                    return cert;
                }
            }
            if (child != pts.size()) {
                cert.fail("orphan child at level " + std::to_string(k));
                return cert;
            }
        }
    }
    cert.note("levels", std::to_string(sys.depth()));
    return cert;
}

// Depth-K truncation of the balanced construction: level 1 is the full grid
// E_{m_1} inside model level 1, each later level refines inside model level k.
inline LevelSystem build_system(const OpenSetModel& model, const std::vector<BigInt>& schedule,
                                int depth, const BuildOptions& opts = {}) {
    if (depth < 1) throw Error("depth must be >= 1");
    if (static_cast<int>(schedule.size()) < depth) throw Error("schedule shorter than depth");
    if (static_cast<int>(model.levels.size()) < depth) throw Error("model has fewer levels than depth");
    for (int k = 1; k < depth; ++k)
        if (schedule[k] <= schedule[k - 1]) throw Error("schedule must be strictly increasing");

    LevelSystem sys;
    try {
        sys.levels.push_back(detail::level_one(model.levels[0], schedule[0], opts.enum_cap));
        for (int k = 2; k <= depth; ++k) {
            const IntervalFamily& G = model.levels[static_cast<std::size_t>(k - 1)];
            Level next;
            bool lattice = false;
            {
                const Level& parent = sys.levels.back();
                if (Rational(schedule[k - 1]) <= 2 / parent.r)
                    throw Error("grid too coarse for refinement (" + schedule[k - 1].str() +
                                " <= 2/r_" + std::to_string(k - 1) + ")");
                if (opts.prefer_lattice && is_full_unit_level(G) && parent.indexable() &&
                    schedule[k - 1] % parent.m == 0) {
                    next = detail::refine_lattice(parent, schedule[k - 1]);
                    lattice = true;
                } else {
                    // full-grid feasibility first, exactly as the two-step build
                    GridSpec grid = build_grid(schedule[k - 1], G, opts.enum_cap);
                    next = refine_balanced(parent, grid);
                }
                Certificate cert = level_certificate(parent, next, k);
                if (!cert.pass)
                    throw Error("level certificate failed at level " + std::to_string(k));
            }
            sys.levels.push_back(std::move(next));
            Level& pushed = sys.levels.back();
            if (lattice && pushed.count <= opts.materialize_cap) {
                std::vector<Rational> pts;
                pts.reserve(static_cast<std::size_t>(pushed.count.convert_to<std::uint64_t>()));
                for (BigInt rank = 1; rank <= pushed.count; ++rank)
                    pts.push_back(pushed.value_of_index(sys.index_of_rank(k, rank)));
                pushed.points = std::move(pts);
            }
        }
    } catch (const Error& e) {
        throw Error(std::string(e.what()) + " (while building level " +
                    std::to_string(sys.levels.size() + 1) + ")");
    }
    return sys;
}

// Doubling search for a schedule: each level starts at twice the previous m
// and doubles until the refinement succeeds with n >= 2 and the level
// certificate holds. Used wherever the spec asks for an auto-doubled build.
inline LevelSystem build_system_auto(const OpenSetModel& model, const BigInt& m_start, int depth,
                                     const BigInt& m_cap = BigInt(1) << 64,
                                     const BuildOptions& opts = {}) {
    std::vector<BigInt> schedule;
    LevelSystem sys;
    BigInt m = m_start;
    for (int k = 1; k <= depth; ++k) {
        for (;;) {
            if (m > m_cap) throw Error("doubling cap exceeded at level " + std::to_string(k));
            try {
                std::vector<BigInt> trial = schedule;
                trial.push_back(m);
                LevelSystem candidate = build_system(model, trial, k, opts);
                if (k > 1) {
                    const Level& child = candidate.levels.back();
                    if (child.n < 2) throw Error("needs n >= 2");
                    // natural-gauge monotonicity: |F_k| r_k must drop
                    const Level& parent = candidate.levels[static_cast<std::size_t>(k - 2)];
                    if (Rational(child.count) * child.r >= Rational(parent.count) * parent.r)
                        throw Error("needs decreasing |F_k| r_k");
                }
                sys = std::move(candidate);
                schedule.push_back(m);
                break;
            } catch (const Error&) {
                m *= 2;
            }
        }
        m *= 2;
    }
    return sys;
}

// Gauge with g(r_k) = 1/|F_k| and linear interpolation in between.
inline Gauge natural_gauge(const LevelSystem& sys) {
    std::vector<Gauge::Breakpoint> bps;
    bps.reserve(sys.levels.size());
    for (const auto& l : sys.levels) bps.emplace_back(l.r, Rational(1, l.count));
    return Gauge(std::move(bps));
}

// Canonical level covers as (diam, count) groups; these stand in for the
// countable covers of the compact pieces when covers are merged.
struct MassGroup {
    Rational diam;
    BigInt count;
    int round = 1;
};

inline std::vector<MassGroup> canonical_cover_groups(const LevelSystem& sys) {
    std::vector<MassGroup> out;
    int k = 1;
    for (const auto& l : sys.levels) {
        out.push_back({l.r, l.count, k});
        ++k;
    }
    return out;
}

// Small fully-explicit systems for oracles: the artificial root (F = {0},
// r = 1) refined into `branching` children per node, `depth` levels.
inline LevelSystem make_toy_system(int branching, int depth) {
    if (branching < 1 || depth < 1) throw Error("toy system needs branching, depth >= 1");
    LevelSystem sys;
    Level root;
    root.m = 1;
    root.r = 1;
    root.n = 1;
    root.count = 1;
    root.points = std::vector<Rational>{Rational(0)};
    sys.levels.push_back(root);
    for (int k = 2; k <= depth + 0; ++k) {
        const Level& parent = sys.levels.back();
        Level next;
        next.m = parent.m * (4 * branching);
        next.r = parent.r / (4 * branching);
        next.n = branching;
        next.count = parent.count * branching;
        next.points.emplace();
        for (const auto& y : *parent.points)
            for (int t = 0; t < branching; ++t)
                next.points->push_back(y + Rational(2 * t) * parent.r / (2 * branching));
        std::sort(next.points->begin(), next.points->end());
        sys.levels.push_back(std::move(next));
    }
    return sys;
}

// Materialize an implicit system (tests and small exports).
inline LevelSystem materialize(const LevelSystem& sys, const BigInt& cap = BigInt(1) << 20) {
    LevelSystem out = sys;
    for (int k = 1; k <= out.depth(); ++k) {
        Level& L = out.levels[static_cast<std::size_t>(k - 1)];
        if (L.has_points()) continue;
        if (L.count > cap) throw Error("system too large to materialize");
        L.points.emplace();
        for (BigInt rank = 1; rank <= L.count; ++rank)
            L.points->push_back(sys.point_of_rank(k, rank));
    }
    return out;
}

}  // namespace gaugeworks
