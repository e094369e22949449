#pragma once

#include "gaugeworks/cantor.hpp"
#include "gaugeworks/certificate.hpp"
#include "gaugeworks/gauge.hpp"
#include "gaugeworks/hausdorff.hpp"
#include "gaugeworks/interval.hpp"
#include "gaugeworks/rng.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gaugeworks {

// Round-structured cover of a null set: round k lists intervals of the k-th
// covering pass. Canonical level covers of built systems enter as grouped
// (diam, count) mass so deep systems never have to be expanded.
struct NullCover {
    std::vector<IntervalFamily> rounds;
    std::vector<MassGroup> groups;

    Rational total_length() const {
        Rational s = 0;
        for (const auto& r : rounds) s += r.total_length();
        for (const auto& g : groups) s += g.diam * Rational(g.count);
        return s;
    }

    // c(delta) over the whole cover
    Rational tail_mass_all(const Rational& delta) const {
        if (delta < 0) throw Error("tail_mass requires delta >= 0");
        Rational s = 0;
        for (const auto& r : rounds) s += tail_mass(r, delta);
        for (const auto& g : groups)
            if (g.diam <= delta) s += g.diam * Rational(g.count);
        return s;
    }

    std::size_t interval_count() const {
        std::size_t n = 0;
        for (const auto& r : rounds) n += r.intervals.size();
        return n;
    }
};

struct ScheduleOptions {
    BigInt m1_start = 4;
    BigInt m_cap = BigInt(1) << 64;  // doubling cap on grid sizes
    BuildOptions build;
};

// Two interleaved balanced systems with their natural gauges and the exact
// per-level inequality records the annihilation argument needs.
struct InterleavedSchedule {
    std::vector<BigInt> m1, m2;
    std::vector<Rational> rho1, rho2;  // rho_i[t] is the level-(t+2) value
    LevelSystem sys1, sys2;
    Gauge g1, g2;
    std::vector<CheckRecord> certificates;

    int depth() const { return static_cast<int>(m1.size()); }

    const Rational& rho(int system, int k) const {
        const auto& v = system == 1 ? rho1 : rho2;
        return v.at(static_cast<std::size_t>(k - 2));
    }
    bool has_rho(int system, int k) const {
        const auto& v = system == 1 ? rho1 : rho2;
        return k >= 2 && static_cast<std::size_t>(k - 2) < v.size();
    }
    Rational r(int system, int k) const {
        return (system == 1 ? sys1 : sys2).level(k).r;
    }
};

namespace detail {

inline Rational rho_of(const LevelSystem& sys, int k) {
    return sys.level(k - 1).r / Rational(sys.level(k).n);
}

// All inequalities decidable immediately after system `i` gains level `k`.
// Every one is monotone in the candidate m, so the doubling loop can retry.
inline Certificate step_checks(int i, int k, const LevelSystem& s1, const LevelSystem& s2,
                               const NullCover& cover) {
    Certificate cert;
    cert.name = "sys" + std::to_string(i) + "_level_" + std::to_string(k);
    const LevelSystem& self = i == 1 ? s1 : s2;
    const LevelSystem& other = i == 1 ? s2 : s1;
    const std::string tag = "sys" + std::to_string(i) + " k=" + std::to_string(k) + ": ";

    if (k == 1) {
        if (i == 2) cert.check(tag + "r^2_1 < r^1_1", self.level(1).r, Rel::LT, other.level(1).r);
        return cert;
    }

    const Level& cur = self.level(k);
    const Level& prev = self.level(k - 1);
    cert.check(tag + "n_k >= 2", Rational(cur.n), Rel::GE, Rational(2));
    const Rational rm = prev.r * Rational(cur.m);
    cert.check(tag + "balanced count lower bound", rm / 2 * Rational(prev.count), Rel::LE, Rational(cur.count));
    cert.check(tag + "balanced count upper bound", Rational(cur.count), Rel::LE, 2 * rm * Rational(prev.count));
    const Rational rho_k = rho_of(self, k);
    cert.check(tag + "r_k < rho_k", cur.r, Rel::LT, rho_k);
    cert.check(tag + "rho_k < r_{k-1}", rho_k, Rel::LT, prev.r);
    cert.check(tag + "gauge ratio increases", Rational(cur.count) * cur.r, Rel::LT,
               Rational(prev.count) * prev.r);

    const Rational bound = pow2(-(k - 1));
    if (i == 1) {
        // needs system 2 built through level k-1
        cert.check(tag + "interleaving: rho^1_k < r^2_{k-1}", rho_k, Rel::LT, other.level(k - 1).r);
        if (k >= 3)
            cert.check(tag + "interleaving: rho^1_k < rho^2_{k-1}", rho_k, Rel::LT, rho_of(other, k - 1));
        cert.check(tag + "interleaving: r^1_k < r^2_{k-1}", cur.r, Rel::LT, other.level(k - 1).r);
        cert.check(tag + "tail mass: c(rho^1_k) <= 2^{-(k-1)} r^2_{k-1}",
                   cover.tail_mass_all(rho_k), Rel::LE, bound * other.level(k - 1).r);
    } else {
        // system 1 already has level k
        cert.check(tag + "interleaving: rho^2_k < rho^1_k", rho_k, Rel::LT, rho_of(other, k));
        cert.check(tag + "interleaving: r^2_k < r^1_k", cur.r, Rel::LT, other.level(k).r);
        cert.check(tag + "interleaving: rho^2_k < r^1_k", rho_k, Rel::LT, other.level(k).r);
        cert.check(tag + "tail mass: c(rho^2_k) <= 2^{-(k-1)} r^1_k",
                   cover.tail_mass_all(rho_k), Rel::LE, bound * other.level(k).r);
    }
    return cert;
}

// Grow system `i` to depth k with the doubling search; returns the accepted
// certificate and appends the level.
inline Certificate grow_level(int i, int k, LevelSystem& self, const LevelSystem& other,
                              const OpenSetModel& model, const NullCover& cover,
                              const BigInt& start_m, const ScheduleOptions& opts) {
    BigInt m = start_m;
    for (;;) {
        if (m > opts.m_cap)
            throw Error("doubling cap exceeded (sys " + std::to_string(i) + ", level " +
                        std::to_string(k) + ")");
        bool built = false;
        try {
            const IntervalFamily& G = model.levels.at(static_cast<std::size_t>(k - 1));
            Level next;
            if (k == 1) {
                next = level_one(G, m, opts.build.enum_cap);
            } else {
                const Level& parent = self.levels.back();
                if (is_full_unit_level(G) && parent.indexable() && m % parent.m == 0)
                    next = refine_lattice(parent, m);
                else
                    next = refine_lazy(G, parent, m);
            }
            self.levels.push_back(std::move(next));
            built = true;
            Certificate cert = i == 1 ? step_checks(1, k, self, other, cover)
                                      : step_checks(2, k, other, self, cover);
            if (!cert.pass) throw Error("constraint retry");
            // keep small levels explicit so shallow schedules serialize per spec
            Level& pushed = self.levels.back();
            if (!pushed.has_points() && pushed.indexable() &&
                pushed.count <= opts.build.materialize_cap && k >= 2) {
                std::vector<Rational> pts;
                for (BigInt rank = 1; rank <= pushed.count; ++rank)
                    pts.push_back(pushed.value_of_index(self.index_of_rank(k, rank)));
                pushed.points = std::move(pts);
            }
            return cert;
        } catch (const Error&) {
            if (built) self.levels.pop_back();
            m *= 2;
        }
    }
}

}  // namespace detail

// Alternately extends the two systems, doubling each new grid size until the
// interleaving and tail-mass inequalities and the structural bounds all hold
// with exact tail masses computed over the full cover.
inline InterleavedSchedule schedule_scales(const OpenSetModel& model, const NullCover& cover,
                                           int depth, const ScheduleOptions& opts = {}) {
    if (depth < 1) throw Error("depth must be >= 1");
    if (static_cast<int>(model.levels.size()) < depth)
        throw Error("model has fewer levels than depth");
    {
        OpenSetModel copy = model;
        Certificate nested = validate_nested(copy);
        if (!nested.pass) throw Error("model is not nested");
    }

    InterleavedSchedule sched;
    BigInt last_m = 0;
    for (int k = 1; k <= depth; ++k) {
        for (int i = 1; i <= 2; ++i) {
            LevelSystem& self = i == 1 ? sched.sys1 : sched.sys2;
            const LevelSystem& other = i == 1 ? sched.sys2 : sched.sys1;
            const BigInt start = (k == 1 && i == 1) ? opts.m1_start : 2 * last_m;
            Certificate cert = detail::grow_level(i, k, self, other, model, cover, start, opts);
            for (auto& rec : cert.checks) sched.certificates.push_back(rec);
            last_m = self.levels.back().m;
            (i == 1 ? sched.m1 : sched.m2).push_back(last_m);
            if (k >= 2)
                (i == 1 ? sched.rho1 : sched.rho2).push_back(detail::rho_of(self, k));
        }
    }
    sched.g1 = natural_gauge(sched.sys1);
    sched.g2 = natural_gauge(sched.sys2);
    return sched;
}

// Certifies, per simulated k, that the diameter-band sums of the min-gauge
// stay under 2^{-k+2}:
//   band^1_k = (rho^2_k, rho^1_k],   band^2_k = (rho^1_{k+1}, rho^2_k].
// Also re-derives every rho from the stored gauges, so a tampered schedule
// fails even when its band sums happen to stay small.
inline Certificate verify_null(const InterleavedSchedule& sched, const NullCover& cover) {
    Certificate cert;
    cert.name = "verify_null";
    const Gauge g = pointwise_min(sched.g1, sched.g2);
    const int K = sched.depth();

    for (int i = 1; i <= 2; ++i)
        for (int k = 2; k <= K; ++k) {
            const LevelSystem& sys = i == 1 ? sched.sys1 : sched.sys2;
            const Gauge& gi = i == 1 ? sched.g1 : sched.g2;
            const Rational expect =
                sys.level(k - 1).r * gi.eval(sys.level(k).r) / gi.eval(sys.level(k - 1).r);
            if (!cert.check("rho^" + std::to_string(i) + "_" + std::to_string(k) +
                                " matches r_{k-1} g(r_k)/g(r_{k-1})",
                            sched.rho(i, k), Rel::EQ, expect)) {
                cert.witness["rho"] = to_pq_string(sched.rho(i, k));
                cert.witness["k"] = std::to_string(k);
                cert.witness["band"] = std::to_string(i);
                return cert;
            }
        }

    auto band_sum = [&](const Rational& lo, const Rational& hi) {
        Rational s = 0;
        for (const auto& round : cover.rounds)
            for (const auto& I : round.intervals) {
                const Rational d = I.diam();
                if (lo < d && d <= hi) s += g.eval(d);
            }
        for (const auto& grp : cover.groups)
            if (lo < grp.diam && grp.diam <= hi) s += Rational(grp.count) * g.eval(grp.diam);
        return s;
    };

    for (int k = 2; k <= K; ++k) {
        const Rational bound = pow2(-k + 2);
        const Rational s1 = band_sum(sched.rho(2, k), sched.rho(1, k));
        if (!cert.check("band I^1_" + std::to_string(k) + " sum <= 2^{-k+2}", s1, Rel::LE, bound)) {
            cert.witness["k"] = std::to_string(k);
            cert.witness["band"] = "1";
            cert.witness["sum"] = to_pq_string(s1);
            return cert;
        }
        if (k + 1 <= K) {
            const Rational s2 = band_sum(sched.rho(1, k + 1), sched.rho(2, k));
            if (!cert.check("band I^2_" + std::to_string(k) + " sum <= 2^{-k+2}", s2, Rel::LE,
                            bound)) {
                cert.witness["k"] = std::to_string(k);
                cert.witness["band"] = "2";
                cert.witness["sum"] = to_pq_string(s2);
                return cert;
            }
        }
    }
    for (int n = 1; n <= K; ++n)
        cert.note("geometric tail from n=" + std::to_string(n) + ": sum 2^{-k+3}",
                  to_pq_string(pow2(-n + 4)));
    return cert;
}

// Independent re-verification: rebuild both systems from the recorded m
// schedules alone, then recompute r, n, |F|, gauges, rho and every inequality
// family from the raw model and cover.
inline Certificate verify_schedule_consistency(const InterleavedSchedule& sched,
                                               const OpenSetModel& model, const NullCover& cover,
                                               const BuildOptions& build = {}) {
    Certificate cert;
    cert.name = "schedule_consistency";
    const int K = sched.depth();
    LevelSystem fresh1 = build_system(model, sched.m1, K, build);
    LevelSystem fresh2 = build_system(model, sched.m2, K, build);
    for (int k = 1; k <= K; ++k) {
        for (int i = 1; i <= 2; ++i) {
            const LevelSystem& stored = i == 1 ? sched.sys1 : sched.sys2;
            const LevelSystem& fresh = i == 1 ? fresh1 : fresh2;
            const std::string tag = "sys" + std::to_string(i) + " k=" + std::to_string(k) + ": ";
            cert.check(tag + "r matches rebuild", stored.level(k).r, Rel::EQ, fresh.level(k).r);
            cert.check(tag + "|F| matches rebuild", Rational(stored.level(k).count), Rel::EQ,
                       Rational(fresh.level(k).count));
            cert.check(tag + "n matches rebuild", Rational(stored.level(k).n), Rel::EQ,
                       Rational(fresh.level(k).n));
            if (k >= 2) {
                const Rational rho = detail::rho_of(fresh, k);
                cert.check(tag + "rho matches rebuild", sched.rho(i, k), Rel::EQ, rho);
            }
            if (!cert.pass) return cert;
        }
    }
    // the six inequality families, from recomputed values
    for (int k = 1; k <= K; ++k) {
        Certificate c1 = detail::step_checks(1, k, fresh1, fresh2, cover);
        cert.absorb(c1);
        Certificate c2 = detail::step_checks(2, k, fresh1, fresh2, cover);
        cert.absorb(c2);
        if (!cert.pass) return cert;
    }
    // natural-gauge ratio monotonicity, full pass
    cert.absorb(check_ratio_monotone(natural_gauge(fresh1)));
    cert.absorb(check_ratio_monotone(natural_gauge(fresh2)));
    return cert;
}

// Split of a round-structured cover into two families.
struct CoverSplit {
    std::vector<std::pair<IntervalFamily, IntervalFamily>> rounds;
    Certificate cert;
};

// With a schedule: assignment by the diameter bands (round k uses band k);
// intervals outside every band fall back to the comparator rule. Without a
// schedule (Lemma mode): interval goes to family 1 iff g1(diam) <= g2(diam),
// after certifying the per-round precondition sum_min < 2^{-k}.
inline CoverSplit split_cover(const NullCover& cover, const Gauge& g1, const Gauge& g2,
                              const InterleavedSchedule* sched = nullptr) {
    CoverSplit out;
    out.cert.name = sched ? "split_cover_bands" : "split_cover_lemma";
    const int K = sched ? sched->depth() : 0;
    for (std::size_t kr = 0; kr < cover.rounds.size(); ++kr) {
        const int k = static_cast<int>(kr) + 1;
        IntervalFamily f1, f2;
        if (!sched) {
            Rational min_sum = 0;
            for (const auto& I : cover.rounds[kr].intervals)
                min_sum += std::min(g1.eval(I.diam()), g2.eval(I.diam()));
            if (min_sum >= pow2(-k))
                throw Error("split precondition violated at round " + std::to_string(k) +
                            ": sum min(g1,g2) = " + to_pq_string(min_sum));
        }
        Rational sum1 = 0, sum2 = 0;
        for (const auto& I : cover.rounds[kr].intervals) {
            const Rational d = I.diam();
            bool to_first;
            bool banded = false;
            if (sched) {
                if (k >= 2 && k <= K && sched->has_rho(2, k) && sched->has_rho(1, k) &&
                    sched->rho(2, k) < d && d <= sched->rho(1, k)) {
                    to_first = true;
                    banded = true;
                } else if (k >= 2 && k + 1 <= K && sched->has_rho(1, k + 1) &&
                           sched->has_rho(2, k) && sched->rho(1, k + 1) < d &&
                           d <= sched->rho(2, k)) {
                    to_first = false;
                    banded = true;
                }
            }
            if (!banded) to_first = g1.eval(d) <= g2.eval(d);
            if (to_first) {
                f1.intervals.push_back(I);
                sum1 += g1.eval(d);
            } else {
                f2.intervals.push_back(I);
                sum2 += g2.eval(d);
            }
        }
        if (!sched)
            out.cert.check("round " + std::to_string(k) + ": sum_1 g1 + sum_2 g2 < 2^{-k}",
                           sum1 + sum2, Rel::LT, pow2(-k));
        out.cert.note("round " + std::to_string(k) + " sizes",
                      std::to_string(f1.intervals.size()) + "+" + std::to_string(f2.intervals.size()) +
                          "/" + std::to_string(cover.rounds[kr].intervals.size()));
        out.rounds.emplace_back(std::move(f1), std::move(f2));
    }
    return out;
}

struct PointClass {
    Rational point;
    bool in_b1 = false;
};

struct ClassifyReport {
    int horizon = 0;
    std::vector<PointClass> points;
};

// Finite-horizon limsup: x lands in B1 iff for every n <= N some round
// k in [n, N] has x inside its family-1 union (closed membership).
inline ClassifyReport classify_points(const std::vector<Rational>& samples, const CoverSplit& split,
                                      int horizon) {
    if (horizon < 1 || static_cast<std::size_t>(horizon) > split.rounds.size())
        throw Error("horizon must be within the split's rounds");
    ClassifyReport rep;
    rep.horizon = horizon;
    for (const auto& x : samples) {
        bool b1 = true;
        for (int n = 1; n <= horizon && b1; ++n) {
            bool found = false;
            for (int k = n; k <= horizon && !found; ++k)
                for (const auto& I : split.rounds[static_cast<std::size_t>(k - 1)].first.intervals)
                    if (I.contains_closed(x)) {
                        found = true;
                        break;
                    }
            if (!found) b1 = false;
        }
        rep.points.push_back({x, b1});
    }
    return rep;
}

struct AssembleOptions {
    ScheduleOptions schedule;
    int max_iterations = 5;
    std::size_t random_intervals = 2000;
    std::size_t samples = 32;
    std::uint64_t seed = 1;
    Rational mass_factor = 8;
};

struct AssembleResult {
    InterleavedSchedule schedule;
    NullCover merged;           // coverA plus both canonical covers, at the fixed point
    int iterations = 0;
    Certificate null_cert;      // min-gauge annihilation over the merged cover
    BoundCertificate bracket1;  // mass-distribution bracket of system 1
    BoundCertificate bracket2;
    Rational renorm1 = 1, renorm2 = 1;
    Gauge g1_scaled, g2_scaled;
    Certificate upper_cert;     // renormalized canonical upper bounds == 1
    ClassifyReport classes;     // A-samples against the band split
    Certificate overall;
};

// Theorem-driver: runs the scheduler on coverA merged with both systems' own
// canonical covers, iterating until the merge is a fixed point, then collects
// the bracket, renormalization, annihilation and classification certificates.
inline AssembleResult assemble_partition(const OpenSetModel& model, const NullCover& coverA,
                                         int depth, const AssembleOptions& opts = {}) {
    AssembleResult res;
    NullCover current = coverA;
    std::vector<BigInt> prev_m1, prev_m2;
    bool stable = false;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        res.iterations = it;
        res.schedule = schedule_scales(model, current, depth, opts.schedule);
        NullCover next = coverA;
        for (const auto& grp : canonical_cover_groups(res.schedule.sys1)) next.groups.push_back(grp);
        for (const auto& grp : canonical_cover_groups(res.schedule.sys2)) next.groups.push_back(grp);
        if (res.schedule.m1 == prev_m1 && res.schedule.m2 == prev_m2) {
            res.merged = std::move(next);
            stable = true;
            break;
        }
        prev_m1 = res.schedule.m1;
        prev_m2 = res.schedule.m2;
        current = std::move(next);
    }
    if (!stable) throw Error("assemble_partition did not reach a fixed point");

    res.null_cert = verify_null(res.schedule, res.merged);

    res.bracket1 = mass_distribution_check(
        res.schedule.sys1, res.schedule.g1, opts.mass_factor,
        random_test_intervals(res.schedule.sys1, opts.random_intervals, opts.seed));
    res.bracket2 = mass_distribution_check(
        res.schedule.sys2, res.schedule.g2, opts.mass_factor,
        random_test_intervals(res.schedule.sys2, opts.random_intervals, opts.seed + 1));

    res.renorm1 = 1 / min_canonical_upper_bound(res.schedule.sys1, res.schedule.g1);
    res.renorm2 = 1 / min_canonical_upper_bound(res.schedule.sys2, res.schedule.g2);
    res.g1_scaled = scale(res.schedule.g1, res.renorm1);
    res.g2_scaled = scale(res.schedule.g2, res.renorm2);
    res.upper_cert.name = "renormalized_upper_bounds";
    for (int k = 1; k <= depth; ++k) {
        res.upper_cert.check("sys1 level " + std::to_string(k) + ": |F_k| g(r_k) == 1",
                             canonical_upper_bound(res.schedule.sys1, res.g1_scaled, k), Rel::EQ,
                             Rational(1));
        res.upper_cert.check("sys2 level " + std::to_string(k) + ": |F_k| g(r_k) == 1",
                             canonical_upper_bound(res.schedule.sys2, res.g2_scaled, k), Rel::EQ,
                             Rational(1));
    }

    // classify A-samples against the band split of the explicit rounds
    CoverSplit split = split_cover(res.merged, res.schedule.g1, res.schedule.g2, &res.schedule);
    std::vector<Rational> samples;
    SeededRng rng(opts.seed + 2);
    for (const auto& round : coverA.rounds)
        for (const auto& I : round.intervals) {
            samples.push_back((I.left + I.right) / 2);
            if (samples.size() >= opts.samples) break;
        }
    while (samples.size() < opts.samples && !coverA.rounds.empty() &&
           !coverA.rounds[0].intervals.empty()) {
        const auto& I = coverA.rounds[0].intervals[rng.below(coverA.rounds[0].intervals.size())];
        samples.push_back(rng.between(I.left, I.right));
    }
    if (!split.rounds.empty() && !samples.empty())
        res.classes = classify_points(samples, split, static_cast<int>(split.rounds.size()));

    res.overall.name = "assemble_partition";
    res.overall.absorb(res.null_cert);
    res.overall.absorb(res.bracket1.detail);
    res.overall.absorb(res.bracket2.detail);
    res.overall.absorb(res.upper_cert);
    if (!res.bracket1.pass || !res.bracket2.pass) res.overall.pass = false;
    return res;
}

}  // namespace gaugeworks
