#pragma once

#include "gaugeworks/certificate.hpp"
#include "gaugeworks/numeric.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gaugeworks {

// Base sequence (n_i), optionally with Davies denominators N_i >= n_i^i; the
// digit constraint always reads against n_i, the positional value against the
// denominator sequence.
struct BaseSystem {
    std::vector<BigInt> bases;
    std::optional<std::vector<BigInt>> davies_caps;

    int depth() const { return static_cast<int>(bases.size()); }

    const BigInt& denom(int i) const {  // 1-based
        if (davies_caps) return davies_caps->at(static_cast<std::size_t>(i - 1));
        return bases.at(static_cast<std::size_t>(i - 1));
    }
    const BigInt& base(int i) const { return bases.at(static_cast<std::size_t>(i - 1)); }

    void validate() const {
        if (bases.empty()) throw Error("base system needs at least one base");
        for (std::size_t i = 0; i < bases.size(); ++i) {
            if (bases[i] < 2) throw Error("bases must be >= 2");
            if (i > 0 && bases[i] < bases[i - 1]) throw Error("bases must be nondecreasing");
        }
        if (davies_caps) {
            if (davies_caps->size() != bases.size())
                throw Error("davies caps must match base count");
            for (std::size_t i = 0; i < bases.size(); ++i)
                if ((*davies_caps)[i] < bigint_pow(bases[i], static_cast<unsigned long>(i + 1)))
                    throw Error("davies caps must satisfy N_i >= n_i^i at index " +
                                std::to_string(i + 1));
        }
    }
};

// n_i = i+1, N_i = (i+1)^i
inline BaseSystem davies_bases(int depth) {
    BaseSystem b;
    b.davies_caps.emplace();
    for (int i = 1; i <= depth; ++i) {
        b.bases.emplace_back(i + 1);
        b.davies_caps->push_back(bigint_pow(BigInt(i + 1), static_cast<unsigned long>(i)));
    }
    return b;
}

struct DigitVector {
    std::vector<BigInt> digits;  // trailing zeros implicit

    int length() const { return static_cast<int>(digits.size()); }
    BigInt digit(int i) const {  // 1-based
        if (i < 1) throw Error("digit index starts at 1");
        if (i > length()) return 0;
        return digits[static_cast<std::size_t>(i - 1)];
    }
};

inline void validate_mode_a(const BaseSystem& base, const DigitVector& v) {
    if (v.length() > base.depth()) throw Error("digit vector longer than base system");
    for (int i = 1; i <= v.length(); ++i)
        if (v.digit(i) < 0 || v.digit(i) >= base.base(i))
            throw Error("digit out of range at index " + std::to_string(i));
}

inline void validate_symmetric(const BaseSystem& base, const std::vector<BigInt>& bounds,
                               const DigitVector& v) {
    if (v.length() > static_cast<int>(bounds.size()))
        throw Error("digit vector longer than bound list");
    for (int i = 1; i <= v.length(); ++i)
        if (abs(v.digit(i)) > bounds[static_cast<std::size_t>(i - 1)])
            throw Error("digit out of range at index " + std::to_string(i));
    (void)base;
}

// sum_i k_i / (D_1 ... D_i), exact
inline Rational value_of(const BaseSystem& base, const DigitVector& v) {
    if (v.length() > base.depth()) throw Error("digit vector longer than base system");
    for (int i = 1; i <= v.length(); ++i)
        if (abs(v.digit(i)) >= base.base(i))
            throw Error("digit out of range at index " + std::to_string(i));
    Rational val = 0;
    BigInt prod = 1;
    for (int i = 1; i <= v.length(); ++i) {
        prod *= base.denom(i);
        val += Rational(v.digit(i), prod);
    }
    return val;
}

// sum_{i >= r} k_i / n_i  (the constraint functional's tail)
inline Rational constraint_tail(const BaseSystem& base, const DigitVector& v, int r) {
    Rational s = 0;
    for (int i = std::max(r, 1); i <= v.length(); ++i) s += Rational(v.digit(i), base.base(i));
    return s;
}

inline Rational constraint_sum(const BaseSystem& base, const DigitVector& v) {
    return constraint_tail(base, v, 1);
}

// value of h_r: sum_{i >= r} k_i / (D_1 ... D_i), denominators unchanged
inline Rational shift(const BaseSystem& base, const DigitVector& v, int r) {
    if (r < 1) throw Error("shift index must be >= 1");
    Rational val = 0;
    BigInt prod = 1;
    for (int i = 1; i <= v.length(); ++i) {
        prod *= base.denom(i);
        if (i >= r) val += Rational(v.digit(i), prod);
    }
    return val;
}

// h_r as a digit map: zero out positions below r, keep the rest in place
inline DigitVector shift_digits(const DigitVector& v, int r) {
    DigitVector out = v;
    for (int i = 1; i < r && i <= v.length(); ++i) out.digits[static_cast<std::size_t>(i - 1)] = 0;
    return out;
}

enum class ConstraintKind { half_sum, lp_ball, none };

struct DigitSetSpec {
    BaseSystem base;
    ConstraintKind constraint = ConstraintKind::half_sum;
    Rational p = 1;          // lp_ball exponent
    Rational radius = 0;     // lp_ball radius
    Rational basis_const = 1;  // coordinate-functional constant C
};

struct MembershipResult {
    bool member = false;
    Certificate cert;
};

namespace detail {

inline bool is_integer(const Rational& q) { return den(q) == 1; }

// exact n-th root if it exists
inline std::optional<BigInt> exact_root(const BigInt& v, unsigned long e) {
    if (v < 0) return std::nullopt;
    if (v == 0 || v == 1) return v;
    BigInt lo = 1, hi = v;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (bigint_pow(mid, e) < v)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (bigint_pow(lo, e) == v) return lo;
    return std::nullopt;
}

// certified bracket of t^(1/e), width <= 2^-prec
inline std::pair<Rational, Rational> root_bracket(const Rational& t, unsigned long e, int prec) {
    if (t == 0) return {Rational(0), Rational(0)};
    Rational lo = 0, hi = t < 1 ? Rational(1) : t;
    for (int it = 0; it < prec + 64 && hi - lo > pow2(-prec); ++it) {
        const Rational mid = (lo + hi) / 2;
        if (rat_pow(mid, e) <= t)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

}  // namespace detail

// half_sum: sum k_i/n_i <= 1/2 exactly. lp_ball: sum |k_i/n_i|^p <= r^p,
// exact for integer p, certified rational bracketing for fractional p.
inline MembershipResult membership(const DigitSetSpec& spec, const DigitVector& v) {
    validate_mode_a(spec.base, v);
    MembershipResult out;
    out.cert.name = "membership";
    switch (spec.constraint) {
        case ConstraintKind::none:
            out.member = true;
            out.cert.note("constraint", "none");
            return out;
        case ConstraintKind::half_sum: {
            const Rational s = constraint_sum(spec.base, v);
            out.member = out.cert.check("sum k_i/n_i <= 1/2", s, Rel::LE, Rational(1, 2));
            out.cert.pass = true;  // a non-member is still a valid verdict
            return out;
        }
        case ConstraintKind::lp_ball: {
            if (spec.p < 1) throw Error("lp exponent must be >= 1");
            const Rational rp_target = spec.radius;
            if (detail::is_integer(spec.p)) {
                const auto e = static_cast<unsigned long>(num(spec.p).convert_to<std::uint64_t>());
                Rational s = 0;
                for (int i = 1; i <= v.length(); ++i)
                    s += rat_pow(rat_abs(Rational(v.digit(i), spec.base.base(i))), e);
                out.member = out.cert.check("sum |k_i/n_i|^p <= r^p", s, Rel::LE,
                                            rat_pow(rp_target, e));
                out.cert.pass = true;
            } else {
                // p = a/b: compare sum (|k_i/n_i|^a)^(1/b) against (r^a)^(1/b)
                const auto a = static_cast<unsigned long>(num(spec.p).convert_to<std::uint64_t>());
                const auto b = static_cast<unsigned long>(den(spec.p).convert_to<std::uint64_t>());
                for (int prec = 32; prec <= 1024; prec *= 2) {
                    Rational lo_sum = 0, hi_sum = 0;
                    for (int i = 1; i <= v.length(); ++i) {
                        const Rational t = rat_pow(rat_abs(Rational(v.digit(i), spec.base.base(i))), a);
                        auto [lo, hi] = detail::root_bracket(t, b, prec);
                        lo_sum += lo;
                        hi_sum += hi;
                    }
                    auto [rlo, rhi] = detail::root_bracket(rat_pow(rp_target, a), b, prec);
                    if (hi_sum <= rlo) {
                        out.member = true;
                        out.cert.check("bracket: sum upper <= radius lower", hi_sum, Rel::LE, rlo);
                        return out;
                    }
                    if (lo_sum > rhi) {
                        out.member = false;
                        out.cert.check("bracket: sum lower > radius upper", lo_sum, Rel::GT, rhi);
                        out.cert.pass = true;
                        return out;
                    }
                }
                throw Error("lp membership undecided at precision cap (boundary case)");
            }
            // coordinate bound |k_i| <= ceil(n_i/3) - 1 whenever r < 1/(3C)
            if (out.member && spec.radius < 1 / (3 * spec.basis_const)) {
                for (int i = 1; i <= v.length(); ++i) {
                    const BigInt mi = ceil_div(spec.base.base(i), 3) - 1;
                    out.cert.check("digit bound |k_" + std::to_string(i) + "| <= ceil(n/3)-1",
                                   Rational(abs(v.digit(i))), Rel::LE, Rational(mi));
                }
            }
            return out;
        }
    }
    throw Error("unreachable");
}

// Smallest r >= 1 with sum_{i>=r} k_i/n_i <= 4^{-m}; trailing zeros make the
// tail eventually 0, so r <= len+1 always works.
inline int tail_index(const BaseSystem& base, const DigitVector& v, int m) {
    if (m < 1) throw Error("tail index order must be >= 1");
    const Rational bound = rat_pow(Rational(1, 4), static_cast<unsigned long>(m));
    Rational tail = constraint_sum(base, v);
    for (int r = 1; r <= v.length(); ++r) {
        if (tail <= bound) return r;
        tail -= Rational(v.digit(r), base.base(r));
    }
    return v.length() + 1;
}

struct UniformizeResult {
    std::vector<DigitVector> vectors;
    Certificate cert;
};

// K''_j = h_{r_jj}(K'_j): checks t_j(x) <= r_jj for every input, zeroes the
// digits below r_jj, and certifies sum k_i/n_i <= 4^{-j} on every output.
inline UniformizeResult uniformize(const DigitSetSpec& spec, const std::vector<DigitVector>& K,
                                   int j, int r_jj) {
    UniformizeResult out;
    out.cert.name = "uniformize_j" + std::to_string(j);
    for (std::size_t idx = 0; idx < K.size(); ++idx) {
        const int t = tail_index(spec.base, K[idx], j);
        if (t > r_jj)
            throw Error("uniformize precondition violated: vector " + std::to_string(idx) +
                        " has t_" + std::to_string(j) + " = " + std::to_string(t) + " > " +
                        std::to_string(r_jj));
    }
    const Rational bound = rat_pow(Rational(1, 4), static_cast<unsigned long>(j));
    for (const auto& v : K) {
        DigitVector w = shift_digits(v, r_jj);
        out.cert.check("output constraint sum <= 4^{-j}", constraint_sum(spec.base, w), Rel::LE,
                       bound);
        out.vectors.push_back(std::move(w));
    }
    return out;
}

// Perfect-translate scaffold: positions m(l) and amplitudes a(l) with
//   m(l) >= max_j r^j_{4l},   4^{-l}/5 <= a(l)/n_{m(l)} <= 4^{-l}/4.
struct PerfectSetSpec {
    int levels = 0;
    std::vector<int> positions;
    std::vector<BigInt> amplitudes;
    Certificate cert;
};

// r_table[j-1][m-1] = r^j_m; minimal positions, amplitude = smallest integer
// in the window; "no valid amplitude" signals the base is too small there.
inline PerfectSetSpec build_perfect(const BaseSystem& base,
                                    const std::vector<std::vector<int>>& r_table, int levels) {
    PerfectSetSpec out;
    out.levels = levels;
    out.cert.name = "build_perfect";
    const int J = static_cast<int>(r_table.size());
    int prev_pos = 0;
    for (int l = 1; l <= levels; ++l) {
        int min_pos = prev_pos + 1;
        const int j_hi = std::min(l + 2, J);
        for (int j = 1; j <= j_hi; ++j) {
            const auto& row = r_table[static_cast<std::size_t>(j - 1)];
            const int idx = 4 * l;
            if (idx > static_cast<int>(row.size()))
                throw Error("r table too short for level " + std::to_string(l));
            min_pos = std::max(min_pos, row[static_cast<std::size_t>(idx - 1)]);
        }
        if (min_pos > base.depth())
            throw Error("bases too short: need position " + std::to_string(min_pos));
        const BigInt n = base.base(min_pos);
        const Rational fourl = rat_pow(Rational(1, 4), static_cast<unsigned long>(l));
        const BigInt a = rat_ceil(Rational(n) * fourl / 5);
        if (Rational(a) > Rational(n) * fourl / 4)
            throw Error("no valid amplitude at level " + std::to_string(l) + ": window [" +
                        to_pq_string(Rational(n) * fourl / 5) + ", " +
                        to_pq_string(Rational(n) * fourl / 4) + "] has no integer");
        out.cert.check("level " + std::to_string(l) + ": 4^{-l}/5 <= a/n", fourl / 5, Rel::LE,
                       Rational(a, n));
        out.cert.check("level " + std::to_string(l) + ": a/n <= 4^{-l}/4", Rational(a, n), Rel::LE,
                       fourl / 4);
        out.cert.note("level " + std::to_string(l) + " position", std::to_string(min_pos));
        out.positions.push_back(min_pos);
        out.amplitudes.push_back(a);
        prev_pos = min_pos;
    }
    return out;
}

// digit vector of the translate p = sum_l b(l)/(D_1..D_{m(l)}), b(l) in {0, a(l)}
inline DigitVector perfect_translate_digits(const PerfectSetSpec& P,
                                            const std::vector<int>& selection) {
    if (static_cast<int>(selection.size()) != P.levels)
        throw Error("selection length must equal levels");
    int max_pos = 0;
    for (int l = 0; l < P.levels; ++l)
        if (selection[static_cast<std::size_t>(l)]) max_pos = P.positions[static_cast<std::size_t>(l)];
    DigitVector v;
    v.digits.assign(static_cast<std::size_t>(max_pos), BigInt(0));
    for (int l = 0; l < P.levels; ++l)
        if (selection[static_cast<std::size_t>(l)])
            v.digits[static_cast<std::size_t>(P.positions[static_cast<std::size_t>(l)] - 1)] =
                P.amplitudes[static_cast<std::size_t>(l)];
    return v;
}

// digit-wise sum with carry check against mode-A ranges
inline DigitVector digit_sum(const BaseSystem& base, const DigitVector& a, const DigitVector& b) {
    DigitVector out;
    const int len = std::max(a.length(), b.length());
    out.digits.reserve(static_cast<std::size_t>(len));
    for (int i = 1; i <= len; ++i) {
        BigInt d = a.digit(i) + b.digit(i);
        if (d >= base.base(i))
            throw Error("digit-wise sum overflows base at index " + std::to_string(i));
        out.digits.push_back(std::move(d));
    }
    return out;
}

// Certifies (p + K) and (q + K) disjoint at this truncation: with l0 the
// first differing level, every point of the a(l0)-side has constraint tail
// >= 4^{-l0}/5 from position m(l0) on, and every point of the other side
// stays strictly below, with the tail decomposition recorded.
inline Certificate check_translate_disjoint(const BaseSystem& base, const PerfectSetSpec& P,
                                            const std::vector<DigitVector>& K,
                                            const std::vector<int>& p_sel,
                                            const std::vector<int>& q_sel) {
    if (p_sel == q_sel) throw Error("identical selections, translates coincide");
    Certificate cert;
    cert.name = "translate_disjoint";
    int l0 = 0;
    for (int l = 0; l < P.levels; ++l)
        if (p_sel[static_cast<std::size_t>(l)] != q_sel[static_cast<std::size_t>(l)]) {
            l0 = l + 1;
            break;
        }
    const bool q_has = q_sel[static_cast<std::size_t>(l0 - 1)] != 0;
    const std::vector<int>& lo_sel = q_has ? p_sel : q_sel;  // b(l0) = 0 side
    const std::vector<int>& hi_sel = q_has ? q_sel : p_sel;  // b(l0) = a(l0) side
    const int m_l0 = P.positions[static_cast<std::size_t>(l0 - 1)];
    const Rational fourl = rat_pow(Rational(1, 4), static_cast<unsigned long>(l0));
    const Rational threshold = fourl / 5;

    const DigitVector lo_digits = perfect_translate_digits(P, lo_sel);
    const DigitVector hi_digits = perfect_translate_digits(P, hi_sel);

    // inter-level amplitude tail beyond l0
    Rational amp_tail = 0;
    for (int l = l0 + 1; l <= P.levels; ++l)
        amp_tail += Rational(P.amplitudes[static_cast<std::size_t>(l - 1)],
                             base.base(P.positions[static_cast<std::size_t>(l - 1)]));
    cert.check("amplitude tail <= 4^{-l0}/12", amp_tail, Rel::LE, fourl / 12);

    Rational lo_max = 0, hi_min = -1, k_tail_max = 0;
    for (const auto& x : K) {
        const Rational k_tail = constraint_tail(base, x, m_l0);
        if (k_tail > k_tail_max) k_tail_max = k_tail;
        const DigitVector lo_pt = digit_sum(base, lo_digits, x);
        const DigitVector hi_pt = digit_sum(base, hi_digits, x);
        const Rational lo_tail = constraint_tail(base, lo_pt, m_l0);
        const Rational hi_tail = constraint_tail(base, hi_pt, m_l0);
        if (lo_tail > lo_max) lo_max = lo_tail;
        if (hi_min < 0 || hi_tail < hi_min) hi_min = hi_tail;
    }
    cert.check("K tail from m(l0) <= 4^{-l0}/12", k_tail_max, Rel::LE, fourl / 12);
    cert.check("zero-side tails < 4^{-l0}/5", lo_max, Rel::LT, threshold);
    cert.check("amplitude-side tails >= 4^{-l0}/5", hi_min, Rel::GE, threshold);
    cert.witness["l0"] = std::to_string(l0);
    cert.witness["margin"] = to_pq_string(hi_min - lo_max);
    cert.witness["threshold"] = to_pq_string(threshold);
    return cert;
}

// Exhaustive digit-uniqueness check for symmetric digits |k_i| <= m_i: with
// 2m_i+1 < n_i the map to values is injective; with n_i = 2m_i+1 the image is
// the full grid {j/(n_1..n_D)} of [-1/2, 1/2].
inline Certificate uniqueness_check(const BaseSystem& base, const std::vector<BigInt>& bounds,
                                    int depth, const BigInt& enum_cap = BigInt(2000000)) {
    if (depth > base.depth() || depth > static_cast<int>(bounds.size()))
        throw Error("depth exceeds base or bound list");
    Certificate cert;
    cert.name = "uniqueness";
    if (depth == 0) {
        cert.note("depth", "0: trivially injective");
        return cert;
    }
    bool all_strict = true, all_critical = true;
    BigInt total = 1;
    for (int i = 1; i <= depth; ++i) {
        const BigInt& mi = bounds[static_cast<std::size_t>(i - 1)];
        const BigInt& ni = base.base(i);
        if (2 * mi + 1 < ni)
            all_critical = false;
        else if (2 * mi + 1 == ni)
            all_strict = false;
        else
            throw Error("bounds violate 2m_i+1 <= n_i at index " + std::to_string(i));
        total *= 2 * mi + 1;
    }
    if (!all_strict && !all_critical)
        throw Error("bounds must be uniformly strict (2m+1 < n) or critical (2m+1 = n)");
    if (total > enum_cap) throw Error("exhaustion limit exceeded");

    std::vector<Rational> values;
    values.reserve(static_cast<std::size_t>(total.convert_to<std::uint64_t>()));
    std::vector<BigInt> digits(static_cast<std::size_t>(depth));
    for (auto& d : digits) d = 0;
    // odometer over [-m_i, m_i]
    for (int i = 0; i < depth; ++i) digits[static_cast<std::size_t>(i)] = -bounds[static_cast<std::size_t>(i)];
    for (;;) {
        DigitVector v;
        v.digits = digits;
        values.push_back(value_of(base, v));
        int pos = depth - 1;
        while (pos >= 0) {
            auto& d = digits[static_cast<std::size_t>(pos)];
            if (d < bounds[static_cast<std::size_t>(pos)]) {
                ++d;
                break;
            }
            d = -bounds[static_cast<std::size_t>(pos)];
            --pos;
        }
        if (pos < 0) break;
    }
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i] == values[i + 1]) {
            cert.fail("duplicate value " + to_pq_string(values[i]));
            cert.witness["value"] = to_pq_string(values[i]);
            return cert;
        }
    cert.note("vectors", total.str());
    cert.note("mode", all_strict ? "strict: injective" : "critical: full grid");
    if (all_critical) {
        BigInt prod = 1;
        for (int i = 1; i <= depth; ++i) prod *= base.denom(i);
        // expected image: {j/prod : |j| <= prod/2}
        BigInt j = -floor_div(prod, 2);
        if (BigInt(values.size()) != prod) {
            cert.fail("image size " + std::to_string(values.size()) + " != " + prod.str());
            return cert;
        }
        for (const auto& val : values) {
            if (val != Rational(j, prod)) {
                cert.fail("image misses grid point " + to_pq_string(Rational(j, prod)));
                cert.witness["value"] = to_pq_string(val);
                return cert;
            }
            ++j;
        }
        cert.note("image", "full grid of [-1/2, 1/2] with step 1/" + prod.str());
    }
    return cert;
}

struct RigidityResult {
    bool rigid = false;
    std::optional<std::array<Rational, 4>> witness;  // x - y = u - v, nontrivial
};

// Sidon check: all pairwise differences distinct.
inline RigidityResult rigidity_check(const std::vector<Rational>& S) {
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = i + 1; j < S.size(); ++j)
            if (S[i] == S[j]) throw Error("rigidity_check requires distinct elements");
    RigidityResult out;
    std::map<Rational, std::pair<Rational, Rational>> seen;  // diff -> (x, y)
    for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = 0; j < S.size(); ++j) {
            if (i == j) continue;
            const Rational d = S[i] - S[j];
            auto it = seen.find(d);
            if (it != seen.end() && !(it->second.first == S[i] && it->second.second == S[j])) {
                out.rigid = false;
                out.witness = {S[i], S[j], it->second.first, it->second.second};
                return out;
            }
            seen.emplace(d, std::make_pair(S[i], S[j]));
        }
    out.rigid = true;
    return out;
}

// Greedy (Mian-Chowla) Sidon sequence from 1, rigidity_check as the oracle.
inline std::vector<std::int64_t> greedy_sidon(int count) {
    if (count < 1) throw Error("count must be >= 1");
    std::vector<std::int64_t> seq;
    std::vector<Rational> vals;
    std::int64_t candidate = 1;
    while (static_cast<int>(seq.size()) < count) {
        std::vector<Rational> trial = vals;
        trial.emplace_back(candidate);
        if (rigidity_check(trial).rigid) {
            seq.push_back(candidate);
            vals = std::move(trial);
        }
        ++candidate;
    }
    return seq;
}

// All admissible half_sum digit vectors up to the given depth (values listed
// once per vector; vectors are exactly the depth-d truncations of the set).
inline std::vector<DigitVector> enumerate_half_sum(const BaseSystem& base, int depth,
                                                   const BigInt& enum_cap = BigInt(2000000)) {
    if (depth > base.depth()) throw Error("depth exceeds base system");
    BigInt total = 1;
    for (int i = 1; i <= depth; ++i) total *= base.base(i);
    if (total > enum_cap) throw Error("exhaustion limit exceeded");
    std::vector<DigitVector> out;
    DigitVector cur;
    cur.digits.assign(static_cast<std::size_t>(depth), BigInt(0));
    // depth-first with running constraint sum and pruning
    std::function<void(int, Rational)> rec = [&](int i, Rational sum) {
        if (i > depth) {
            out.push_back(cur);
            return;
        }
        const BigInt& ni = base.base(i);
        for (BigInt d = 0; d < ni; ++d) {
            const Rational next = sum + Rational(d, ni);
            if (next > Rational(1, 2)) break;
            cur.digits[static_cast<std::size_t>(i - 1)] = d;
            rec(i + 1, next);
        }
        cur.digits[static_cast<std::size_t>(i - 1)] = 0;
    };
    rec(1, Rational(0));
    return out;
}

// max over the component of t_m, for m = 1..max_m; feeds build_perfect
inline std::vector<std::vector<int>> r_table_from_components(
    const BaseSystem& base, const std::vector<std::vector<DigitVector>>& components, int max_m) {
    std::vector<std::vector<int>> table;
    for (const auto& comp : components) {
        std::vector<int> row;
        for (int m = 1; m <= max_m; ++m) {
            int worst = 1;
            for (const auto& v : comp) worst = std::max(worst, tail_index(base, v, m));
            row.push_back(worst);
        }
        table.push_back(std::move(row));
    }
    return table;
}

// End-to-end translate-disjointness demonstration: two uniformized
// components, their digit-wise sumset K, the perfect scaffold P over the
// honest r-table, and the disjointness certificate for every selection pair.
struct TranslateDemo {
    BaseSystem base;
    UniformizeResult comp1, comp2;
    std::vector<DigitVector> K;
    std::vector<std::vector<int>> r_table;
    PerfectSetSpec P;
    int pairs = 0;
    Rational min_margin;
    Certificate cert;
};

inline BaseSystem power_bases(int depth, int base) {
    BaseSystem b;
    for (int i = 1; i <= depth; ++i)
        b.bases.push_back(bigint_pow(BigInt(base), static_cast<unsigned long>(i)));
    b.validate();
    return b;
}

inline TranslateDemo build_translate_demo(int levels, std::optional<BaseSystem> bases = {}) {
    if (levels < 1) throw Error("translate demo needs at least one level");
    TranslateDemo demo;
    demo.base = bases ? std::move(*bases) : power_bases(4 * levels + 2, 4);
    DigitSetSpec spec;
    spec.base = demo.base;

    const std::vector<DigitVector> raw1{DigitVector{{1, 2, 0, 0, 0, 0, 0, 0, 1}},
                                        DigitVector{{0, 3, 1, 0, 0, 0, 0, 0, 0, 1}}};
    const std::vector<DigitVector> raw2{DigitVector{{0, 1, 1, 0, 0, 0, 0, 0, 0, 1}},
                                        DigitVector{{0, 0, 2, 1, 0, 0, 0, 0, 1}}};
    auto worst_tail = [&](const std::vector<DigitVector>& vs, int j) {
        int worst = 1;
        for (const auto& v : vs) worst = std::max(worst, tail_index(demo.base, v, j));
        return worst;
    };
    demo.comp1 = uniformize(spec, raw1, 1, worst_tail(raw1, 1));
    demo.comp2 = uniformize(spec, raw2, 2, worst_tail(raw2, 2));
    for (const auto& x : demo.comp1.vectors)
        for (const auto& y : demo.comp2.vectors) demo.K.push_back(digit_sum(demo.base, x, y));

    demo.r_table =
        r_table_from_components(demo.base, {demo.comp1.vectors, demo.comp2.vectors}, 4 * levels);
    demo.P = build_perfect(demo.base, demo.r_table, levels);

    demo.cert.name = "translate_demo";
    demo.cert.absorb(demo.comp1.cert);
    demo.cert.absorb(demo.comp2.cert);
    demo.cert.absorb(demo.P.cert);
    std::vector<std::vector<int>> selections;
    for (int bits = 0; bits < (1 << levels); ++bits) {
        std::vector<int> sel;
        for (int l = levels - 1; l >= 0; --l) sel.push_back((bits >> l) & 1);
        selections.push_back(std::move(sel));
    }
    demo.min_margin = -1;
    for (std::size_t i = 0; i < selections.size(); ++i)
        for (std::size_t j = i + 1; j < selections.size(); ++j) {
            Certificate pair =
                check_translate_disjoint(demo.base, demo.P, demo.K, selections[i], selections[j]);
            const Rational margin = parse_rational(pair.witness.at("margin"));
            if (demo.min_margin < 0 || margin < demo.min_margin) demo.min_margin = margin;
            if (!pair.pass) demo.cert.absorb(pair);
            ++demo.pairs;
        }
    demo.cert.note("pairs certified disjoint", std::to_string(demo.pairs));
    demo.cert.note("min margin", to_pq_string(demo.min_margin));
    return demo;
}

}  // namespace gaugeworks
