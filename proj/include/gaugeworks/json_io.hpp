#pragma once

#include "gaugeworks/cantor.hpp"
#include "gaugeworks/certificate.hpp"
#include "gaugeworks/convolve.hpp"
#include "gaugeworks/digits.hpp"
#include "gaugeworks/gauge.hpp"
#include "gaugeworks/hausdorff.hpp"
#include "gaugeworks/incomparable.hpp"
#include "gaugeworks/interval.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace gaugeworks {

using Json = nlohmann::ordered_json;

// ---- primitives -----------------------------------------------------------

inline Json rational_json(const Rational& q) { return to_pq_string(q); }

inline Rational rational_from(const Json& j, const std::string& where) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(BigInt(j.get<std::int64_t>()), 1);
    throw ParseError("expected rational string at " + where);
}

// Grid sizes can exceed 64 bits on deep schedules; emit a number when it
// fits, a decimal string otherwise.
inline Json bigint_json(const BigInt& n) {
    if (fits_int64(n)) return n.convert_to<std::int64_t>();
    return n.str();
}

inline BigInt bigint_from(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return parse_bigint(j.get<std::string>());
    throw ParseError("expected integer at " + where);
}

// ---- intervals, families, models -------------------------------------------

inline Json interval_json(const Interval& I) {
    return Json{{"left", rational_json(I.left)}, {"right", rational_json(I.right)}};
}

inline Interval interval_from(const Json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("left") || !j.contains("right"))
        throw ParseError("expected {left, right} at " + where);
    return Interval(rational_from(j["left"], where + ".left"),
                    rational_from(j["right"], where + ".right"));
}

inline Json family_json(const IntervalFamily& fam) {
    Json arr = Json::array();
    for (const auto& I : fam.intervals) arr.push_back(interval_json(I));
    return arr;
}

inline IntervalFamily family_from(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError("expected interval array at " + where);
    IntervalFamily fam;
    for (std::size_t i = 0; i < j.size(); ++i)
        fam.intervals.push_back(interval_from(j[i], where + "[" + std::to_string(i) + "]"));
    return fam;
}

inline Json model_json(const OpenSetModel& m) {
    Json levels = Json::array();
    for (const auto& level : m.levels) levels.push_back(family_json(level));
    return Json{{"levels", levels}};
}

inline OpenSetModel model_from(const Json& j) {
    if (!j.is_object() || !j.contains("levels")) throw ParseError("model needs a levels array");
    OpenSetModel m;
    const auto& levels = j["levels"];
    if (!levels.is_array()) throw ParseError("model levels must be an array");
    for (std::size_t i = 0; i < levels.size(); ++i)
        m.levels.push_back(family_from(levels[i], "levels[" + std::to_string(i) + "]"));
    validate_model(m);
    return m;
}

// ---- gauges -----------------------------------------------------------------

inline Json gauge_json(const Gauge& g) {
    Json bps = Json::array();
    for (const auto& [x, y] : g.breakpoints()) bps.push_back(Json::array({rational_json(x), rational_json(y)}));
    return Json{{"breakpoints", bps}};
}

inline Gauge gauge_from(const Json& j) {
    if (!j.is_object() || !j.contains("breakpoints"))
        throw ParseError("gauge needs a breakpoints array");
    std::vector<Gauge::Breakpoint> bps;
    for (std::size_t i = 0; i < j["breakpoints"].size(); ++i) {
        const auto& e = j["breakpoints"][i];
        if (!e.is_array() || e.size() != 2)
            throw ParseError("gauge breakpoint " + std::to_string(i) + " must be [x, y]");
        bps.emplace_back(rational_from(e[0], "breakpoint x"), rational_from(e[1], "breakpoint y"));
    }
    try {
        return Gauge(std::move(bps));
    } catch (const Error& e) {
        throw ParseError(std::string("invalid gauge: ") + e.what());
    }
}

// ---- level systems ----------------------------------------------------------

inline Json system_json(const LevelSystem& sys) {
    Json levels = Json::array();
    for (const auto& L : sys.levels) {
        Json lj;
        lj["m"] = bigint_json(L.m);
        lj["r"] = rational_json(L.r);
        lj["n"] = bigint_json(L.n);
        if (L.has_points()) {
            Json pts = Json::array();
            for (const auto& x : *L.points) pts.push_back(rational_json(x));
            lj["F"] = pts;
        } else {
            // implicit lattice level: F is determined by (s, lo, n) per parent
            lj["count"] = bigint_json(L.count);
            if (L.lat) {
                lj["s"] = bigint_json(L.lat->s);
                lj["lo"] = bigint_json(L.lat->lo);
            }
            if (L.full_grid) lj["full_grid"] = true;
        }
        levels.push_back(std::move(lj));
    }
    return Json{{"levels", levels}};
}

inline LevelSystem system_from(const Json& j) {
    if (!j.is_object() || !j.contains("levels")) throw ParseError("system needs a levels array");
    LevelSystem sys;
    const auto& levels = j["levels"];
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& lj = levels[i];
        const std::string where = "levels[" + std::to_string(i) + "]";
        Level L;
        L.m = bigint_from(lj.at("m"), where + ".m");
        L.r = rational_from(lj.at("r"), where + ".r");
        L.n = bigint_from(lj.at("n"), where + ".n");
        if (lj.contains("F")) {
            L.points.emplace();
            for (const auto& p : lj["F"]) L.points->push_back(rational_from(p, where + ".F"));
            L.count = BigInt(L.points->size());
            if (i == 0 && lj.value("full_grid", false)) L.full_grid = true;
        } else {
            L.count = bigint_from(lj.at("count"), where + ".count");
            if (lj.contains("s"))
                L.lat = Level::Lattice{bigint_from(lj["s"], where + ".s"),
                                       bigint_from(lj["lo"], where + ".lo")};
            if (lj.value("full_grid", false)) L.full_grid = true;
        }
        if (i == 0 && L.has_points() && L.count == L.m) L.full_grid = true;
        sys.levels.push_back(std::move(L));
    }
    return sys;
}

// ---- covers -----------------------------------------------------------------

inline Json cover_json(const NullCover& c) {
    Json rounds = Json::array();
    for (const auto& r : c.rounds) rounds.push_back(family_json(r));
    Json out{{"rounds", rounds}};
    if (!c.groups.empty()) {
        Json groups = Json::array();
        for (const auto& g : c.groups)
            groups.push_back(Json{{"diam", rational_json(g.diam)},
                                  {"count", bigint_json(g.count)},
                                  {"round", g.round}});
        out["groups"] = groups;
    }
    return out;
}

inline NullCover cover_from(const Json& j) {
    if (!j.is_object() || !j.contains("rounds")) throw ParseError("cover needs a rounds array");
    NullCover c;
    const auto& rounds = j["rounds"];
    for (std::size_t i = 0; i < rounds.size(); ++i)
        c.rounds.push_back(family_from(rounds[i], "rounds[" + std::to_string(i) + "]"));
    if (j.contains("groups"))
        for (const auto& g : j["groups"])
            c.groups.push_back(MassGroup{rational_from(g.at("diam"), "group diam"),
                                         bigint_from(g.at("count"), "group count"),
                                         g.value("round", 1)});
    return c;
}

// ---- schedules --------------------------------------------------------------

inline Json schedule_json(const InterleavedSchedule& s) {
    auto ints = [](const std::vector<BigInt>& v) {
        Json arr = Json::array();
        for (const auto& x : v) arr.push_back(bigint_json(x));
        return arr;
    };
    auto rats = [](const std::vector<Rational>& v) {
        Json arr = Json::array();
        for (const auto& x : v) arr.push_back(rational_json(x));
        return arr;
    };
    Json certs = Json::array();
    for (const auto& c : s.certificates)
        certs.push_back(Json{{"label", c.label}, {"lhs", c.lhs}, {"rel", c.rel}, {"rhs", c.rhs}, {"ok", c.ok}});
    return Json{{"m1", ints(s.m1)},
                {"m2", ints(s.m2)},
                {"rho1", rats(s.rho1)},
                {"rho2", rats(s.rho2)},
                {"systems", Json::array({system_json(s.sys1), system_json(s.sys2)})},
                {"gauges", Json::array({gauge_json(s.g1), gauge_json(s.g2)})},
                {"certificates", certs}};
}

inline InterleavedSchedule schedule_from(const Json& j) {
    InterleavedSchedule s;
    for (const auto& x : j.at("m1")) s.m1.push_back(bigint_from(x, "m1"));
    for (const auto& x : j.at("m2")) s.m2.push_back(bigint_from(x, "m2"));
    for (const auto& x : j.at("rho1")) s.rho1.push_back(rational_from(x, "rho1"));
    for (const auto& x : j.at("rho2")) s.rho2.push_back(rational_from(x, "rho2"));
    s.sys1 = system_from(j.at("systems").at(0));
    s.sys2 = system_from(j.at("systems").at(1));
    s.g1 = gauge_from(j.at("gauges").at(0));
    s.g2 = gauge_from(j.at("gauges").at(1));
    if (j.contains("certificates"))
        for (const auto& c : j["certificates"])
            s.certificates.push_back(CheckRecord{c.value("label", ""), c.value("lhs", ""),
                                                 c.value("rel", ""), c.value("rhs", ""),
                                                 c.value("ok", false)});
    return s;
}

// ---- measures and digits ----------------------------------------------------

inline Json measure_json(const DiscreteMeasure& m) {
    Json supp = Json::array();
    for (const auto& [p, w] : m.support)
        supp.push_back(Json::array({rational_json(p), rational_json(w)}));
    return Json{{"support", supp}};
}

inline DiscreteMeasure measure_from(const Json& j) {
    if (!j.is_object() || !j.contains("support")) throw ParseError("measure needs a support array");
    DiscreteMeasure m;
    for (const auto& e : j["support"]) {
        if (!e.is_array() || e.size() != 2) throw ParseError("measure support entries are [point, weight]");
        m.support.emplace_back(rational_from(e[0], "support point"),
                               rational_from(e[1], "support weight"));
    }
    m.normalize();
    return m;
}

inline Json digit_vector_json(const DigitVector& v) {
    Json arr = Json::array();
    for (const auto& d : v.digits) arr.push_back(bigint_json(d));
    return Json{{"digits", arr}};
}

inline DigitVector digit_vector_from(const Json& j) {
    if (!j.is_object() || !j.contains("digits")) throw ParseError("digit vector needs digits");
    DigitVector v;
    for (const auto& d : j["digits"]) v.digits.push_back(bigint_from(d, "digits"));
    return v;
}

inline Json bases_json(const BaseSystem& b) {
    Json arr = Json::array();
    for (const auto& n : b.bases) arr.push_back(bigint_json(n));
    Json out{{"bases", arr}};
    if (b.davies_caps) {
        Json caps = Json::array();
        for (const auto& n : *b.davies_caps) caps.push_back(bigint_json(n));
        out["davies_caps"] = caps;
    }
    return out;
}

inline BaseSystem bases_from(const Json& j) {
    BaseSystem b;
    if (!j.is_object() || !j.contains("bases")) throw ParseError("base system needs bases");
    for (const auto& n : j["bases"]) b.bases.push_back(bigint_from(n, "bases"));
    if (j.contains("davies_caps")) {
        b.davies_caps.emplace();
        for (const auto& n : j["davies_caps"]) b.davies_caps->push_back(bigint_from(n, "davies_caps"));
    }
    try {
        b.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("invalid base system: ") + e.what());
    }
    return b;
}

// ---- certificates and reports ----------------------------------------------

inline Json certificate_json(const Certificate& c) {
    Json checks = Json::array();
    for (const auto& rec : c.checks)
        checks.push_back(Json{{"label", rec.label}, {"lhs", rec.lhs}, {"rel", rec.rel},
                              {"rhs", rec.rhs}, {"ok", rec.ok}});
    Json out{{"name", c.name}, {"pass", c.pass}, {"checks", checks}};
    if (!c.witness.empty()) {
        Json w = Json::object();
        for (const auto& [k, v] : c.witness) w[k] = v;
        out["witness"] = w;
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

inline Json bound_certificate_json(const BoundCertificate& b) {
    Json out{{"check", b.method},
             {"pass", b.pass},
             {"lower", rational_json(b.lower)},
             {"upper", rational_json(b.upper)},
             {"depth", b.depth}};
    if (!b.witnesses.empty()) {
        const auto& [I, rec] = b.witnesses.front();
        out["witness"] = Json{{"interval", interval_json(I)},
                              {"mu", rec.lhs},
                              {"bound", rec.rhs}};
    } else {
        out["witness"] = nullptr;
    }
    return out;
}

inline Json box_rows_json(const std::vector<BoxRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows)
        arr.push_back(Json{{"delta", rational_json(r.delta)},
                           {"count", bigint_json(r.count)},
                           {"ratio_float", r.ratio}});
    return arr;
}

// ---- files ------------------------------------------------------------------

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("JSON parse error in " + path + ": " + e.what());
    }
}

inline void save_json(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

inline void export_gauge_csv(const Gauge& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "x,y,x_float,y_float\n";
    for (const auto& [x, y] : g.breakpoints())
        out << to_pq_string(x) << "," << to_pq_string(y) << "," << to_double(x) << ","
            << to_double(y) << "\n";
}

inline void export_box_csv(const std::vector<BoxRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "delta,count,ratio_float\n";
    for (const auto& r : rows)
        out << to_pq_string(r.delta) << "," << r.count.str() << "," << r.ratio << "\n";
}

}  // namespace gaugeworks
