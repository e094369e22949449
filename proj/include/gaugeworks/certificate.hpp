#pragma once

#include "gaugeworks/numeric.hpp"

#include <map>
#include <string>
#include <vector>

namespace gaugeworks {

enum class Rel { LT, LE, EQ, GE, GT };

inline const char* rel_name(Rel r) {
    switch (r) {
        case Rel::LT: return "<";
        case Rel::LE: return "<=";
        case Rel::EQ: return "==";
        case Rel::GE: return ">=";
        case Rel::GT: return ">";
    }
    return "?";
}

inline bool rel_holds(const Rational& lhs, Rel r, const Rational& rhs) {
    switch (r) {
        case Rel::LT: return lhs < rhs;
        case Rel::LE: return lhs <= rhs;
        case Rel::EQ: return lhs == rhs;
        case Rel::GE: return lhs >= rhs;
        case Rel::GT: return lhs > rhs;
    }
    return false;
}

// One exact comparison, kept verbatim for reports.
struct CheckRecord {
    std::string label;
    std::string lhs;
    std::string rel;
    std::string rhs;
    bool ok = false;
};

// A machine-checkable pass/fail verdict: every claim is an exact rational
// comparison, and a failing run carries a witness.
struct Certificate {
    std::string name;
    bool pass = true;
    std::vector<CheckRecord> checks;
    std::map<std::string, std::string> witness;

    bool check(const std::string& label, const Rational& lhs, Rel r, const Rational& rhs) {
        const bool ok = rel_holds(lhs, r, rhs);
        checks.push_back({label, to_pq_string(lhs), rel_name(r), to_pq_string(rhs), ok});
        if (!ok) pass = false;
        return ok;
    }

    void note(const std::string& label, const std::string& value) {
        checks.push_back({label, value, "", "", true});
    }

    void fail(const std::string& label) {
        checks.push_back({label, "", "", "", false});
        pass = false;
    }

    void absorb(const Certificate& other) {
        for (const auto& c : other.checks) checks.push_back(c);
        if (!other.pass) pass = false;
        for (const auto& [k, v] : other.witness) witness.emplace(k, v);
    }
};

}  // namespace gaugeworks
