#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gaugeworks {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files and flag values; the CLI maps this to exit status 2.
struct ParseError : Error {
    using Error::Error;
};

inline BigInt num(const Rational& q) { return numerator(q); }
inline BigInt den(const Rational& q) { return denominator(q); }

inline Rational make_rational(BigInt n, BigInt d) {
    if (d == 0) throw ParseError("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    return Rational(std::move(n), std::move(d));
}

// floor(a/b) for b > 0, exact for negative a as well
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if (a % b != 0 && ((a < 0) == (b < 0))) ++q;
    return q;
}

inline BigInt rat_floor(const Rational& q) { return floor_div(num(q), den(q)); }
inline BigInt rat_ceil(const Rational& q) { return ceil_div(num(q), den(q)); }

// 2^k as a Rational, k may be negative
inline Rational pow2(long k) {
    if (k >= 0) return Rational(BigInt(1) << k, 1);
    return Rational(1, BigInt(1) << (-k));
}

inline BigInt bigint_pow(BigInt base, unsigned long e) {
    BigInt out = 1;
    while (e) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

inline Rational rat_pow(const Rational& base, unsigned long e) {
    return Rational(bigint_pow(num(base), e), bigint_pow(den(base), e));
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Canonical wire form "p/q", lowest terms, q > 0 (cpp_rational maintains both).
inline std::string to_pq_string(const Rational& q) {
    return num(q).str() + "/" + den(q).str();
}

inline BigInt parse_bigint(std::string_view s) {
    if (s.empty()) throw ParseError("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ParseError("bad integer literal: " + std::string(s));
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9')
            throw ParseError("bad integer literal: " + std::string(s));
    return BigInt(std::string(s));
}

// Accepts "p/q" or a bare integer "p"; reduces; rejects q == 0.
inline Rational parse_rational(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_bigint(s), 1);
    BigInt p = parse_bigint(s.substr(0, slash));
    BigInt q = parse_bigint(s.substr(slash + 1));
    if (q == 0) throw ParseError("rational with zero denominator: " + std::string(s));
    return make_rational(std::move(p), std::move(q));
}

inline double to_double(const BigInt& n) {
    if (n == 0) return 0.0;
    return n.convert_to<double>();
}

inline double to_double(const Rational& q) {
    // scale by bit lengths so huge num/den pairs survive the conversion
    BigInt n = num(q), d = den(q);
    long shift = 0;
    const long nb = static_cast<long>(msb(abs(n)));
    const long db = static_cast<long>(msb(d));
    if (nb > 512 || db > 512) {
        shift = (nb > db ? nb : db) - 512;
        n >>= shift;
        d >>= shift;
        if (d == 0) d = 1;
    }
    return n.convert_to<double>() / d.convert_to<double>();
}

inline bool fits_int64(const BigInt& n) {
    return n >= std::numeric_limits<std::int64_t>::min() &&
           n <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace gaugeworks
