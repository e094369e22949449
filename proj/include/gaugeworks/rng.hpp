#pragma once

#include "gaugeworks/numeric.hpp"

#include <random>

namespace gaugeworks {

// Deterministic seeded source. Only raw mt19937_64 output is used (the engine
// sequence is fixed by the standard); distributions are built here by hand so
// identical seeds give identical rationals on every platform.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    // uniform lattice rational in [0, 1] with denominator 2^32
    Rational unit() { return Rational(BigInt(next() >> 32), BigInt(1) << 32); }

    Rational between(const Rational& lo, const Rational& hi) {
        return lo + (hi - lo) * unit();
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace gaugeworks
