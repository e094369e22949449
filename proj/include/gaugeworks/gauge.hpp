#pragma once

#include "gaugeworks/certificate.hpp"
#include "gaugeworks/numeric.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace gaugeworks {

// Piecewise-linear gauge function. Breakpoints are stored with x strictly
// decreasing; g(0) = 0 with linear interpolation below the smallest
// breakpoint, and linear extension above the largest one using the slope of
// the last stored segment (for a single breakpoint: the chord through 0).
class Gauge {
  public:
    using Breakpoint = std::pair<Rational, Rational>;

    Gauge() = default;

    explicit Gauge(std::vector<Breakpoint> bps) : bps_(std::move(bps)) {
        if (bps_.empty()) throw Error("gauge needs at least one breakpoint");
        for (std::size_t i = 0; i < bps_.size(); ++i) {
            if (bps_[i].first <= 0 || bps_[i].second <= 0)
                throw Error("gauge breakpoints must be positive");
            if (i > 0) {
                if (bps_[i].first >= bps_[i - 1].first)
                    throw Error("gauge breakpoint x values must be strictly decreasing");
                if (bps_[i].second >= bps_[i - 1].second)
                    throw Error("gauge must be strictly increasing in x");
            }
        }
    }

    const std::vector<Breakpoint>& breakpoints() const { return bps_; }

    Rational operator()(const Rational& x) const { return eval(x); }

    Rational eval(const Rational& x) const {
        if (x < 0) throw Error("gauge evaluated at negative argument");
        if (x == 0) return 0;
        if (x >= bps_.front().first) {
            const auto [x0, y0] = bps_.front();
            return y0 + (x - x0) * extension_slope();
        }
        // find the bracketing pair (xs descending)
        std::size_t i = 1;
        while (i < bps_.size() && bps_[i].first > x) ++i;
        const auto& [xhi, yhi] = bps_[i - 1];
        if (i == bps_.size()) {
            // below the smallest breakpoint: chord to the origin
            const auto& [xlo, ylo] = bps_.back();
            return ylo * x / xlo;
        }
        const auto& [xlo, ylo] = bps_[i];
        return ylo + (x - xlo) * (yhi - ylo) / (xhi - xlo);
    }

    Rational extension_slope() const {
        if (bps_.size() == 1) return bps_[0].second / bps_[0].first;
        return (bps_[0].second - bps_[1].second) / (bps_[0].first - bps_[1].first);
    }

    Rational x_max() const { return bps_.front().first; }

  private:
    std::vector<Breakpoint> bps_;
};

inline Gauge scale(const Gauge& g, const Rational& c) {
    if (c <= 0) throw Error("scale factor must be positive");
    std::vector<Gauge::Breakpoint> bps = g.breakpoints();
    for (auto& [x, y] : bps) y *= c;
    return Gauge(std::move(bps));
}

namespace detail {

// line through two points, as (slope, intercept)
inline std::pair<Rational, Rational> line_through(const Rational& x0, const Rational& y0,
                                                  const Rational& x1, const Rational& y1) {
    const Rational s = (y1 - y0) / (x1 - x0);
    return {s, y0 - s * x0};
}

}  // namespace detail

// Pointwise minimum; the breakpoint set is the union of both sets plus every
// crossing point of the linear pieces, all solved exactly.
inline Gauge pointwise_min(const Gauge& g1, const Gauge& g2) {
    std::vector<Rational> xs;
    for (const auto& [x, y] : g1.breakpoints()) xs.push_back(x);
    for (const auto& [x, y] : g2.breakpoints()) xs.push_back(x);
    std::sort(xs.begin(), xs.end(), std::greater<Rational>());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // the extensions may cross above every stored breakpoint
    {
        const Rational s1 = g1.extension_slope(), s2 = g2.extension_slope();
        if (s1 != s2) {
            const Rational top = xs.front();
            const Rational a1 = g1.eval(top) - s1 * top;
            const Rational a2 = g2.eval(top) - s2 * top;
            const Rational xc = (a2 - a1) / (s1 - s2);
            if (xc > top) xs.insert(xs.begin(), xc);
        }
    }

    // interior crossings between consecutive sample points (both gauges are
    // linear there); below the smallest breakpoint both pieces pass through
    // the origin, so they cannot cross again
    std::vector<Rational> full;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        full.push_back(xs[i]);
        if (i + 1 == xs.size()) break;
        const Rational &xa = xs[i + 1], &xb = xs[i];
        const Rational da = g1.eval(xa) - g2.eval(xa);
        const Rational db = g1.eval(xb) - g2.eval(xb);
        if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
            const auto [s1, c1] = detail::line_through(xa, g1.eval(xa), xb, g1.eval(xb));
            const auto [s2, c2] = detail::line_through(xa, g2.eval(xa), xb, g2.eval(xb));
            const Rational xc = (c2 - c1) / (s1 - s2);
            if (xa < xc && xc < xb) full.push_back(xc);
        }
    }
    std::sort(full.begin(), full.end(), std::greater<Rational>());
    full.erase(std::unique(full.begin(), full.end()), full.end());

    std::vector<Gauge::Breakpoint> bps;
    bps.reserve(full.size());
    for (const auto& x : full) bps.emplace_back(x, std::min(g1.eval(x), g2.eval(x)));
    return Gauge(std::move(bps));
}

// Passes iff g(x)/x strictly increases as x decreases through the
// breakpoints (between breakpoints the ratio is monotone, so checking the
// breakpoints decides the whole curve).
inline Certificate check_ratio_monotone(const Gauge& g) {
    Certificate cert;
    cert.name = "ratio_monotone";
    const auto& bps = g.breakpoints();
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const Rational hi = bps[i].second / bps[i].first;
        const Rational lo = bps[i + 1].second / bps[i + 1].first;
        if (!cert.check("ratio at x=" + to_pq_string(bps[i + 1].first) + " > ratio at x=" +
                            to_pq_string(bps[i].first),
                        lo, Rel::GT, hi)) {
            cert.witness["x_hi"] = to_pq_string(bps[i].first);
            cert.witness["y_hi"] = to_pq_string(bps[i].second);
            cert.witness["x_lo"] = to_pq_string(bps[i + 1].first);
            cert.witness["y_lo"] = to_pq_string(bps[i + 1].second);
            return cert;
        }
    }
    return cert;
}

// Passes iff consecutive segment slopes are nonincreasing in x-increasing
// order, including the implicit segment from the origin.
inline Certificate check_concave(const Gauge& g) {
    Certificate cert;
    cert.name = "concave";
    const auto& bps = g.breakpoints();
    Rational prev_slope = bps.back().second / bps.back().first;  // origin piece
    for (std::size_t i = bps.size(); i-- > 1;) {
        const auto& [xlo, ylo] = bps[i];
        const auto& [xhi, yhi] = bps[i - 1];
        const Rational s = (yhi - ylo) / (xhi - xlo);
        if (!cert.check("slope on [" + to_pq_string(xlo) + "," + to_pq_string(xhi) + "]",
                        s, Rel::LE, prev_slope)) {
            cert.witness["x"] = to_pq_string(xlo);
            return cert;
        }
        prev_slope = s;
    }
    return cert;
}

}  // namespace gaugeworks
