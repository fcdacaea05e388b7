#pragma once

// Brute-force reference implementations.  Deliberately naive: exact
// rationals, full enumeration, no shared code with the library kernels
// beyond the Rational type and the set containers.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "sumlab/gridset.hpp"
#include "sumlab/incidence.hpp"
#include "sumlab/rational.hpp"

namespace oracle {

using sumlab::DiscretizedSet;
using sumlab::Index;
using sumlab::Rational;

inline std::vector<Rational> values(const DiscretizedSet& x) {
  std::vector<Rational> v;
  for (std::size_t k = 0; k < x.size(); ++k) v.push_back(x.value(k));
  return v;
}

// All (a1, a2, b1, b2) with |(a1 + c b1) - (a2 + c b2)| <= δ.
inline std::int64_t energy(const DiscretizedSet& a, const DiscretizedSet& b, const Rational& c) {
  const Rational delta = a.scale().delta_rational();
  const auto av = values(a), bv = values(b);
  std::int64_t n = 0;
  for (const auto& a1 : av)
    for (const auto& a2 : av)
      for (const auto& b1 : bv)
        for (const auto& b2 : bv)
          if (abs((a1 + c * b1) - (a2 + c * b2)) <= delta) ++n;
  return n;
}

// Number of cells [j t, (j+1) t) met by the values, t = 2^-level.
inline std::size_t cover(const std::vector<Rational>& v, int level) {
  std::set<Rational> cells;
  const Rational t = Rational::dyadic(1, level);
  for (const auto& x : v) {
    const Rational q = x / t;
    // floor of q
    sumlab::i128 f = q.num() / q.den();
    if (q.num() < 0 && f * q.den() != q.num()) --f;
    cells.insert(Rational(f));
  }
  return cells.size();
}

inline std::vector<Rational> sumset(const std::vector<Rational>& x, const std::vector<Rational>& y, int sign = 1) {
  std::set<Rational> s;
  for (const auto& a : x)
    for (const auto& b : y) s.insert(sign > 0 ? a + b : a - b);
  return {s.begin(), s.end()};
}

inline std::int64_t ball(const std::vector<Rational>& v, const Rational& center, const Rational& r) {
  std::int64_t n = 0;
  for (const auto& x : v) n += abs(x - center) <= r ? 1 : 0;
  return n;
}

// Worst closed-ball count over centers at elements and midpoints of all pairs.
inline std::int64_t frostman_worst(const DiscretizedSet& x, const Rational& r) {
  const auto v = values(x);
  std::int64_t best = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) best = std::max(best, ball(v, (v[i] + v[j]) / Rational(2), r));
  return best;
}

// max_y |X + yX| over exact values.
inline std::size_t max_dilate_sum(const DiscretizedSet& x, const DiscretizedSet& y) {
  const auto xv = values(x);
  std::size_t best = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    std::set<Rational> s;
    for (const auto& a : xv)
      for (const auto& b : xv) s.insert(a + y.value(k) * b);
    best = std::max(best, s.size());
  }
  return best;
}

// |D| for a fixed triple: for each y the lowest p in X - x1 within δ/2 of
// (x2 - x3) y, counted once per distinct p.
inline std::size_t intersection(const DiscretizedSet& x, const DiscretizedSet& y, const Rational& x1,
                                const Rational& x2, const Rational& x3) {
  const Rational half = x.scale().delta_rational() / Rational(2);
  const auto xv = values(x);
  std::set<Rational> reps;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const Rational target = (x2 - x3) * y.value(k);
    for (const auto& a : xv) {  // ascending, so the first hit is the lowest
      if (abs((a - x1) - target) <= half) {
        reps.insert(a - x1);
        break;
      }
    }
  }
  return reps.size();
}

inline std::size_t best_triple(const DiscretizedSet& x, const DiscretizedSet& y) {
  const auto xv = values(x);
  std::size_t best = 0;
  for (const auto& a : xv)
    for (const auto& b : xv)
      for (const auto& c : xv) best = std::max(best, intersection(x, y, a, b, c));
  return best;
}

// Exact incidences with the distance computed from its definition.
inline std::int64_t incidences(const std::vector<sumlab::Point>& pts, const std::vector<sumlab::GridLine>& lines,
                               const Rational& tol, bool euclidean) {
  std::int64_t n = 0;
  for (const auto& l : lines)
    for (const auto& p : pts) {
      // Residual along the line's own parametrisation.
      const bool yx = l.orientation == sumlab::Orientation::YOfX;
      const Rational u = yx ? p.x : p.y, w = yx ? p.y : p.x;
      const Rational r = l.slope * u + l.intercept - w;
      if (euclidean) {
        if (r * r <= tol * tol * (Rational(1) + l.slope * l.slope)) ++n;
      } else if (abs(r) <= tol) {
        ++n;
      }
    }
  return n;
}

}  // namespace oracle
