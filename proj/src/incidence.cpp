#include "sumlab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "sumlab/energy.hpp"
#include "sumlab/parallel.hpp"

namespace sumlab {

namespace {

using boost::multiprecision::int256_t;

struct Unit {
  double dx, dy, inv_norm;
};

Unit unit_direction(double a) {
  const double norm = std::hypot(a, 1.0);
  return {a / norm, -1.0 / norm, 1.0 / norm};
}

// Points with the dependent coordinate second: lines are y = c·x + d.
struct OrientedInput {
  std::vector<std::pair<Rational, Rational>> points;
  std::vector<std::pair<Rational, Rational>> lines;  // (c, d)
};

std::int64_t count_generic(const OrientedInput& in, const Rational& tol, DistanceMode mode, unsigned workers) {
  std::vector<std::int64_t> per_line(in.lines.size(), 0);
  const Rational tol2 = tol * tol;
  parallel_for(in.lines.size(), workers, [&](std::size_t li) {
    const auto& [c, d] = in.lines[li];
    const Rational scale = tol2 * (Rational(1) + c * c);
    std::int64_t n = 0;
    for (const auto& [x, y] : in.points) {
      const Rational r = c * x - y + d;
      if (mode == DistanceMode::Vertical ? abs(r) <= tol : r * r <= scale) ++n;
    }
    per_line[li] = n;
  });
  return std::accumulate(per_line.begin(), per_line.end(), std::int64_t{0});
}

struct ScaledInput {
  i128 den = 1;
  i128 tol = 0;
  std::vector<std::int64_t> column_x;      // distinct X, ascending
  std::vector<std::size_t> column_start;   // into ys, size column_x.size() + 1
  std::vector<std::int64_t> ys;            // sorted within each column
  std::vector<std::pair<std::int64_t, std::int64_t>> lines;  // (C, Dd)
  double magnitude = 0;  // bound on every intermediate of the kernel
};

// Everything scaled by the common denominator D: point (X, Y), line (C, Dd),
// tolerance T.  The residual R = C·X - Y·D + Dd·D equals D²·(c·x - y + d).
std::optional<ScaledInput> scale_input(const OrientedInput& in, const Rational& tol) {
  constexpr i128 kLimit = i128{1} << 62;
  ScaledInput out;
  i128 den = tol.den();
  auto absorb = [&](const Rational& v) {
    const i128 d = v.den();
    if (d == den || den % d == 0) return true;
    if (d % den == 0) {
      den = d;
    } else {
      den = den / gcd128(den, d) * d;
    }
    return den <= kLimit;
  };
  for (const auto& [x, y] : in.points)
    if (!absorb(x) || !absorb(y)) return std::nullopt;
  for (const auto& [c, d] : in.lines)
    if (!absorb(c) || !absorb(d)) return std::nullopt;
  out.den = den;

  bool fits = true;
  auto scaled = [&](const Rational& v) -> std::int64_t {
    const i128 s = v.num() * (den / v.den());
    if (s > kLimit || s < -kLimit) fits = false;
    return static_cast<std::int64_t>(s);
  };
  out.tol = scaled(tol);
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  pts.reserve(in.points.size());
  double max_x = 0, max_y = 0;
  for (const auto& [x, y] : in.points) {
    pts.emplace_back(scaled(x), scaled(y));
    max_x = std::max(max_x, std::fabs(static_cast<double>(pts.back().first)));
    max_y = std::max(max_y, std::fabs(static_cast<double>(pts.back().second)));
  }
  double max_c = 0, max_d = 0;
  for (const auto& [c, d] : in.lines) {
    out.lines.emplace_back(scaled(c), scaled(d));
    max_c = std::max(max_c, std::fabs(static_cast<double>(out.lines.back().first)));
    max_d = std::max(max_d, std::fabs(static_cast<double>(out.lines.back().second)));
  }
  if (!fits) return std::nullopt;

  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == 0 || pts[i].first != pts[i - 1].first) {
      out.column_x.push_back(pts[i].first);
      out.column_start.push_back(i);
    }
    out.ys.push_back(pts[i].second);
  }
  out.column_start.push_back(pts.size());
  const double dd = static_cast<double>(den), t = static_cast<double>(out.tol);
  out.magnitude = max_c * max_x + max_d * dd + t * (dd + max_c) + (max_y + 1) * dd;
  return out;
}

template <class Int>
std::int64_t count_kernel(const ScaledInput& in, DistanceMode mode, unsigned workers) {
  const Int d_big = static_cast<Int>(in.den);
  const Int t_scaled = static_cast<Int>(in.tol);
  const Int inner = t_scaled * d_big;
  auto floor_div_int = [](Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  };
  std::vector<std::int64_t> per_line(in.lines.size(), 0);
  parallel_for(in.lines.size(), workers, [&](std::size_t li) {
    const Int c = in.lines[li].first, dd = in.lines[li].second;
    const Int c_abs = c < 0 ? -c : c;
    // Vertical window is exact; the Euclidean one is a superset, refined below.
    const Int half = mode == DistanceMode::Vertical ? inner : t_scaled * (d_big + c_abs);
    const int256_t limit = mode == DistanceMode::Euclidean
                               ? int256_t(in.tol) * int256_t(in.tol) *
                                     (int256_t(in.den) * int256_t(in.den) + int256_t(c) * int256_t(c))
                               : int256_t(0);
    const Int offset = dd * d_big;
    std::int64_t n = 0;
    for (std::size_t col = 0; col < in.column_x.size(); ++col) {
      const Int center = c * static_cast<Int>(in.column_x[col]) + offset;
      const auto lo = static_cast<std::int64_t>(-floor_div_int(half - center, d_big));  // ceil
      const auto hi = static_cast<std::int64_t>(floor_div_int(center + half, d_big));
      const auto begin = in.ys.begin() + static_cast<std::ptrdiff_t>(in.column_start[col]);
      const auto end = in.ys.begin() + static_cast<std::ptrdiff_t>(in.column_start[col + 1]);
      if (hi < *begin || lo > *(end - 1)) continue;
      auto first = std::lower_bound(begin, end, lo);
      auto last = std::upper_bound(first, end, hi);
      if (mode == DistanceMode::Vertical) {
        n += last - first;
        continue;
      }
      for (auto it = first; it != last; ++it) {
        const Int r = center - static_cast<Int>(*it) * d_big;
        const Int r_abs = r < 0 ? -r : r;
        if (r_abs <= inner || int256_t(r) * int256_t(r) <= limit) ++n;
      }
    }
    per_line[li] = n;
  });
  return std::accumulate(per_line.begin(), per_line.end(), std::int64_t{0});
}

std::optional<std::int64_t> count_scaled(const OrientedInput& in, const Rational& tol, DistanceMode mode,
                                         unsigned workers) {
  const auto scaled = scale_input(in, tol);
  if (!scaled) return std::nullopt;
  if (scaled->magnitude < 0x1p62) return count_kernel<std::int64_t>(*scaled, mode, workers);
  if (scaled->magnitude < 0x1p124) return count_kernel<i128>(*scaled, mode, workers);
  return std::nullopt;
}

}  // namespace

double line_distance(const GridLine& l1, const GridLine& l2) {
  if (l1.orientation != Orientation::YOfX || l2.orientation != Orientation::YOfX)
    throw std::invalid_argument("line_distance: orientation mismatch (slope-intercept lines required)");
  const Unit u = unit_direction(l1.slope.to_double());
  const Unit v = unit_direction(l2.slope.to_double());
  const double direction = std::hypot(u.dx - v.dx, u.dy - v.dy);
  const double offset = std::fabs(l1.intercept.to_double() * u.inv_norm - l2.intercept.to_double() * v.inv_norm);
  return direction + offset;
}

std::int64_t incidence_count(std::span<const Point> points, std::span<const GridLine> lines, const Tolerance& tol,
                             DistanceMode mode, unsigned workers) {
  if (!tol) return static_cast<std::int64_t>(points.size()) * static_cast<std::int64_t>(lines.size());
  if (*tol < Rational(0)) throw std::invalid_argument("incidence_count: negative tolerance");
  if (points.empty() || lines.empty()) return 0;

  std::int64_t total = 0;
  for (Orientation o : {Orientation::YOfX, Orientation::XOfY}) {
    OrientedInput in;
    for (const auto& l : lines)
      if (l.orientation == o) in.lines.emplace_back(l.slope, l.intercept);
    if (in.lines.empty()) continue;
    in.points.reserve(points.size());
    for (const auto& p : points)
      in.points.emplace_back(o == Orientation::YOfX ? p.x : p.y, o == Orientation::YOfX ? p.y : p.x);
    const auto fast = count_scaled(in, *tol, mode, workers);
    total += fast ? *fast : count_generic(in, *tol, mode, workers);
  }
  return total;
}

double st_bound(std::size_t points, std::size_t lines, double constant) {
  const double m = static_cast<double>(points), n = static_cast<double>(lines);
  return constant * (std::cbrt(m * m) * std::cbrt(n * n) + m + n);
}

double dov_bound(double points, double lines, double delta, double t, double constant) {
  if (!(t > 1.0)) throw std::invalid_argument("dov bound requires t > d - n = 1");
  if (!(t < 3.0)) throw std::invalid_argument("dov_bound: t must be below 3");
  return constant * points * std::pow(lines, 1.0 / (3.0 - t)) * std::pow(delta, (t - 1.0) / (3.0 - t));
}

bool IncidenceReport::consistent() const {
  if (static_cast<double>(incidences) > static_cast<double>(point_count) * static_cast<double>(line_count)) return false;
  if (st_pass != (static_cast<double>(incidences) <= st_bound)) return false;
  if (has_dov && dov_pass != (static_cast<double>(incidences) <= dov_bound * (1.0 + 1e-12))) return false;
  return true;
}

IncidenceReport st_bound_check(std::span<const Point> points, std::span<const GridLine> lines, const Tolerance& tol,
                               DistanceMode mode, double constant, unsigned workers) {
  IncidenceReport r;
  r.point_count = points.size();
  r.line_count = lines.size();
  r.tolerance = tol;
  r.mode = mode;
  r.incidences = incidence_count(points, lines, tol, mode, workers);
  r.st_constant = constant;
  r.st_bound = st_bound(r.point_count, r.line_count, constant);
  r.st_pass = static_cast<double>(r.incidences) <= r.st_bound;
  return r;
}

std::vector<Point> product_points(const DiscretizedSet& x1, const DiscretizedSet& x2) {
  std::vector<Point> out;
  out.reserve(x1.size() * x2.size());
  for (std::size_t i = 0; i < x1.size(); ++i)
    for (std::size_t j = 0; j < x2.size(); ++j) out.push_back({x1.value(i), x2.value(j)});
  return out;
}

std::vector<GridLine> lines_from(const DiscretizedSet& c, const DiscretizedSet& b) {
  std::vector<GridLine> out;
  out.reserve(c.size() * b.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out.push_back(GridLine::through(c.value(i), b.value(j)));
  return out;
}

double product_frostman_constant(const DiscretizedSet& x1, const DiscretizedSet& x2, double t) {
  if (x1.scale() != x2.scale()) throw std::invalid_argument("scale mismatch");
  const int m = x1.scale().m();
  const FrostmanProfile p1 = frostman_profile(x1, 0.0, m, 0);
  const FrostmanProfile p2 = frostman_profile(x2, 0.0, m, 0);
  const double n = static_cast<double>(x1.size()) * static_cast<double>(x2.size());
  double best = 0;
  for (std::size_t k = 0; k < p1.rows.size() && k < p2.rows.size(); ++k) {
    const double r = p1.rows[k].radius;
    const double count = static_cast<double>(p1.rows[k].worst_count) * static_cast<double>(p2.rows[k].worst_count);
    best = std::max(best, count / (std::pow(r, t) * n));
  }
  return best;
}

IncidenceReport dov_bound_check(const DiscretizedSet& x1, const DiscretizedSet& x2, std::span<const GridLine> lines,
                                double t, double frostman_m, std::optional<double> c_fit, unsigned workers) {
  if (!(t > 1.0)) throw std::invalid_argument("dov bound requires t > d - n = 1");
  if (x1.scale() != x2.scale()) throw std::invalid_argument("scale mismatch");
  if (!(frostman_m > 0.0)) throw std::invalid_argument("dov_bound_check: M must be positive");
  const std::vector<Point> points = product_points(x1, x2);
  const int m = x1.scale().m();

  // Tolerance M·δ, rounded up to the dyadic grid 2^-(m+16).
  const i128 scaled = static_cast<i128>(std::ceil(std::ldexp(frostman_m, 16)));
  const Rational tol = Rational::dyadic(scaled, m + 16);

  IncidenceReport r;
  r.point_count = points.size();
  r.line_count = lines.size();
  r.tolerance = tol;
  r.mode = DistanceMode::Euclidean;
  r.incidences = incidence_count(points, lines, tol, DistanceMode::Euclidean, workers);
  r.st_bound = st_bound(r.point_count, r.line_count, r.st_constant);
  r.st_pass = static_cast<double>(r.incidences) <= r.st_bound;

  r.has_dov = true;
  r.t = t;
  r.frostman_m = frostman_m;
  r.delta = x1.scale().delta();
  r.dov_shape = dov_bound(static_cast<double>(r.point_count), static_cast<double>(r.line_count), r.delta, t, 1.0);
  r.c_fit_supplied = c_fit.has_value();
  r.c_fit = c_fit ? *c_fit : static_cast<double>(r.incidences) / r.dov_shape;
  r.dov_bound = r.c_fit * r.dov_shape;
  r.dov_pass = static_cast<double>(r.incidences) <= r.dov_bound * (1.0 + 1e-12);
  return r;
}

EnergyIncidence energy_via_incidence(const DiscretizedSet& a, const DiscretizedSet& b, const DiscretizedSet& c,
                                     unsigned workers) {
  if (a.scale() != b.scale() || a.scale() != c.scale()) throw std::invalid_argument("scale mismatch");
  const std::vector<GridLine> lines = lines_from(c, b);
  const Rational tol = a.scale().delta_rational();
  const int m = a.scale().m();

  std::vector<std::int64_t> per_a2(a.size(), 0);
  parallel_for(a.size(), workers, [&](std::size_t k) {
    std::vector<Point> points;
    points.reserve(a.size() * b.size());
    for (std::size_t j = 0; j < b.size(); ++j)
      for (std::size_t i = 0; i < a.size(); ++i) points.push_back({b.value(j), Rational::dyadic(a[i] - a[k], m)});
    per_a2[k] = incidence_count(points, lines, tol, DistanceMode::Vertical, 1);
  });

  EnergyIncidence out;
  out.incidences = std::accumulate(per_a2.begin(), per_a2.end(), std::int64_t{0});
  out.energy_total = energy_spectrum(a, b, c, {workers, false}).total;
  out.match = out.incidences == out.energy_total;
  if (!out.match)
    throw std::logic_error("energy_via_incidence: incidence total " + std::to_string(out.incidences) +
                           " differs from energy total " + std::to_string(out.energy_total));
  return out;
}

LineSeparation line_separation(std::span<const GridLine> lines, double delta) {
  std::vector<GridLine> sorted(lines.begin(), lines.end());
  for (const auto& l : sorted)
    if (l.orientation != Orientation::YOfX) throw std::invalid_argument("line_separation: orientation mismatch");
  std::sort(sorted.begin(), sorted.end(), [](const GridLine& x, const GridLine& y) {
    return x.slope != y.slope ? x.slope < y.slope : x.intercept < y.intercept;
  });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  LineSeparation out;
  out.line_count = sorted.size();
  out.min_distance = std::numeric_limits<double>::infinity();
  std::vector<Unit> units;
  units.reserve(sorted.size());
  for (const auto& l : sorted) units.push_back(unit_direction(l.slope.to_double()));
  // The direction term grows with the slope gap, so the scan stops once it alone exceeds the best.
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const double direction = std::hypot(units[i].dx - units[j].dx, units[i].dy - units[j].dy);
      if (direction >= out.min_distance) break;
      out.min_distance = std::min(out.min_distance, line_distance(sorted[i], sorted[j]));
    }
  out.c0 = out.line_count > 1 ? out.min_distance / delta : std::numeric_limits<double>::infinity();
  if (out.line_count <= 1) out.min_distance = std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace sumlab
