#pragma once

// Planar δ-incidences between exact-rational points and lines, the affine
// line metric, and the Szemerédi–Trotter / Frostman-type incidence bounds.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sumlab/gridset.hpp"
#include "sumlab/rational.hpp"

namespace sumlab {

struct Point {
  Rational x, y;
  friend bool operator==(const Point&, const Point&) = default;
};

enum class Orientation { YOfX, XOfY };

// y = slope·x + intercept, or x = slope·y + intercept for XOfY.
struct GridLine {
  Rational slope;
  Rational intercept;
  Orientation orientation = Orientation::YOfX;

  static GridLine y_of_x(Rational c, Rational d) { return {c, d, Orientation::YOfX}; }
  // y = c(x - b1)
  static GridLine through(Rational c, Rational b1) { return {c, -(c * b1), Orientation::YOfX}; }
  // x = r - c·y
  static GridLine x_of_y(Rational r, Rational c) { return {-c, r, Orientation::XOfY}; }

  friend bool operator==(const GridLine&, const GridLine&) = default;
};

enum class DistanceMode { Euclidean, Vertical };

// Tolerance; std::nullopt is +∞.
using Tolerance = std::optional<Rational>;

// |u(a) - u(c)| + |b/|(a,-1)| - d/|(c,-1)||, u(a) = (a,-1)/|(a,-1)|.
double line_distance(const GridLine& l1, const GridLine& l2);

// Exact count of (p, l) within the tolerance.  Vertical distance is the
// residual along the line's dependent coordinate.
std::int64_t incidence_count(std::span<const Point> points, std::span<const GridLine> lines, const Tolerance& tol,
                             DistanceMode mode, unsigned workers = 1);

inline constexpr double kStConstant = 4.0;

struct IncidenceReport {
  std::size_t point_count = 0;
  std::size_t line_count = 0;
  Tolerance tolerance;
  DistanceMode mode = DistanceMode::Euclidean;
  std::int64_t incidences = 0;

  double st_constant = kStConstant;
  double st_bound = 0;  // const·(m^{2/3}n^{2/3} + m + n)
  bool st_pass = false;

  bool has_dov = false;
  double t = 0;
  double frostman_m = 0;
  double delta = 0;
  double dov_shape = 0;  // |P|·|L|^{1/(3-t)}·δ^{(t-1)/(3-t)}
  double c_fit = 0;
  bool c_fit_supplied = false;
  double dov_bound = 0;
  bool dov_pass = false;

  // Flags recomputed from the stored numbers.
  bool consistent() const;
};

double st_bound(std::size_t points, std::size_t lines, double constant = kStConstant);
// C·|P|·|L|^{1/(3-t)}·δ^{(t-1)/(3-t)} for d = 2, n = 1.
double dov_bound(double points, double lines, double delta, double t, double constant = 1.0);

IncidenceReport st_bound_check(std::span<const Point> points, std::span<const GridLine> lines, const Tolerance& tol,
                               DistanceMode mode = DistanceMode::Euclidean, double constant = kStConstant,
                               unsigned workers = 1);

// Points X1×X2, incidences at Euclidean tolerance M·δ.  Without c_fit the
// constant is fitted as I / shape and recorded.
IncidenceReport dov_bound_check(const DiscretizedSet& x1, const DiscretizedSet& x2, std::span<const GridLine> lines,
                                double t, double frostman_m, std::optional<double> c_fit = std::nullopt,
                                unsigned workers = 1);

// Box-ball Frostman constant of X1×X2 at exponent t:
// max over r = 2^-j, j = 0..m, of N1(r)·N2(r) / (r^t |X1||X2|).
double product_frostman_constant(const DiscretizedSet& x1, const DiscretizedSet& x2, double t);

std::vector<Point> product_points(const DiscretizedSet& x1, const DiscretizedSet& x2);
// {y = c(x - b) : c in C, b in B}
std::vector<GridLine> lines_from(const DiscretizedSet& c, const DiscretizedSet& b);

struct EnergyIncidence {
  std::int64_t incidences = 0;
  std::int64_t energy_total = 0;
  bool match = false;
};

// Σ_{a2} I_δ(B×(A - a2), {y = c(x - b1)}) in vertical mode; throws when it
// differs from the energy_spectrum total.
EnergyIncidence energy_via_incidence(const DiscretizedSet& a, const DiscretizedSet& b, const DiscretizedSet& c,
                                     unsigned workers = 1);

struct LineSeparation {
  double min_distance = 0;
  double c0 = 0;  // min_distance / δ
  std::size_t line_count = 0;
};

// Minimum pairwise line_distance of distinct lines, relative to δ.
LineSeparation line_separation(std::span<const GridLine> lines, double delta);

}  // namespace sumlab
