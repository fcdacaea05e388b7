#pragma once

// δ-separated subsets of [0,1] on the dyadic grid δℤ, covering numbers and
// non-concentration (Frostman) profiles.
//
// A covering number here is the number of nonempty cells [j·t, (j+1)·t) of
// the dyadic partition at scale t = 2^-level.  It is within a factor 2 of the
// minimal interval cover.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/rational.hpp"

namespace sumlab {

using Index = std::int64_t;

class Scale {
public:
  static constexpr int kMinExponent = 1;
  static constexpr int kMaxExponent = 24;

  Scale() : m_(kMinExponent) {}
  explicit Scale(int m);

  int m() const { return m_; }
  // 2^m, the number of grid steps in [0,1].
  Index steps() const { return Index{1} << m_; }
  double delta() const;
  Rational delta_rational() const { return Rational::dyadic(1, m_); }

  friend bool operator==(Scale, Scale) = default;

private:
  int m_;
};

// Sorted, duplicate-free grid indices 0 <= i <= 2^m; element value i·δ.
class DiscretizedSet {
public:
  DiscretizedSet() = default;  // empty, m = 1
  DiscretizedSet(Scale scale, std::vector<Index> indices);
  static DiscretizedSet from_unsorted(Scale scale, std::vector<Index> indices);

  Scale scale() const { return scale_; }
  std::span<const Index> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  Index operator[](std::size_t k) const { return indices_[k]; }
  bool contains(Index i) const;
  Rational value(std::size_t k) const { return Rational::dyadic(indices_[k], scale_.m()); }

  friend bool operator==(const DiscretizedSet&, const DiscretizedSet&) = default;

private:
  Scale scale_;
  std::vector<Index> indices_;
};

// A set of grid points that may leave [0,1] (sumsets, difference sets,
// translates).  Indices are nonnegative and strictly increasing; element value
// is (index - offset)·δ.  The canonical form has indices.front() == 0.
class GridSet {
public:
  GridSet() = default;
  GridSet(Scale scale, Index offset, std::vector<Index> indices);
  GridSet(const DiscretizedSet& set);  // NOLINT(google-explicit-constructor)

  // Builds the canonical form from arbitrary signed grid positions p (value p·δ).
  static GridSet from_positions(Scale scale, std::vector<Index> positions);

  Scale scale() const { return scale_; }
  Index offset() const { return offset_; }
  std::span<const Index> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  // Signed grid position of element k: value = position(k)·δ.
  Index position(std::size_t k) const { return indices_[k] - offset_; }
  std::vector<Index> positions() const;
  Rational value(std::size_t k) const { return Rational::dyadic(position(k), scale_.m()); }

  // The elements as a DiscretizedSet; throws when some value leaves [0,1].
  DiscretizedSet to_discretized() const;

  friend bool operator==(const GridSet&, const GridSet&) = default;

private:
  Scale scale_;
  Index offset_ = 0;
  std::vector<Index> indices_;
};

// Multiset of values v / denominator, stored as sorted (value, multiplicity).
class ValueMultiset {
public:
  struct Entry {
    std::int64_t value;
    std::int64_t multiplicity;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  ValueMultiset(std::int64_t denominator, std::vector<Entry> entries);
  // Sorts and merges raw values (multiplicity 1 each).
  static ValueMultiset from_values(std::int64_t denominator, std::vector<std::int64_t> values);

  std::int64_t denominator() const { return denominator_; }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t distinct() const { return entries_.size(); }
  std::int64_t total() const;

  friend bool operator==(const ValueMultiset&, const ValueMultiset&) = default;

private:
  std::int64_t denominator_;
  std::vector<Entry> entries_;
};

std::size_t covering_number(const DiscretizedSet& x, int level);
std::size_t covering_number(const GridSet& x, int level);
std::size_t covering_number(const ValueMultiset& x, int level);
// Sorted rationals (duplicates allowed).
std::size_t covering_number(std::span<const Rational> values, int level);

// Exact |{x in X : |x - center| <= radius}|.
std::size_t ball_count(const DiscretizedSet& x, const Rational& center, const Rational& radius);

struct FrostmanRow {
  int level = 0;  // radius r = 2^-level
  double radius = 0;
  double worst_center = 0;
  std::int64_t worst_count = 0;
  double ratio = 0;  // worst_count / (r^sigma |X|)
};

struct FrostmanProfile {
  double sigma = 0;
  double cap = 1;
  std::size_t set_size = 0;
  std::vector<FrostmanRow> rows;  // radius decreasing
  double max_ratio = 0;
  // Largest sigma' whose max ratio over the same radii stays <= cap.
  double best_exponent = 0;
};

// Radii 2^-level for level in [max_radius_level, min_radius_level]; both in [0, m].
FrostmanProfile frostman_profile(const DiscretizedSet& x, double sigma, int min_radius_level,
                                 int max_radius_level, double cap = 1.0);
// All dyadic radii from δ to 1.
FrostmanProfile frostman_profile(const DiscretizedSet& x, double sigma, double cap = 1.0);

struct DoublingRow {
  int level = 0;
  std::size_t sumset_cover = 0;
  std::size_t set_cover = 0;
  double ratio = 0;
};

// For every dyadic t from δ to 1 (levels m..0): |X+X|_t, |X|_t and their ratio.
std::vector<DoublingRow> multiscale_doubling_profile(const DiscretizedSet& x);

// Text format: "scale m=<int>" then one index per line; blank lines and '#'
// comments ignored.
DiscretizedSet read_set(std::istream& in);
DiscretizedSet read_set_file(const std::string& path);
void write_set(std::ostream& out, const DiscretizedSet& x);
void write_set_file(const std::string& path, const DiscretizedSet& x);

}  // namespace sumlab
