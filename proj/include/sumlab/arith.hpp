#pragma once

// Exact sumset, dilation and affine-combination arithmetic on grid sets.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sumlab/gridset.hpp"
#include "sumlab/rational.hpp"

namespace sumlab {

enum class Sign { Plus, Minus };

inline constexpr std::uint64_t kDefaultCombinationCap = 100'000'000;
inline constexpr std::uint64_t kDefaultQuadrupleCap = std::uint64_t{1} << 26;
inline constexpr std::uint64_t kDefaultTripleCap = std::uint64_t{1} << 26;

// Enumeration caps honour the SUMLAB_CAP environment variable when set.
std::uint64_t effective_cap(std::uint64_t requested);

// {x ± y}; scale mismatch throws.
GridSet sumset(const GridSet& x, const GridSet& y, Sign sign = Sign::Plus);
// Y1 + Y2 + ... + Yk.
GridSet iterated_sumset(std::span<const GridSet> sets);

// {a + c·b : a in A, b in B} for c = k·δ, over denominator 2^(2m).
ValueMultiset dilate_sum(const DiscretizedSet& a, Index k, const DiscretizedSet& b);

// Σ coeffs[i]·x_i over the Cartesian product of the sets.
ValueMultiset linear_combination(std::span<const Rational> coeffs, std::span<const GridSet> sets,
                                 std::uint64_t cap = kDefaultCombinationCap);

struct RatioSet {
  std::string source;
  double kappa = 0;
  double threshold = 0;  // δ^κ
  std::vector<Rational> ratios;  // sorted, distinct
  bool truncated = false;
  std::uint64_t quadruples_examined = 0;
  std::string diagnostic;  // nonempty when no admissible denominator exists

  bool contains(const Rational& r) const;
};

// R = {(d1-d2)/(d3-d4) : d_i in D, |d3-d4| > δ^κ}.  Exact unless the
// enumeration exceeds cap, in which case `cap` seeded quadruples are drawn.
RatioSet ratio_set(const GridSet& d, double kappa, std::uint64_t cap = kDefaultQuadrupleCap,
                   std::uint64_t seed = 0, std::string source = {});

}  // namespace sumlab
