#pragma once

// Additive energy of A and cB at scale δ and the K statistic
//
//   Σ_{c∈C} E_c = |A|^{3/2} |B|^{3/2} |C| / K,
//   E_c = #{(a1,a2,b1,b2) : |(a1 + c·b1) - (a2 + c·b2)| <= δ}.
//
// E_c is the exact tuple count.  With δ-separated A, B the window can hold at
// most three grid cells, so |A||B| <= E_c <= 3·min(|A|²|B|, |A||B|²) and
// 1/3 <= K <= sqrt(|A||B|).

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sumlab/gridset.hpp"
#include "sumlab/rational.hpp"

namespace sumlab {

// Exact E_c for c = k·δ.
std::int64_t energy(const DiscretizedSet& a, const DiscretizedSet& b, Index k);

struct LevelSet {
  int band = 0;     // N: E_c in [2^N·mean, 2^(N+1)·mean)
  double rho = 1;   // 2^-N
  std::vector<Index> c_indices;
};

struct EnergyReport {
  std::size_t a_size = 0, b_size = 0, c_size = 0;
  std::vector<std::pair<Index, std::int64_t>> per_c;  // C order
  std::int64_t total = 0;
  double K = 0;
  std::vector<LevelSet> levels;  // ascending band
  std::size_t largest_level = 0;  // index into levels
  bool prefiltered = false;

  // |A|^{3/2}|B|^{3/2}
  double normalization() const;
  // Exact comparisons of K against a rational q >= 0 (via K² = (|A||B|)³|C|² / total²).
  bool k_at_least(const Rational& q) const;
  bool k_at_most(const Rational& q) const;
  // K <= sqrt(|A||B|)  <=>  total >= |A||B||C|.
  bool k_within_upper_envelope() const;
  const LevelSet& largest() const { return levels.at(largest_level); }
};

struct EnergyOptions {
  unsigned workers = 1;
  // Drop c with E_c below the mean (band < 0) before choosing the largest band.
  bool prefilter_low_energy = false;
};

EnergyReport energy_spectrum(const DiscretizedSet& a, const DiscretizedSet& b, const DiscretizedSet& c,
                             const EnergyOptions& options = {});

double k_statistic(const DiscretizedSet& a, const DiscretizedSet& b, const DiscretizedSet& c,
                   const EnergyOptions& options = {});

// |{a + c·b : (a,b) in G}|_δ for c = k·δ; pairs are grid indices (a, b).
std::size_t pi_c_covering(std::span<const std::pair<Index, Index>> pairs, Index k, Scale scale);

}  // namespace sumlab
