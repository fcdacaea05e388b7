#include "sumlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sumlab/random.hpp"

namespace sumlab {

std::uint64_t effective_cap(std::uint64_t requested) {
  if (const char* env = std::getenv("SUMLAB_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return v;
  }
  return requested;
}

namespace {

void require_same_scale(Scale a, Scale b) {
  if (a != b) throw std::invalid_argument("scale mismatch");
}

}  // namespace

GridSet sumset(const GridSet& x, const GridSet& y, Sign sign) {
  require_same_scale(x.scale(), y.scale());
  std::vector<Index> positions;
  positions.reserve(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Index px = x.position(i);
    for (std::size_t j = 0; j < y.size(); ++j)
      positions.push_back(sign == Sign::Plus ? px + y.position(j) : px - y.position(j));
  }
  return GridSet::from_positions(x.scale(), std::move(positions));
}

GridSet iterated_sumset(std::span<const GridSet> sets) {
  if (sets.empty()) throw std::invalid_argument("iterated_sumset: no sets");
  GridSet acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) acc = sumset(acc, sets[i]);
  return acc;
}

ValueMultiset dilate_sum(const DiscretizedSet& a, Index k, const DiscretizedSet& b) {
  require_same_scale(a.scale(), b.scale());
  const int m = a.scale().m();
  if (k < 0 || k > a.scale().steps()) throw std::invalid_argument("dilate_sum: c outside [0,1]");
  std::vector<std::int64_t> values;
  values.reserve(a.size() * b.size());
  for (Index i : a.indices())
    for (Index j : b.indices()) values.push_back((i << m) + k * j);
  return ValueMultiset::from_values(std::int64_t{1} << (2 * m), std::move(values));
}

ValueMultiset linear_combination(std::span<const Rational> coeffs, std::span<const GridSet> sets,
                                 std::uint64_t cap) {
  if (coeffs.size() != sets.size() || sets.empty())
    throw std::invalid_argument("linear_combination: need one coefficient per set");
  const Scale scale = sets.front().scale();
  cap = effective_cap(cap);
  u128 tuples = 1;
  for (const auto& s : sets) {
    require_same_scale(scale, s.scale());
    tuples *= s.size();
    if (tuples > cap) throw std::invalid_argument("combination too large; reduce sets or raise cap");
  }
  i128 lcm = 1;
  for (const auto& c : coeffs) lcm = checked_mul(lcm / gcd128(lcm, c.den()), c.den());
  const i128 denominator = checked_mul(lcm, i128{1} << scale.m());
  if (denominator > std::numeric_limits<std::int64_t>::max())
    throw OverflowError("linear_combination: common denominator exceeds 64 bits");

  // Per-set numerators over the common denominator.
  std::vector<std::vector<i128>> terms(sets.size());
  i128 max_abs = 0;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const i128 factor = checked_mul(coeffs[s].num(), lcm / coeffs[s].den());
    i128 largest = 0;
    for (std::size_t k = 0; k < sets[s].size(); ++k) {
      i128 t = checked_mul(factor, sets[s].position(k));
      terms[s].push_back(t);
      largest = std::max(largest, t < 0 ? -t : t);
    }
    max_abs = checked_add(max_abs, largest);
  }
  if (max_abs > std::numeric_limits<std::int64_t>::max())
    throw OverflowError("linear_combination: values exceed 64 bits");

  std::vector<std::int64_t> values;
  values.reserve(static_cast<std::size_t>(tuples));
  if (tuples > 0) {
    std::vector<std::size_t> odometer(sets.size(), 0);
    for (;;) {
      i128 v = 0;
      for (std::size_t s = 0; s < sets.size(); ++s) v += terms[s][odometer[s]];
      values.push_back(static_cast<std::int64_t>(v));
      std::size_t s = 0;
      while (s < sets.size() && ++odometer[s] == sets[s].size()) odometer[s++] = 0;
      if (s == sets.size()) break;
    }
  }
  return ValueMultiset::from_values(static_cast<std::int64_t>(denominator), std::move(values));
}

bool RatioSet::contains(const Rational& r) const { return std::binary_search(ratios.begin(), ratios.end(), r); }

RatioSet ratio_set(const GridSet& d, double kappa, std::uint64_t cap, std::uint64_t seed, std::string source) {
  if (!(kappa > 0.0 && kappa < 0.5)) throw std::invalid_argument("ratio_set: kappa must lie in (0, 1/2)");
  cap = effective_cap(cap);
  RatioSet out;
  out.source = std::move(source);
  out.kappa = kappa;
  const int m = d.scale().m();
  out.threshold = std::pow(2.0, -m * kappa);
  // |d3 - d4| > δ^κ  <=>  |Δ|·δ > δ^κ  <=>  |Δ| > 2^(m(1-κ)) in grid steps.
  const double step_threshold = std::pow(2.0, m * (1.0 - kappa));

  const auto pos = d.positions();
  std::vector<Index> diffs;
  diffs.reserve(pos.size() * pos.size());
  for (Index a : pos)
    for (Index b : pos) diffs.push_back(a - b);
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  std::vector<Index> denominators;
  for (Index v : diffs)
    if (std::abs(static_cast<double>(v)) > step_threshold) denominators.push_back(v);

  if (denominators.empty()) {
    out.diagnostic =
        "no pair d3,d4 with |d3-d4| > delta^kappa; R is empty (the nonempty-R lemma then forces the "
        "K lower bound regime)";
    return out;
  }

  auto finish = [&out] {
    std::sort(out.ratios.begin(), out.ratios.end());
    out.ratios.erase(std::unique(out.ratios.begin(), out.ratios.end()), out.ratios.end());
  };

  const u128 pairs = static_cast<u128>(diffs.size()) * denominators.size();
  if (pairs <= cap) {
    out.ratios.reserve(static_cast<std::size_t>(pairs));
    for (Index den : denominators)
      for (Index num : diffs) out.ratios.emplace_back(num, den);
    out.quadruples_examined = static_cast<std::uint64_t>(pairs);
    finish();
    return out;
  }

  out.truncated = true;
  Xoshiro256 rng(seed);
  const std::uint64_t n = pos.size();
  out.ratios.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(cap, 1u << 24)));
  for (std::uint64_t draw = 0; draw < cap; ++draw) {
    Index d1 = pos[rng.below(n)], d2 = pos[rng.below(n)], d3 = pos[rng.below(n)], d4 = pos[rng.below(n)];
    ++out.quadruples_examined;
    if (std::abs(static_cast<double>(d3 - d4)) <= step_threshold) continue;
    out.ratios.emplace_back(d1 - d2, d3 - d4);
  }
  out.ratios.emplace_back(0);
  out.ratios.emplace_back(1);
  finish();
  return out;
}

}  // namespace sumlab
