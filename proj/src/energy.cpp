#include "sumlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sumlab/parallel.hpp"

namespace sumlab {

std::int64_t energy(const DiscretizedSet& a, const DiscretizedSet& b, Index k) {
  if (a.scale() != b.scale()) throw std::invalid_argument("scale mismatch");
  const int m = a.scale().m();
  if (k < 0 || k > a.scale().steps()) throw std::invalid_argument("energy: c outside [0,1]");

  // Values in units of 2^-2m; the window |Δ| <= δ is |Δv| <= 2^m.
  std::vector<std::int64_t> v;
  v.reserve(a.size() * b.size());
  for (Index i : a.indices())
    for (Index j : b.indices()) v.push_back((i << m) + k * j);
  std::sort(v.begin(), v.end());

  const std::int64_t window = std::int64_t{1} << m;
  std::int64_t close_pairs = 0;  // p < q with v[q] - v[p] <= window
  std::size_t q = 0;
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (q < p) q = p;
    while (q + 1 < v.size() && v[q + 1] - v[p] <= window) ++q;
    close_pairs += static_cast<std::int64_t>(q - p);
  }
  return static_cast<std::int64_t>(v.size()) + 2 * close_pairs;
}

double EnergyReport::normalization() const {
  return std::pow(static_cast<double>(a_size) * static_cast<double>(b_size), 1.5);
}

namespace {

i128 k_squared_numerator(const EnergyReport& r) {
  const i128 ab = static_cast<i128>(r.a_size) * static_cast<i128>(r.b_size);
  const i128 c = static_cast<i128>(r.c_size);
  return checked_mul(checked_mul(checked_mul(ab, ab), ab), c * c);
}

}  // namespace

bool EnergyReport::k_at_least(const Rational& q) const {
  if (q.num() <= 0) return true;
  const i128 t = total;
  return checked_mul(k_squared_numerator(*this), q.den() * q.den()) >= checked_mul(t * t, q.num() * q.num());
}

bool EnergyReport::k_at_most(const Rational& q) const {
  if (q.num() < 0) return false;
  const i128 t = total;
  return checked_mul(k_squared_numerator(*this), q.den() * q.den()) <= checked_mul(t * t, q.num() * q.num());
}

bool EnergyReport::k_within_upper_envelope() const {
  return static_cast<i128>(total) >=
         static_cast<i128>(a_size) * static_cast<i128>(b_size) * static_cast<i128>(c_size);
}

EnergyReport energy_spectrum(const DiscretizedSet& a, const DiscretizedSet& b, const DiscretizedSet& c,
                             const EnergyOptions& options) {
  if (a.empty() || b.empty() || c.empty()) throw std::invalid_argument("energy_spectrum: empty inputs");
  if (a.scale() != b.scale() || a.scale() != c.scale()) throw std::invalid_argument("scale mismatch");

  EnergyReport r;
  r.a_size = a.size();
  r.b_size = b.size();
  r.c_size = c.size();
  r.prefiltered = options.prefilter_low_energy;
  r.per_c.resize(c.size());
  parallel_for(c.size(), options.workers, [&](std::size_t idx) {
    r.per_c[idx] = {c[idx], energy(a, b, c[idx])};
  });
  for (const auto& [k, e] : r.per_c) r.total += e;
  r.K = r.normalization() * static_cast<double>(r.c_size) / static_cast<double>(r.total);

  // Band N with 2^N·total <= E_c·|C| < 2^(N+1)·total, i.e. anchored at the mean.
  std::map<int, std::vector<Index>> bands;
  const i128 total = r.total;
  for (const auto& [k, e] : r.per_c) {
    const i128 scaled = static_cast<i128>(e) * static_cast<i128>(r.c_size);
    int n = 0;
    if (scaled >= total) {
      while (scaled >= (total << (n + 1))) ++n;
    } else {
      // largest n < 0 with total <= scaled·2^-n
      do {
        --n;
      } while ((scaled << -n) < total);
    }
    if (options.prefilter_low_energy && n < 0) continue;
    bands[n].push_back(k);
  }
  std::size_t best = 0;
  for (auto& [n, ks] : bands) {
    r.levels.push_back({n, std::ldexp(1.0, -n), std::move(ks)});
    // ascending band order; strict '>' keeps the lower band on ties
    if (r.levels.back().c_indices.size() > r.levels[best].c_indices.size()) best = r.levels.size() - 1;
  }
  r.largest_level = best;
  return r;
}

double k_statistic(const DiscretizedSet& a, const DiscretizedSet& b, const DiscretizedSet& c,
                   const EnergyOptions& options) {
  return energy_spectrum(a, b, c, options).K;
}

std::size_t pi_c_covering(std::span<const std::pair<Index, Index>> pairs, Index k, Scale scale) {
  const int m = scale.m();
  const Index steps = scale.steps();
  if (k < 0 || k > steps) throw std::invalid_argument("pi_c_covering: c outside [0,1]");
  std::vector<std::int64_t> cells;
  cells.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    if (i < 0 || i > steps || j < 0 || j > steps) throw std::invalid_argument("pi_c_covering: pair off grid");
    cells.push_back(((i << m) + k * j) >> m);
  }
  std::sort(cells.begin(), cells.end());
  return static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
}

}  // namespace sumlab
