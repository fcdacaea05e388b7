#include "sumlab/extract.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "sumlab/parallel.hpp"
#include "sumlab/random.hpp"

namespace sumlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_ratio(double value, double base) {
  if (!(base > 1.0) || !(value > 0.0)) return kNaN;
  return std::log(value) / std::log(base);
}

std::size_t intersection_size(std::span<const Index> x, std::span<const Index> y) {
  std::size_t n = 0;
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

using Bits = std::vector<std::uint64_t>;

std::size_t popcount_and(const std::uint64_t* x, const std::uint64_t* y, std::size_t words) {
  std::size_t n = 0;
  for (std::size_t w = 0; w < words; ++w) n += static_cast<std::size_t>(std::popcount(x[w] & y[w]));
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------

PigeonholeResult cs_pigeonhole(std::size_t family_size, std::int64_t universe_size,
                               const IntersectionFn& intersection, double delta_param) {
  if (universe_size <= 0) throw std::invalid_argument("cs_pigeonhole: empty universe");
  if (family_size == 0) throw std::invalid_argument("cs_pigeonhole: empty family");
  PigeonholeResult out;
  out.universe_size = universe_size;
  out.delta_param = delta_param;
  const double n = static_cast<double>(universe_size);
  out.pair_threshold = delta_param * delta_param * n / 2.0;
  out.guaranteed_pairs = delta_param * delta_param * static_cast<double>(family_size) *
                         static_cast<double>(family_size) / 2.0;

  std::vector<std::int64_t> table(family_size * family_size);
  for (std::size_t s = 0; s < family_size; ++s)
    for (std::size_t t = s; t < family_size; ++t) {
      const std::int64_t v = intersection(s, t);
      table[s * family_size + t] = table[t * family_size + s] = v;
    }
  for (std::size_t s = 0; s < family_size; ++s) {
    const std::int64_t size = table[s * family_size + s];
    if (size < 0 || size > universe_size) throw std::invalid_argument("cs_pigeonhole: member larger than universe");
    out.sum_sizes += size;
  }
  const double density_needed = delta_param * static_cast<double>(family_size) * n;
  if (static_cast<double>(out.sum_sizes) < density_needed * (1.0 - 1e-12))
    throw std::invalid_argument("density hypothesis fails");
  // Relative slack so that δ computed from the same sizes in floating point
  // does not drop pairs sitting exactly on the threshold.
  const double threshold = out.pair_threshold * (1.0 - 1e-12);
  for (std::size_t s = 0; s < family_size; ++s)
    for (std::size_t t = 0; t < family_size; ++t) {
      const std::int64_t v = table[s * family_size + t];
      out.sum_intersections += v;
      if (static_cast<double>(v) >= threshold) out.pairs.emplace_back(s, t);
    }
  out.cs_inequality = checked_mul(out.sum_sizes, out.sum_sizes) <= checked_mul(universe_size, out.sum_intersections);
  if (!out.cs_inequality || static_cast<double>(out.pairs.size()) < out.guaranteed_pairs * (1.0 - 1e-12))
    throw std::logic_error("cs_pigeonhole: certificate violated");
  return out;
}

PigeonholeResult cs_pigeonhole(std::span<const std::vector<std::int64_t>> family, std::int64_t universe_size,
                               double delta_param) {
  for (const auto& member : family) {
    if (!std::is_sorted(member.begin(), member.end()) ||
        std::adjacent_find(member.begin(), member.end()) != member.end())
      throw std::invalid_argument("cs_pigeonhole: members must be sorted and distinct");
    if (!member.empty() && (member.front() < 0 || member.back() >= universe_size))
      throw std::invalid_argument("cs_pigeonhole: member outside universe");
  }
  return cs_pigeonhole(
      family.size(), universe_size,
      [&](std::size_t s, std::size_t t) {
        return static_cast<std::int64_t>(intersection_size(family[s], family[t]));
      },
      delta_param);
}

// ---------------------------------------------------------------------------

BsgResult bsg_extract(const DiscretizedSet& a, const DiscretizedSet& b, Index k, double k_hint) {
  if (a.empty() || b.empty()) throw StageError("bsg", "empty input set");
  if (a.scale() != b.scale()) throw std::invalid_argument("scale mismatch");
  if (!(k_hint > 0.0)) throw std::invalid_argument("bsg: K_hint must be positive");
  const int m = a.scale().m();
  const std::size_t na = a.size(), nb = b.size();

  BsgReport rep;
  rep.k_hint = k_hint;
  rep.a_size = na;
  rep.b_size = nb;
  rep.energy = energy(a, b, k);
  const double required = std::pow(static_cast<double>(na) * static_cast<double>(nb), 1.5) / k_hint;
  if (static_cast<double>(rep.energy) < required * (1.0 - 1e-9))
    throw std::invalid_argument("bsg: energy below (|A||B|)^{3/2}/K_hint");

  // Popular δ-cells of a + cb and the graph of pairs landing in them.
  auto cell = [&](std::size_t ia, std::size_t ib) { return ((a[ia] << m) + k * b[ib]) >> m; };
  std::map<std::int64_t, std::int64_t> multiplicity;
  for (std::size_t ia = 0; ia < na; ++ia)
    for (std::size_t ib = 0; ib < nb; ++ib) ++multiplicity[cell(ia, ib)];
  rep.occupied_cells = multiplicity.size();
  const i128 ab = static_cast<i128>(na) * static_cast<i128>(nb);
  const i128 cells2 = 2 * static_cast<i128>(rep.occupied_cells);
  for (auto it = multiplicity.begin(); it != multiplicity.end();) {
    if (static_cast<i128>(it->second) * cells2 >= ab) {
      ++rep.popular_cells;
      ++it;
    } else {
      it = multiplicity.erase(it);
    }
  }

  const std::size_t words_b = (nb + 63) / 64;
  std::vector<std::uint64_t> rows(na * words_b, 0);  // neighbourhoods over B
  std::vector<std::size_t> degree(na, 0);
  for (std::size_t ia = 0; ia < na; ++ia)
    for (std::size_t ib = 0; ib < nb; ++ib)
      if (multiplicity.contains(cell(ia, ib))) {
        rows[ia * words_b + ib / 64] |= std::uint64_t{1} << (ib % 64);
        ++degree[ia];
        ++rep.edges;
      }
  if (rep.edges == 0) throw StageError("bsg", "no popular edges");

  // A1: degree at least half the average.
  std::vector<std::size_t> a1;
  for (std::size_t ia = 0; ia < na; ++ia)
    if (2 * degree[ia] * na >= rep.edges) a1.push_back(ia);
  const std::size_t n1 = a1.size();

  // Codegrees within A1 and the "good pair" relation codeg >= τ.
  std::vector<std::uint32_t> codeg(n1 * n1);
  double off_diag = 0;
  for (std::size_t p = 0; p < n1; ++p)
    for (std::size_t q = p; q < n1; ++q) {
      const auto v = static_cast<std::uint32_t>(
          popcount_and(&rows[a1[p] * words_b], &rows[a1[q] * words_b], words_b));
      codeg[p * n1 + q] = codeg[q * n1 + p] = v;
      if (p != q) off_diag += 2.0 * v;
    }
  const double tau = n1 > 1 ? off_diag / (static_cast<double>(n1) * static_cast<double>(n1 - 1)) / 2.0 : 0.0;
  const std::size_t words_1 = (n1 + 63) / 64;
  std::vector<std::uint64_t> good(n1 * words_1, 0);
  for (std::size_t p = 0; p < n1; ++p)
    for (std::size_t q = 0; q < n1; ++q)
      if (static_cast<double>(codeg[p * n1 + q]) >= tau) good[p * words_1 + q / 64] |= std::uint64_t{1} << (q % 64);

  // Pivot b*: maximise good minus bad ordered pairs inside N(b) ∩ A1.
  auto neighbourhood = [&](std::size_t ib) {
    Bits x(words_1, 0);
    for (std::size_t p = 0; p < n1; ++p)
      if ((rows[a1[p] * words_b + ib / 64] >> (ib % 64)) & 1U) x[p / 64] |= std::uint64_t{1} << (p % 64);
    return x;
  };
  auto good_within = [&](const Bits& x, std::size_t p) { return popcount_and(&good[p * words_1], x.data(), words_1); };

  std::size_t pivot = 0;
  std::int64_t best_score = std::numeric_limits<std::int64_t>::min();
  for (std::size_t ib = 0; ib < nb; ++ib) {
    const Bits x = neighbourhood(ib);
    std::int64_t size = 0, good_pairs = 0;
    for (std::size_t p = 0; p < n1; ++p)
      if ((x[p / 64] >> (p % 64)) & 1U) {
        ++size;
        good_pairs += static_cast<std::int64_t>(good_within(x, p));
      }
    if (size == 0) continue;
    const std::int64_t score = 2 * good_pairs - size * size;
    if (score > best_score) {
      best_score = score;
      pivot = ib;
    }
  }
  if (best_score == std::numeric_limits<std::int64_t>::min()) throw StageError("bsg", "no vertex of A1 has neighbours");
  rep.pivot = b[pivot];

  const Bits xb = neighbourhood(pivot);
  std::vector<std::size_t> x_members;
  for (std::size_t p = 0; p < n1; ++p)
    if ((xb[p / 64] >> (p % 64)) & 1U) x_members.push_back(p);
  std::vector<Index> a_prime;
  for (std::size_t p : x_members)
    if (2 * good_within(xb, p) >= x_members.size()) a_prime.push_back(a[a1[p]]);
  if (a_prime.empty())
    for (std::size_t p : x_members) a_prime.push_back(a[a1[p]]);

  // B': b adjacent to at least half of A'.  The pivot always qualifies.
  std::vector<std::size_t> a_prime_pos;
  for (Index v : a_prime) a_prime_pos.push_back(static_cast<std::size_t>(
      std::lower_bound(a.indices().begin(), a.indices().end(), v) - a.indices().begin()));
  std::vector<Index> b_prime;
  for (std::size_t ib = 0; ib < nb; ++ib) {
    std::size_t hits = 0;
    for (std::size_t ia : a_prime_pos) hits += (rows[ia * words_b + ib / 64] >> (ib % 64)) & 1U;
    if (2 * hits >= a_prime_pos.size()) b_prime.push_back(b[ib]);
  }
  if (b_prime.empty()) throw StageError("bsg", "B' is empty");

  BsgResult out{DiscretizedSet(a.scale(), std::move(a_prime)), DiscretizedSet(b.scale(), std::move(b_prime)), rep};
  BsgReport& r = out.report;
  r.a_prime_size = out.a_prime.size();
  r.b_prime_size = out.b_prime.size();
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(r.a_prime_size * r.b_prime_size);
  for (Index i : out.a_prime.indices())
    for (Index j : out.b_prime.indices()) pairs.emplace_back(i, j);
  r.sumset_cover = pi_c_covering(pairs, k, a.scale());
  r.a_fraction = static_cast<double>(r.a_prime_size) / static_cast<double>(na);
  r.b_fraction = static_cast<double>(r.b_prime_size) / static_cast<double>(nb);
  r.sumset_ratio = static_cast<double>(r.sumset_cover) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  r.a_exponent = -log_ratio(r.a_fraction, k_hint);
  r.b_exponent = -log_ratio(r.b_fraction, k_hint);
  r.sumset_exponent = log_ratio(r.sumset_ratio, k_hint);
  return out;
}

// ---------------------------------------------------------------------------

StructuralVerification measure_decomposition(const DiscretizedSet& b, const DiscretizedSet& c,
                                             const DiscretizedSet& b_prime, const DiscretizedSet& c_prime,
                                             Index c_star, double rho, double K, double m1, double m2) {
  if (b_prime.empty() || c_prime.empty()) throw std::invalid_argument("measure_decomposition: empty B' or C'");
  const int m = b.scale().m();
  StructuralVerification v;
  v.m1 = m1;
  v.m2 = m2;
  v.b_prime_size = b_prime.size();
  v.b_size = b.size();
  v.c_prime_size = c_prime.size();
  v.c_size = c.size();
  v.sum_cover = covering_number(sumset(b_prime, b_prime, Sign::Plus), m);
  v.diff_cover = covering_number(sumset(b_prime, b_prime, Sign::Minus), m);

  std::vector<std::int64_t> cells;
  cells.reserve(b_prime.size() * b_prime.size());
  v.dilate_argmax = c_prime[0];
  for (Index k : c_prime.indices()) {
    cells.clear();
    for (Index i : b_prime.indices())
      for (Index j : b_prime.indices()) cells.push_back((c_star * i + k * j) >> m);
    std::sort(cells.begin(), cells.end());
    const auto n = static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
    if (n > v.dilate_cover_max) {
      v.dilate_cover_max = n;
      v.dilate_argmax = k;
    }
  }

  const double nb = static_cast<double>(v.b_prime_size);
  v.sum_ratio = static_cast<double>(v.sum_cover) / nb;
  v.diff_ratio = static_cast<double>(v.diff_cover) / nb;
  v.dilate_ratio = static_cast<double>(v.dilate_cover_max) / nb;
  v.b_fraction = nb / static_cast<double>(v.b_size);
  v.c_fraction = static_cast<double>(v.c_prime_size) / static_cast<double>(v.c_size);
  v.rho_k = rho * K;
  v.log_inv_delta = m * std::log(2.0);
  v.sum_exponent = log_ratio(std::max(v.sum_ratio, v.diff_ratio), v.rho_k);
  v.dilate_exponent = log_ratio(v.dilate_ratio, v.rho_k);
  v.b_exponent = log_ratio(v.b_fraction, v.rho_k);
  v.c_exponent = log_ratio(v.c_fraction * v.log_inv_delta / rho, v.rho_k);
  return v;
}

StructuralDecomposition structural_extract(const DiscretizedSet& a, const DiscretizedSet& b,
                                           const DiscretizedSet& c, const StructuralOptions& options) {
  if (a.empty()) throw StageError("input", "A is empty");
  if (b.empty()) throw StageError("input", "B is empty");
  if (c.empty()) throw StageError("input", "C is empty");

  const EnergyReport spectrum = energy_spectrum(a, b, c, {options.workers, options.prefilter_low_energy});
  if (spectrum.levels.empty()) throw StageError("energy", "no level set survives the prefilter");
  const LevelSet& level = spectrum.largest();

  StructuralDecomposition out;
  out.band = level.band;
  out.rho = level.rho;
  out.K = spectrum.K;
  out.level_set = level.c_indices;
  const double k_hint = out.rho * out.K;

  // Band membership gives E_c >= 2^N·total/|C| = (|A||B|)^{3/2}/(ρK) exactly.
  std::vector<std::optional<BsgResult>> pieces(out.level_set.size());
  parallel_for(out.level_set.size(), options.workers,
               [&](std::size_t i) { pieces[i] = bsg_extract(a, b, out.level_set[i], k_hint); });

  const std::size_t n = pieces.size();
  const std::int64_t universe = static_cast<std::int64_t>(a.size()) * static_cast<std::int64_t>(b.size());
  i128 total = 0;
  for (const auto& p : pieces)
    total += static_cast<i128>(p->a_prime.size()) * static_cast<i128>(p->b_prime.size());
  const double delta = static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(universe));
  const PigeonholeResult ph = cs_pigeonhole(
      n, universe,
      [&](std::size_t s, std::size_t t) {
        return static_cast<std::int64_t>(intersection_size(pieces[s]->a_prime.indices(), pieces[t]->a_prime.indices()) *
                                         intersection_size(pieces[s]->b_prime.indices(), pieces[t]->b_prime.indices()));
      },
      delta);
  if (ph.pairs.empty()) throw StageError("pigeonhole", "no pair reaches the intersection threshold");
  out.pigeonhole_pairs = ph.pairs.size();
  out.pigeonhole_delta = delta;

  std::vector<std::size_t> partners(n, 0);
  for (const auto& [s, t] : ph.pairs) ++partners[s];
  const std::size_t star = static_cast<std::size_t>(std::max_element(partners.begin(), partners.end()) - partners.begin());
  out.c_star = out.level_set[star];
  std::vector<Index> c_prime;
  for (const auto& [s, t] : ph.pairs)
    if (s == star) c_prime.push_back(out.level_set[t]);
  if (c_prime.empty()) throw StageError("pigeonhole", "C' is empty");
  out.c_prime = DiscretizedSet::from_unsorted(c.scale(), std::move(c_prime));
  out.b_prime = pieces[star]->b_prime;
  out.a_prime = pieces[star]->a_prime;
  out.verification =
      measure_decomposition(b, c, out.b_prime, out.c_prime, out.c_star, out.rho, out.K, options.m1, options.m2);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class TripleScanner {
public:
  TripleScanner(const DiscretizedSet& x, const DiscretizedSet& y)
      : x_(x), y_(y), m_(x.scale().m()), steps_(x.scale().steps()), member_(static_cast<std::size_t>(steps_) + 1, 0) {
    for (Index i : x.indices()) member_[static_cast<std::size_t>(i)] = 1;
  }

  // Per y: lowest candidate u (in δ units) and which of u, u+1 lie within δ/2.
  void prepare(Index diff) {
    cand_.clear();
    const std::int64_t unit = std::int64_t{1} << m_;
    const std::int64_t half = unit >> 1;
    for (Index k : y_.indices()) {
      const std::int64_t t = diff * k;
      const std::int64_t lo = static_cast<std::int64_t>(floor_div(t, unit));
      const std::int64_t rem = t - lo * unit;
      cand_.push_back({lo, rem <= half, unit - rem <= half});
    }
  }

  // Representatives for x1 (monotone in y, so adjacent duplicates only).
  template <class Out>
  void representatives(Index i1, Out&& emit) const {
    bool have = false;
    std::int64_t last = 0;
    for (const auto& cd : cand_) {
      std::int64_t rep;
      if (cd.low_ok && is_member(i1 + cd.low)) {
        rep = cd.low;
      } else if (cd.high_ok && is_member(i1 + cd.low + 1)) {
        rep = cd.low + 1;
      } else {
        continue;
      }
      if (!have || rep != last) emit(rep);
      have = true;
      last = rep;
    }
  }

  std::size_t count(Index i1) const {
    std::size_t n = 0;
    representatives(i1, [&n](std::int64_t) { ++n; });
    return n;
  }

private:
  struct Candidate {
    std::int64_t low;
    bool low_ok, high_ok;
  };

  bool is_member(std::int64_t i) const { return i >= 0 && i <= steps_ && member_[static_cast<std::size_t>(i)]; }

  const DiscretizedSet& x_;
  const DiscretizedSet& y_;
  int m_;
  Index steps_;
  std::vector<char> member_;
  std::vector<Candidate> cand_;
};

std::size_t max_dilated_sumset(const DiscretizedSet& x, const DiscretizedSet& y) {
  const int m = x.scale().m();
  std::size_t best = 0;
  std::vector<std::int64_t> v;
  v.reserve(x.size() * x.size());
  for (Index k : y.indices()) {
    v.clear();
    for (Index i : x.indices())
      for (Index j : x.indices()) v.push_back((i << m) + k * j);
    std::sort(v.begin(), v.end());
    best = std::max(best, static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin()));
  }
  return best;
}

}  // namespace

GridSet bourgain_intersection(const DiscretizedSet& x, const DiscretizedSet& y, Index x1, Index x2, Index x3) {
  if (x.scale() != y.scale()) throw std::invalid_argument("scale mismatch");
  TripleScanner scan(x, y);
  scan.prepare(x2 - x3);
  std::vector<Index> reps;
  scan.representatives(x1, [&reps](std::int64_t u) { reps.push_back(u); });
  if (reps.empty()) return GridSet(x.scale(), 0, {});
  return GridSet::from_positions(x.scale(), std::move(reps));
}

TripleSearchResult bourgain_triple_search(const DiscretizedSet& x, const DiscretizedSet& y, std::uint64_t cap,
                                          std::uint64_t seed) {
  if (x.scale() != y.scale()) throw std::invalid_argument("scale mismatch");
  TripleSearchResult out;
  out.d = GridSet(x.scale(), 0, {});
  if (x.size() < 2) throw std::invalid_argument("bourgain_triple_search: need |X| >= 2");
  if (y.empty()) throw std::invalid_argument("bourgain_triple_search: Y is empty");
  cap = effective_cap(cap);
  out.m_value = max_dilated_sumset(x, y);

  TripleScanner scan(x, y);
  const std::size_t n = x.size();
  std::size_t best = 0;
  std::size_t b1 = n, b2 = n, b3 = n;  // positions; n means "none yet"
  auto consider = [&](std::size_t p1, std::size_t p2, std::size_t p3, std::size_t count) {
    if (b1 == n || count > best || (count == best && std::tie(p1, p2, p3) < std::tie(b1, b2, b3))) {
      best = count;
      b1 = p1;
      b2 = p2;
      b3 = p3;
    }
  };

  const double work = std::pow(static_cast<double>(n), 3) * static_cast<double>(y.size());
  if (work <= static_cast<double>(cap)) {
    // One scan per distinct difference; its first (x2, x3) in lexicographic order represents it.
    std::map<Index, std::pair<std::size_t, std::size_t>> first_pair;
    for (std::size_t p2 = 0; p2 < n; ++p2)
      for (std::size_t p3 = 0; p3 < n; ++p3)
        if (p2 != p3) first_pair.try_emplace(x[p2] - x[p3], p2, p3);
    for (const auto& [diff, pr] : first_pair) {
      scan.prepare(diff);
      for (std::size_t p1 = 0; p1 < n; ++p1) {
        consider(p1, pr.first, pr.second, scan.count(x[p1]));
        ++out.triples_examined;
      }
    }
  } else {
    out.truncated = true;
    Xoshiro256 rng(seed);
    const std::uint64_t draws = std::max<std::uint64_t>(1, cap / y.size());
    for (std::uint64_t d = 0; d < draws; ++d) {
      const std::size_t p1 = rng.below(n), p2 = rng.below(n);
      std::size_t p3 = rng.below(n - 1);
      if (p3 >= p2) ++p3;
      scan.prepare(x[p2] - x[p3]);
      consider(p1, p2, p3, scan.count(x[p1]));
      ++out.triples_examined;
    }
  }

  out.x1 = x[b1];
  out.x2 = x[b2];
  out.x3 = x[b3];
  out.d = bourgain_intersection(x, y, out.x1, out.x2, out.x3);
  out.ratio = static_cast<double>(out.d.size()) * static_cast<double>(out.m_value) /
              (static_cast<double>(x.size()) * static_cast<double>(y.size()));
  if (out.d.empty()) out.diagnostic = "every triple gives an empty intersection";
  return out;
}

BuildDResult build_D(const DiscretizedSet& b_prime, const DiscretizedSet& c_prime, std::uint64_t cap,
                     std::uint64_t seed) {
  if (b_prime.size() < 2) throw std::invalid_argument("build_D: need |B'| >= 2");
  if (c_prime.empty()) throw std::invalid_argument("build_D: C' is empty");
  BuildDResult out;
  out.search = bourgain_triple_search(b_prime, c_prime, cap, seed);
  out.b1 = out.search.x1;
  out.b2 = out.search.x2;
  out.b3 = out.search.x3;
  out.d = out.search.d;
  return out;
}

// ---------------------------------------------------------------------------

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Gap: return "GAP";
    case Branch::Dense: return "DENSE";
    case Branch::Neither: return "NEITHER";
  }
  return "?";
}

namespace {

Rational distance_to_set(const std::vector<Rational>& sorted, const Rational& p) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), p);
  Rational best = -1;
  if (it != sorted.end()) best = *it - p;
  if (it != sorted.begin()) {
    const Rational d = p - *std::prev(it);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

}  // namespace

DenseGapReport dense_gap_analyze(const GridSet& d_tilde, double kappa, const Rational& b2_minus_b3, double threshold,
                                 std::uint64_t cap, std::uint64_t seed) {
  if (b2_minus_b3 == Rational(0)) throw std::invalid_argument("dense_gap_analyze: b2 - b3 must be nonzero");
  DenseGapReport out;
  out.kappa = kappa;
  out.threshold = threshold;
  out.b2_minus_b3 = b2_minus_b3;
  out.ratios = ratio_set(d_tilde, kappa, cap, seed, "D");

  const int m = d_tilde.scale().m();
  const double log2_s = -m * (1.0 - 2.0 * kappa) + std::log2(std::fabs(b2_minus_b3.to_double()));
  out.s_level = std::max(0, -static_cast<int>(std::floor(log2_s + 1e-9)));
  out.s = std::ldexp(1.0, -out.s_level);

  if (out.ratios.ratios.empty()) {
    out.diagnostic = out.ratios.diagnostic;
    return out;
  }
  for (const auto& r : out.ratios.ratios)
    if (r >= Rational(0) && r <= Rational(1)) out.unit_ratios.push_back(r);

  const Rational s = Rational::dyadic(1, out.s_level);
  const auto& all = out.ratios.ratios;
  // Largest r first: r = 1 with r/2 is the canonical witness when it exists.
  for (auto it = out.unit_ratios.rbegin(); it != out.unit_ratios.rend(); ++it) {
    const Rational& r = *it;
    for (bool plus_one : {false, true}) {
      const Rational point = plus_one ? (r + Rational(1)) / Rational(2) : r / Rational(2);
      const Rational dist = distance_to_set(all, point);
      if (dist >= s) {
        GapWitness w;
        w.r = r;
        w.uses_r_plus_one = plus_one;
        w.point = point;
        w.distance = dist;
        w.e1 = plus_one ? Rational(r.num() + r.den()) : Rational(r.num());
        w.e2 = Rational(2 * r.den());
        out.witness = w;
        break;
      }
    }
    if (out.witness) break;
  }

  out.density = covering_number(std::span<const Rational>(out.unit_ratios), out.s_level);
  if (out.witness) {
    out.branch = Branch::Gap;
  } else if (static_cast<double>(out.density) >= threshold * std::ldexp(1.0, out.s_level)) {
    out.branch = Branch::Dense;
  } else {
    out.branch = Branch::Neither;
  }
  return out;
}

bool recheck_gap_witness(const DenseGapReport& report) {
  if (!report.witness) return false;
  const GapWitness& w = *report.witness;
  const Rational expected = w.uses_r_plus_one ? (w.r + Rational(1)) / Rational(2) : w.r / Rational(2);
  if (!(expected == w.point) || !(w.e1 / w.e2 == w.point)) return false;
  if (!report.ratios.contains(w.r) || w.r < Rational(0) || w.r > Rational(1)) return false;
  const Rational s = Rational::dyadic(1, report.s_level);
  for (const auto& r : report.ratios.ratios)
    if (abs(w.point - r) < s) return false;
  return true;
}

// ---------------------------------------------------------------------------

PipelineTrace run_pipeline(const DiscretizedSet& a, const DiscretizedSet& b, const DiscretizedSet& c,
                           const PipelineOptions& options) {
  PipelineTrace out;
  out.decomposition = structural_extract(a, b, c, options.structural);
  out.d = build_D(out.decomposition.b_prime, out.decomposition.c_prime, options.triple_cap, options.seed);
  if (out.d.d.empty()) {
    out.diagnostic = "build_D: " + (out.d.search.diagnostic.empty() ? std::string("D is empty") : out.d.search.diagnostic);
    return out;
  }
  const Rational gap = Rational::dyadic(out.d.b2 - out.d.b3, a.scale().m());
  out.dichotomy = dense_gap_analyze(out.d.d, options.kappa, gap, options.dense_threshold, options.quadruple_cap,
                                    options.seed);
  if (!out.dichotomy->diagnostic.empty()) out.diagnostic = "dense_gap: " + out.dichotomy->diagnostic;
  return out;
}

}  // namespace sumlab
