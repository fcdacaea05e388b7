#include "sumlab/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "sumlab/random.hpp"

namespace sumlab {

namespace {

constexpr double kFrostmanCertificateCap = 8.0;

std::vector<CantorLevel> cantor_levels(const FamilySpec& spec) {
  if (!spec.levels.empty()) return spec.levels;
  if (spec.depth < 0) throw std::invalid_argument("cantor: negative depth");
  return std::vector<CantorLevel>(static_cast<std::size_t>(spec.depth), CantorLevel{spec.base, spec.digits});
}

int level_bits(const CantorLevel& level) {
  if (level.base < 2 || !std::has_single_bit(static_cast<unsigned>(level.base)))
    throw std::invalid_argument("cantor: base must be a power of two");
  if (level.digits.empty()) throw std::invalid_argument("cantor: empty digit set");
  std::vector<int> d = level.digits;
  std::sort(d.begin(), d.end());
  if (std::adjacent_find(d.begin(), d.end()) != d.end()) throw std::invalid_argument("cantor: repeated digit");
  if (d.front() < 0 || d.back() >= level.base) throw std::invalid_argument("cantor: digit outside [0, base)");
  return std::countr_zero(static_cast<unsigned>(level.base));
}

std::vector<Index> cantor_indices(const FamilySpec& spec, int m) {
  const auto levels = cantor_levels(spec);
  int bits = 0;
  for (const auto& l : levels) bits += level_bits(l);
  if (bits > m) throw std::invalid_argument("cantor: depth exceeds the grid (off-grid parameters)");
  std::vector<Index> out{0};
  int used = 0;
  for (const auto& l : levels) {
    used += level_bits(l);
    std::vector<Index> next;
    next.reserve(out.size() * l.digits.size());
    for (Index v : out)
      for (int d : l.digits) next.push_back(v + (static_cast<Index>(d) << (m - used)));
    out = std::move(next);
  }
  return out;
}

std::vector<Index> random_frostman_indices(double sigma, int m, std::uint64_t seed) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("random_frostman: sigma must lie in (0, 1]");
  struct Cell {
    Index idx;
    int splits;
  };
  Xoshiro256 rng(seed);
  std::vector<Cell> cells{{0, 0}};
  for (int level = 1; level <= m; ++level) {
    const auto want = static_cast<std::size_t>(std::ceil(std::exp2(sigma * level) - 1e-9));
    const std::size_t target = std::clamp(want, cells.size(), 2 * cells.size());
    const std::size_t splits = target - cells.size();

    // Split the cells with the fewest splits on their root path; random tie-break.
    std::vector<std::pair<std::uint64_t, std::size_t>> order;
    order.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) order.emplace_back(rng(), i);
    std::sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
      const int sx = cells[x.second].splits, sy = cells[y.second].splits;
      return sx != sy ? sx < sy : x < y;
    });
    std::vector<char> split(cells.size(), 0);
    for (std::size_t r = 0; r < splits; ++r) split[order[r].second] = 1;

    std::vector<Cell> next;
    next.reserve(target);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Cell& c = cells[i];
      if (split[i]) {
        next.push_back({2 * c.idx, c.splits + 1});
        next.push_back({2 * c.idx + 1, c.splits + 1});
      } else {
        next.push_back({2 * c.idx + static_cast<Index>(rng.below(2)), c.splits});
      }
    }
    std::sort(next.begin(), next.end(), [](const Cell& x, const Cell& y) { return x.idx < y.idx; });
    cells = std::move(next);
  }
  std::vector<Index> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c.idx);
  return out;
}

std::uint64_t retry_seed(std::uint64_t seed, int attempt) {
  return seed ^ (static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL);
}

std::vector<Index> indices_for(const FamilySpec& spec, int m, int attempt) {
  const Index steps = Index{1} << m;
  switch (spec.kind) {
    case FamilyKind::AP: {
      if (spec.length < 1 || spec.step < 1) throw std::invalid_argument("ap: need length >= 1 and step >= 1");
      const Index last = spec.start + (spec.length - 1) * spec.step;
      if (spec.start < 0 || last > steps) throw std::invalid_argument("ap: progression leaves [0, 1] (off-grid parameters)");
      std::vector<Index> out;
      for (Index i = 0; i < spec.length; ++i) out.push_back(spec.start + i * spec.step);
      return out;
    }
    case FamilyKind::Cantor:
      return cantor_indices(spec, m);
    case FamilyKind::RandomFrostman:
      return random_frostman_indices(spec.sigma, m, retry_seed(spec.seed, attempt));
    case FamilyKind::FullGrid: {
      if (spec.step < 1) throw std::invalid_argument("full_grid: step must be positive");
      std::vector<Index> out;
      for (Index i = 0; i <= steps; i += spec.step) out.push_back(i);
      return out;
    }
    case FamilyKind::PaperExtremal: {
      const ExtremalTriple t = paper_extremal(spec.n, m);
      const DiscretizedSet& s = spec.part == ExtremalPart::A ? t.a : spec.part == ExtremalPart::B ? t.b : t.c;
      return {s.indices().begin(), s.indices().end()};
    }
    case FamilyKind::Union: {
      if (spec.parts.empty()) throw std::invalid_argument("union: no parts");
      std::vector<Index> out;
      for (const auto& p : spec.parts) {
        if (p.m != spec.m) throw std::invalid_argument("union: parts must share the scale");
        const DiscretizedSet s = generate(p);
        out.insert(out.end(), s.indices().begin(), s.indices().end());
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown family kind");
}

DiscretizedSet generate_attempt(const FamilySpec& spec, int attempt) {
  const Scale scale(spec.m);
  if (!spec.upper_half) return DiscretizedSet::from_unsorted(scale, indices_for(spec, spec.m, attempt));
  if (spec.kind == FamilyKind::Union) throw std::invalid_argument("union: upper_half applies to the parts");
  const Index half = scale.steps() / 2;
  if (spec.kind == FamilyKind::PaperExtremal) {
    // The family already lives on this grid; keep its part inside [1/2, 1].
    std::vector<Index> out;
    for (Index i : indices_for(spec, spec.m, attempt))
      if (i >= half) out.push_back(i);
    return DiscretizedSet::from_unsorted(scale, std::move(out));
  }
  if (spec.m < 2) throw std::invalid_argument("upper_half needs m >= 2");
  std::vector<Index> out = indices_for(spec, spec.m - 1, attempt);
  for (Index& i : out) i += half;
  return DiscretizedSet::from_unsorted(scale, std::move(out));
}

}  // namespace

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::AP: return "AP";
    case FamilyKind::Cantor: return "CANTOR";
    case FamilyKind::RandomFrostman: return "RANDOM_FROSTMAN";
    case FamilyKind::PaperExtremal: return "PAPER_EXTREMAL";
    case FamilyKind::FullGrid: return "FULL_GRID";
    case FamilyKind::Union: return "UNION";
  }
  return "?";
}

FamilyKind family_kind_from_string(const std::string& s) {
  for (FamilyKind k : {FamilyKind::AP, FamilyKind::Cantor, FamilyKind::RandomFrostman, FamilyKind::PaperExtremal,
                       FamilyKind::FullGrid, FamilyKind::Union})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown family kind '" + s + "'");
}

ExtremalTriple paper_extremal(std::uint64_t n, int m) {
  if (n < 16 || !std::has_single_bit(n) || std::countr_zero(n) % 4 != 0)
    throw std::invalid_argument("paper_extremal: n must be 2^(4k) with k >= 1");
  const int k = std::countr_zero(n) / 4;
  if (2 * k > m) throw std::invalid_argument("paper_extremal: 1/sqrt(n) is finer than the grid (off-grid parameters)");
  const Scale scale(m);
  std::vector<Index> a, b;
  for (Index i = 1; i <= (Index{1} << (2 * k)); ++i) a.push_back(i << (m - 2 * k));
  for (Index i = 1; i <= (Index{1} << k); ++i) b.push_back(i << (m - k));
  return {DiscretizedSet(scale, std::move(a)), DiscretizedSet(scale, b), DiscretizedSet(scale, b)};
}

DiscretizedSet generate(const FamilySpec& spec) { return generate_certified(spec).set; }

double nominal_dimension(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::Cantor: {
      double num = 0, den = 0;
      for (const auto& l : cantor_levels(spec)) {
        num += std::log(static_cast<double>(l.digits.size()));
        den += std::log(static_cast<double>(l.base));
      }
      return den > 0 ? num / den : 0.0;
    }
    case FamilyKind::RandomFrostman:
      return spec.sigma;
    case FamilyKind::Union: {
      double d = 0;
      for (const auto& p : spec.parts) d = std::max(d, nominal_dimension(p));
      return d;
    }
    default:
      return 1.0;
  }
}

GeneratedSet generate_certified(const FamilySpec& spec) {
  const double sigma = nominal_dimension(spec);
  if (spec.kind != FamilyKind::RandomFrostman) {
    DiscretizedSet s = generate_attempt(spec, 0);
    FrostmanProfile cert = frostman_profile(s, sigma);
    return {std::move(s), std::move(cert), 0};
  }
  for (int attempt = 0; attempt <= spec.max_retries; ++attempt) {
    DiscretizedSet s = generate_attempt(spec, attempt);
    FrostmanProfile cert = frostman_profile(s, sigma);
    if (cert.max_ratio <= kFrostmanCertificateCap) return {std::move(s), std::move(cert), attempt};
  }
  throw std::runtime_error("random_frostman: no certified set within the retry budget");
}

// ---------------------------------------------------------------------------

namespace {

FamilySpec ap(int m, Index start, Index step, Index length, bool upper = false) {
  FamilySpec s;
  s.kind = FamilyKind::AP;
  s.m = m;
  s.start = start;
  s.step = step;
  s.length = length;
  s.upper_half = upper;
  return s;
}

FamilySpec cantor(int m, int base, std::vector<int> digits, int depth, bool upper = false) {
  FamilySpec s;
  s.kind = FamilyKind::Cantor;
  s.m = m;
  s.base = base;
  s.digits = std::move(digits);
  s.depth = depth;
  s.upper_half = upper;
  return s;
}

FamilySpec random_set(int m, double sigma, std::uint64_t seed, bool upper = false) {
  FamilySpec s;
  s.kind = FamilyKind::RandomFrostman;
  s.m = m;
  s.sigma = sigma;
  s.seed = seed;
  s.upper_half = upper;
  return s;
}

FamilySpec extremal(int m, std::uint64_t n, ExtremalPart part, bool upper = false) {
  FamilySpec s;
  s.kind = FamilyKind::PaperExtremal;
  s.m = m;
  s.n = n;
  s.part = part;
  s.upper_half = upper;
  return s;
}

CorpusSet build(const std::string& role, const FamilySpec& spec) {
  GeneratedSet g = generate_certified(spec);
  return {role, spec, std::move(g.set), std::move(g.certificate), g.retries};
}

}  // namespace

std::vector<CorpusEntry> corpus(std::uint64_t seed) {
  // Sub-seeds are fixed offsets of the corpus seed, one per random set.
  std::uint64_t next = 0;
  auto sub = [&] { return seed * 1000003ULL + (++next); };

  struct Plan {
    std::string name;
    int m;
    FamilySpec a, b, c;
  };
  std::vector<Plan> plans;
  const std::vector<int> d05{0, 3}, d079{0, 1, 3}, d0646{0, 3, 5, 10, 12, 15}, d075{0, 2, 5, 7, 8, 10, 13, 15};

  // m = 8
  plans.push_back({"ap_ap_m8", 8, ap(8, 0, 1, 32), ap(8, 0, 1, 32), ap(8, 0, 16, 8, true)});
  plans.push_back({"cantor0.5_m8", 8, cantor(8, 4, d05, 4), cantor(8, 4, d05, 4), cantor(8, 4, d05, 3, true)});
  plans.push_back({"cantor0.79_m8", 8, cantor(8, 4, d079, 4), cantor(8, 4, d079, 4), cantor(8, 4, d079, 3, true)});
  for (double s : {0.4, 0.6, 0.8}) {
    const std::string tag = s == 0.4 ? "0.4" : s == 0.6 ? "0.6" : "0.8";
    const auto sa = sub(), sb = sub(), sc = sub();
    plans.push_back({"random" + tag + "_m8", 8, random_set(8, s, sa), random_set(8, s, sb), random_set(8, s, sc, true)});
  }
  {
    const auto sc = sub();
    plans.push_back({"mixed_m8", 8, ap(8, 0, 2, 64), cantor(8, 4, d079, 4), random_set(8, 0.6, sc, true)});
  }
  plans.push_back({"extremal_n16_m8", 8, extremal(8, 1u << 16, ExtremalPart::A), extremal(8, 1u << 16, ExtremalPart::B),
                   extremal(8, 1u << 16, ExtremalPart::C, true)});

  // m = 10
  plans.push_back({"ap_ap_m10", 10, ap(10, 0, 2, 64), ap(10, 0, 2, 64), ap(10, 0, 32, 16, true)});
  plans.push_back({"cantor0.5_m10", 10, cantor(10, 4, d05, 5), cantor(10, 4, d05, 5), cantor(10, 4, d05, 4, true)});
  plans.push_back({"cantor0.65_m10", 10, cantor(10, 16, d0646, 2), cantor(10, 16, d0646, 2),
                   cantor(10, 16, d0646, 2, true)});
  plans.push_back({"cantor0.79_m10", 10, cantor(10, 4, d079, 4), cantor(10, 4, d079, 4), cantor(10, 4, d079, 3, true)});
  for (double s : {0.4, 0.6, 0.8}) {
    const std::string tag = s == 0.4 ? "0.4" : s == 0.6 ? "0.6" : "0.8";
    const auto sa = sub(), sb = sub(), sc = sub();
    // Keep |A||B|²|C| moderate for the incidence cross-check.
    const FamilySpec c = s == 0.8 ? ap(10, 0, 64, 8, true) : random_set(10, s, sc, true);
    plans.push_back({"random" + tag + "_m10", 10, random_set(10, s, sa), random_set(10, s, sb), c});
  }
  {
    const auto sa = sub();
    plans.push_back({"mixed_m10", 10, random_set(10, 0.6, sa), cantor(10, 4, d05, 5), cantor(10, 4, d079, 3, true)});
  }
  plans.push_back({"extremal_n20_m10", 10, extremal(10, 1u << 20, ExtremalPart::A),
                   extremal(10, 1u << 20, ExtremalPart::B), extremal(10, 1u << 20, ExtremalPart::C, true)});

  // m = 12
  plans.push_back({"cantor0.5_m12", 12, cantor(12, 4, d05, 6), cantor(12, 4, d05, 6), cantor(12, 4, d05, 5, true)});
  {
    const auto sa = sub(), sb = sub();
    plans.push_back({"random0.6_m12", 12, random_set(12, 0.6, sa), random_set(12, 0.6, sb), ap(12, 0, 128, 16, true)});
  }
  {
    const auto sc = sub();
    plans.push_back({"cantor0.75_m12", 12, cantor(12, 16, d075, 2), cantor(12, 16, d075, 2),
                     random_set(12, 0.4, sc, true)});
  }

  std::vector<CorpusEntry> out;
  out.reserve(plans.size());
  for (const auto& p : plans) out.push_back({p.name, p.m, build("A", p.a), build("B", p.b), build("C", p.c)});
  return out;
}

}  // namespace sumlab
