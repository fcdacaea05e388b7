#include "sumlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>

#include "sumlab/arith.hpp"
#include "sumlab/bounds.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/extract.hpp"
#include "sumlab/incidence.hpp"
#include "sumlab/parallel.hpp"
#include "sumlab/random.hpp"

namespace sumlab::cli {

namespace {

// ---------------------------------------------------------------- config

std::string config_scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

Json load_json_file(const std::string& path, const std::string& flag) {
  std::ifstream in(path);
  if (!in) throw UsageError(flag, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(flag, std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- inputs

DiscretizedSet load_set(const std::string& path, const std::string& flag) {
  try {
    return read_set_file(path);
  } catch (const std::exception& e) {
    throw UsageError(flag, e.what());
  }
}

void require_same_scale(std::initializer_list<std::pair<const char*, const DiscretizedSet*>> sets) {
  const auto first = sets.begin();
  for (const auto& [flag, s] : sets)
    if (s->scale() != first->second->scale())
      throw UsageError(flag, "scale m=" + std::to_string(s->scale().m()) + " differs from " + first->first +
                                 " (m=" + std::to_string(first->second->scale().m()) + ")");
}

Tolerance parse_tolerance(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::nullopt;
  try {
    Rational t = Rational::parse(text);
    if (t < Rational(0)) throw UsageError("--tolerance", "must be nonnegative");
    return t;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("--tolerance", e.what());
  }
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

// Point file: one "x y" per line, exact rationals; '#' starts a comment.
std::vector<Point> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--points", "cannot open '" + path + "'");
  std::vector<Point> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    line = line.substr(0, line.find('#'));
    auto t = tokens_of(line);
    if (t.empty()) continue;
    if (t.size() != 2) throw UsageError("--points", "line " + std::to_string(lineno) + ": expected 'x y'");
    out.push_back({Rational::parse(t[0]), Rational::parse(t[1])});
  }
  return out;
}

// Line file: "c d" for y = c·x + d, or "x r c" for x = r - c·y.
std::vector<GridLine> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--lines", "cannot open '" + path + "'");
  std::vector<GridLine> out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    line = line.substr(0, line.find('#'));
    auto t = tokens_of(line);
    if (t.empty()) continue;
    if (t.size() == 2) {
      out.push_back(GridLine::y_of_x(Rational::parse(t[0]), Rational::parse(t[1])));
    } else if (t.size() == 3 && t[0] == "x") {
      out.push_back(GridLine::x_of_y(Rational::parse(t[1]), Rational::parse(t[2])));
    } else {
      throw UsageError("--lines", "line " + std::to_string(lineno) + ": expected 'c d' or 'x r c'");
    }
  }
  return out;
}

// Names the bounds flag an error message is about; "--alpha" when unclear.
std::string param_flag(const std::string& message) {
  for (const char* name : {"alpha", "beta", "gamma", "eta", "kappa", "epsilon", "m1", "m2"})
    if (std::regex_search(message, std::regex(std::string("\\b") + name + "\\b"))) return std::string("--") + name;
  return "--alpha";
}

// ---------------------------------------------------------------- verify

struct Check {
  std::string module;
  std::string invariant;
  bool pass = true;
  Json detail;
};

struct EntryResult {
  Json summary;
  std::vector<Check> checks;
  std::vector<Json> findings;
};

Json reproducer(std::uint64_t seed, const CorpusEntry& e) {
  return {{"corpus_seed", seed},
          {"entry", e.name},
          {"A", to_json(e.a.spec)},
          {"B", to_json(e.b.spec)},
          {"C", to_json(e.c.spec)}};
}

// Energy by direct pair comparison of the integer values a·2^m + k·b.
std::int64_t brute_energy(const DiscretizedSet& a, const DiscretizedSet& b, Index k) {
  const int m = a.scale().m();
  const std::int64_t window = std::int64_t{1} << m;
  std::vector<std::int64_t> v;
  v.reserve(a.size() * b.size());
  for (Index i : a.indices())
    for (Index j : b.indices()) v.push_back((i << m) + k * j);
  std::int64_t count = 0;
  for (std::int64_t x : v)
    for (std::int64_t y : v) count += (x - y <= window && y - x <= window) ? 1 : 0;
  return count;
}

void set_checks(const CorpusSet& s, std::vector<Check>& out) {
  const auto& x = s.set;
  const int m = x.scale().m();
  bool ok = !x.empty();
  for (std::size_t k = 0; k < x.size(); ++k) {
    ok = ok && x[k] >= 0 && x[k] <= x.scale().steps();
    if (k > 0) ok = ok && x[k] > x[k - 1];
  }
  out.push_back({"gridset", s.role + ": indices strictly increasing in [0, 2^m], nonempty", ok, {{"size", x.size()}}});

  bool mono = true;
  std::size_t prev = 1;
  Json covers = Json::array();
  for (int level = 0; level <= m; ++level) {
    const std::size_t n = covering_number(x, level);
    covers.push_back(n);
    mono = mono && n >= prev && n <= x.size();
    prev = n;
  }
  mono = mono && covering_number(x, m) == x.size();
  out.push_back({"gridset", s.role + ": covering numbers nondecreasing in level, equal |X| at level m", mono,
                 {{"covers", covers}}});

  if (s.spec.kind == FamilyKind::RandomFrostman)
    out.push_back({"generators", s.role + ": RANDOM_FROSTMAN certificate max_ratio <= 8", s.certificate.max_ratio <= 8.0,
                   {{"max_ratio", s.certificate.max_ratio}, {"retries", s.retries}}});

  if (s.spec.kind == FamilyKind::Cantor) {
    std::vector<CantorLevel> levels = s.spec.levels;
    if (levels.empty()) levels.assign(static_cast<std::size_t>(s.spec.depth), CantorLevel{s.spec.base, s.spec.digits});
    int bits = s.spec.upper_half ? 1 : 0;
    std::size_t expected = 1;
    bool exact = covering_number(x, bits) == 1;
    Json rows = Json::array();
    for (const auto& l : levels) {
      bits += std::countr_zero(static_cast<unsigned>(l.base));
      expected *= l.digits.size();
      const std::size_t got = covering_number(x, bits);
      rows.push_back({{"level", bits}, {"expected", expected}, {"measured", got}});
      exact = exact && got == expected;
    }
    out.push_back({"generators", s.role + ": CANTOR covering number at aligned scales equals |digits|^j", exact,
                   {{"levels", rows}}});
  }
}

EntryResult verify_entry(const CorpusEntry& e, const VerifyOptions& opt) {
  EntryResult r;
  const auto& a = e.a.set;
  const auto& b = e.b.set;
  const auto& c = e.c.set;
  const int m = e.m;
  auto& checks = r.checks;

  for (const auto* s : {&e.a, &e.b, &e.c}) set_checks(*s, checks);
  {
    const Index half = Scale(m).steps() / 2;
    checks.push_back({"generators", "C lies in [1/2, 1]", c.indices().front() >= half, {{"min_index", c[0]}}});
  }

  // energy
  const EnergyReport spectrum = energy_spectrum(a, b, c, {1, false});
  {
    std::int64_t sum = 0;
    for (const auto& [k, en] : spectrum.per_c) sum += en;
    std::size_t in_levels = 0;
    for (const auto& l : spectrum.levels) in_levels += l.c_indices.size();
    checks.push_back({"energy", "total equals the sum of per-c energies and level sets partition C",
                      sum == spectrum.total && in_levels == c.size(),
                      {{"total", spectrum.total}, {"sum", sum}, {"level_members", in_levels}}});
  }
  if (a.size() * b.size() <= 1024) {
    Json bad = Json::array();
    for (const auto& [k, en] : spectrum.per_c) {
      const std::int64_t brute = brute_energy(a, b, k);
      if (brute != en) bad.push_back({{"c_index", k}, {"two_pointer", en}, {"brute", brute}});
    }
    checks.push_back({"energy", "two-pointer energy equals brute-force count", bad.empty(), {{"mismatches", bad}}});
  }
  {
    const bool lower = spectrum.k_at_least(Rational(1, 3));
    const bool upper = spectrum.k_within_upper_envelope();
    checks.push_back({"energy", "1/3 <= K <= sqrt(|A||B|)", lower && upper, {{"K", spectrum.K}}});
  }
  {
    const i128 target = static_cast<i128>(a.size() * b.size()) * static_cast<i128>(a.size() * b.size());
    Json bad = Json::array();
    for (const auto& [k, en] : spectrum.per_c) {
      const auto cover = covering_number(dilate_sum(a, k, b), m);
      if (static_cast<i128>(en) * static_cast<i128>(cover) < target)
        bad.push_back({{"c_index", k}, {"energy", en}, {"cover", cover}});
    }
    checks.push_back({"energy", "E_c * |A + cB|_delta >= (|A||B|)^2", bad.empty(), {{"violations", bad}}});
  }

  // incidence
  {
    const EnergyIncidence ei = energy_via_incidence(a, b, c, 1);
    checks.push_back({"incidence", "vertical-mode incidences equal the energy total", ei.match,
                      {{"incidences", ei.incidences}, {"energy_total", ei.energy_total}}});
  }
  {
    // Exact incidences between a product grid and the lines y = c(x - b1).
    auto head = [](const DiscretizedSet& s, std::size_t n) {
      std::vector<Index> v(s.indices().begin(), s.indices().begin() + static_cast<std::ptrdiff_t>(std::min(n, s.size())));
      return DiscretizedSet(s.scale(), std::move(v));
    };
    const auto points = product_points(head(b, 48), head(a, 48));
    const auto lines = lines_from(head(c, 32), head(b, 48));
    const IncidenceReport st = st_bound_check(points, lines, Rational(0), DistanceMode::Euclidean);
    checks.push_back({"incidence", "exact incidences obey the Szemeredi-Trotter bound", st.st_pass && st.consistent(),
                      {{"points", st.point_count}, {"lines", st.line_count}, {"incidences", st.incidences},
                       {"bound", st.st_bound}}});
    const LineSeparation sep = line_separation(lines, Scale(m).delta());
    r.findings.push_back({{"module", "incidence"}, {"kind", "line separation"}, {"c0", sep.c0},
                          {"lines", sep.line_count}});
  }

  // bounds / arith
  {
    const RuzsaReport ex = ruzsa_check(a, b, c, Sign::Minus);
    const RuzsaReport ex_plus = ruzsa_check(a, b, c, Sign::Plus);
    checks.push_back({"bounds", "exact Ruzsa triangle ratio <= 1 (both signs)", ex.pass && ex_plus.pass,
                      {{"minus", ex.ratio}, {"plus", ex_plus.ratio}}});
    const int level = std::max(0, m - 2);
    const RuzsaReport cov = ruzsa_covering_check(a, b, c, Sign::Minus, level, opt.check_constant);
    checks.push_back({"bounds", "delta-covering Ruzsa ratio <= constant", cov.pass,
                      {{"level", level}, {"ratio", cov.ratio}, {"constant", opt.check_constant}}});
    const std::vector<DiscretizedSet> ys{b, c};
    const PlunneckeReport pl = plunnecke_check(a, ys, opt.check_constant);
    checks.push_back({"bounds", "Plunnecke ratio <= constant", pl.pass,
                      {{"ratio", pl.ratio}, {"constant", opt.check_constant}}});
  }
  if (e.a.spec.kind == FamilyKind::PaperExtremal) {
    std::size_t worst = 0;
    for (Index k : c.indices()) worst = std::max(worst, covering_number(dilate_sum(a, k, b), m));
    checks.push_back({"generators", "PAPER_EXTREMAL: |A + cB|_delta <= 2|A| for every c", worst <= 2 * a.size(),
                      {{"max_cover", worst}, {"a_size", a.size()}, {"K", spectrum.K}}});
  }

  // extract
  Json pipeline = nullptr;
  try {
    PipelineOptions po;
    po.seed = opt.seed;
    const PipelineTrace t = run_pipeline(a, b, c, po);
    const auto& d = t.decomposition;
    const bool nonempty = !d.b_prime.empty() && !d.c_prime.empty();
    auto subset = [](const DiscretizedSet& sub, const DiscretizedSet& of) {
      return std::all_of(sub.indices().begin(), sub.indices().end(), [&](Index i) { return of.contains(i); });
    };
    checks.push_back({"extract", "B' and C' nonempty, B' subset of B, C' subset of C",
                      nonempty && subset(d.b_prime, b) && subset(d.c_prime, c),
                      {{"b_prime", d.b_prime.size()}, {"c_prime", d.c_prime.size()}}});
    if (nonempty) {
      // From-scratch recomputation through independent code paths.
      const auto& v = d.verification;
      const std::size_t sum_cover = covering_number(sumset(d.b_prime, d.b_prime, Sign::Plus), m);
      const std::size_t diff_cover = covering_number(sumset(d.b_prime, d.b_prime, Sign::Minus), m);
      std::size_t dil = 0;
      const Rational cs = Rational::dyadic(d.c_star, m);
      const std::vector<GridSet> pair{GridSet(d.b_prime), GridSet(d.b_prime)};
      for (Index k : d.c_prime.indices()) {
        const std::vector<Rational> coeffs{cs, Rational::dyadic(k, m)};
        dil = std::max(dil, covering_number(linear_combination(coeffs, pair), m));
      }
      const double nb = static_cast<double>(d.b_prime.size());
      const bool ints = v.sum_cover == sum_cover && v.diff_cover == diff_cover && v.dilate_cover_max == dil &&
                        v.b_prime_size == d.b_prime.size() && v.c_prime_size == d.c_prime.size() &&
                        v.b_size == b.size() && v.c_size == c.size();
      const bool ratios = v.sum_ratio == static_cast<double>(sum_cover) / nb &&
                          v.diff_ratio == static_cast<double>(diff_cover) / nb &&
                          v.dilate_ratio == static_cast<double>(dil) / nb &&
                          v.b_fraction == nb / static_cast<double>(b.size()) &&
                          v.c_fraction == static_cast<double>(d.c_prime.size()) / static_cast<double>(c.size());
      checks.push_back({"extract", "decomposition ratios equal a from-scratch recomputation", ints && ratios,
                        {{"sum_cover", sum_cover}, {"diff_cover", diff_cover}, {"dilate_cover_max", dil}}});
    }
    if (t.dichotomy) {
      const auto& dg = *t.dichotomy;
      if (dg.branch == Branch::Gap)
        checks.push_back({"extract", "GAP witness passes exact re-verification", recheck_gap_witness(dg),
                          {{"r", dg.witness->r.str()}, {"point", dg.witness->point.str()}}});
      else if (dg.branch == Branch::Neither)
        r.findings.push_back({{"module", "extract"}, {"kind", "dichotomy NEITHER"}, {"density", dg.density},
                              {"s_level", dg.s_level}, {"diagnostic", dg.diagnostic}});
    } else {
      r.findings.push_back({{"module", "extract"}, {"kind", "empty D"}, {"diagnostic", t.diagnostic}});
    }
    pipeline = {{"band", d.band},
                {"rho", d.rho},
                {"b_prime", d.b_prime.size()},
                {"c_prime", d.c_prime.size()},
                {"c_star", d.c_star},
                {"d_size", t.d.d.size()},
                {"branch", t.dichotomy ? to_string(t.dichotomy->branch) : "NONE"}};
  } catch (const StageError& err) {
    r.findings.push_back({{"module", "extract"}, {"kind", "stage stopped"}, {"stage", err.stage()},
                          {"diagnostic", err.what()}});
  }

  r.summary = {{"name", e.name},
               {"m", m},
               {"sizes", {{"A", a.size()}, {"B", b.size()}, {"C", c.size()}}},
               {"energy_total", spectrum.total},
               {"K", spectrum.K},
               {"pipeline", pipeline}};
  return r;
}

std::vector<Check> global_checks(const VerifyOptions& opt) {
  std::vector<Check> out;

  // Exact Ruzsa on seeded random triples at m = 8.
  {
    Xoshiro256 rng(opt.seed * 0x2545F4914F6CDD1DULL + 17);
    const Scale scale(8);
    auto random_set = [&] {
      const auto n = 1 + rng.below(24);
      std::vector<Index> v;
      for (std::uint64_t k = 0; k < n; ++k) v.push_back(static_cast<Index>(rng.below(257)));
      return DiscretizedSet::from_unsorted(scale, std::move(v));
    };
    int failures = 0;
    double worst = 0;
    Json first_failure = nullptr;
    for (int t = 0; t < opt.ruzsa_triples; ++t) {
      const auto x = random_set(), y = random_set(), z = random_set();
      for (Sign s : {Sign::Minus, Sign::Plus}) {
        const RuzsaReport rr = ruzsa_check(x, y, z, s);
        worst = std::max(worst, rr.ratio);
        if (!rr.pass) {
          ++failures;
          if (first_failure.is_null())
            first_failure = {{"X", to_json(x)}, {"Y", to_json(y)}, {"Z", to_json(z)}, {"sign", s == Sign::Plus ? "+" : "-"}};
        }
      }
    }
    out.push_back({"bounds", "exact Ruzsa ratio <= 1 on seeded random triples at m=8", failures == 0,
                   {{"triples", opt.ruzsa_triples}, {"failures", failures}, {"worst_ratio", worst},
                    {"first_failure", first_failure}}});
  }

  // Calculator identities.
  {
    BoundParams p;
    p.alpha = p.beta = p.eta = 0.3;
    p.gamma = 0.9;
    p.kappa = 0.01;
    const BoundSet s = theorem16_bounds(p);
    auto max_of = [](const std::vector<BoundComponent>& v) {
      double x = -INFINITY;
      for (const auto& c : v) x = std::max(x, c.exponent);
      return x;
    };
    const double mn = std::min({s.e0.exponent, s.e1_statement.exponent, s.e2, s.e3, s.e4});
    const bool ok = s.e2 == max_of(s.m2_components) && s.e3 == max_of(s.m3_components) &&
                    s.e4 == max_of(s.m4_components) && s.min_exponent == mn;
    out.push_back({"bounds", "branch exponents are maxima of components; min_exponent is their minimum", ok,
                   {{"min", s.min_exponent}, {"label", s.min_label}}});
  }
  {
    bool ok = true;
    Json bad = nullptr;
    for (int ia = 1; ia < 20 && ok; ++ia)
      for (int ib = 1; ib <= ia && ok; ++ib)
        for (int ig = 1; ig < 20 && ok; ++ig) {
          const double al = ia / 20.0, be = ib / 20.0, ga = ig / 20.0;
          const EpsilonRange er = epsilon_range(al, be, ga);
          const bool positive = er.numerator_a > 0 && er.numerator_b > 0;
          if ((er.eps_max > 0) != positive) {
            ok = false;
            bad = {{"alpha", al}, {"beta", be}, {"gamma", ga}};
          }
        }
    out.push_back({"bounds", "eps_max > 0 iff both numerators are positive", ok, {{"counterexample", bad}}});
  }
  {
    const Theorem110 t = theorem110_exponent(0.7, 0.7, 0.6);
    const bool ok = t.equal_form && std::abs(t.exponent - *t.equal_form) <= 1e-12 &&
                    std::abs(t.exponent + 0.0375) <= 1e-12;
    out.push_back({"bounds", "Theorem 1.10 exponent agrees with its alpha=beta form", ok,
                   {{"exponent", t.exponent}}});
  }
  return out;
}

Json check_json(const Check& c, const std::string& entry) {
  return {{"module", c.module}, {"invariant", c.invariant}, {"entry", entry}, {"pass", c.pass}, {"detail", c.detail}};
}

// ---------------------------------------------------------------- subcommands

struct Common {
  unsigned workers = default_workers();
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--workers", c.workers, "worker threads (default: available cores)")
      ->check(CLI::Range(1u, 4096u));
  app->add_option("--out", c.out, "output path ('-' or omitted: stdout)");
}

CLI::Option* set_option(CLI::App* app, const std::string& name, std::string& target, const std::string& help,
                        bool required = true) {
  auto* o = app->add_option(name, target, help)->check(CLI::ExistingFile);
  if (required) o->required();
  return o;
}

}  // namespace

FamilySpec family_spec_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("--spec", "FamilySpec must be a JSON object");
  FamilySpec s;
  try {
    s.kind = family_kind_from_string(j.at("kind").get<std::string>());
    s.m = j.value("m", s.m);
    s.start = j.value("start", s.start);
    s.step = j.value("step", s.step);
    s.length = j.value("length", s.length);
    s.base = j.value("base", s.base);
    s.digits = j.value("digits", s.digits);
    s.depth = j.value("depth", s.depth);
    if (j.contains("levels"))
      for (const auto& l : j.at("levels")) s.levels.push_back({l.at("base").get<int>(), l.at("digits").get<std::vector<int>>()});
    s.sigma = j.value("sigma", s.sigma);
    s.seed = j.value("seed", s.seed);
    s.max_retries = j.value("max_retries", s.max_retries);
    s.n = j.value("n", s.n);
    const std::string part = j.value("part", std::string("A"));
    if (part == "A") s.part = ExtremalPart::A;
    else if (part == "B") s.part = ExtremalPart::B;
    else if (part == "C") s.part = ExtremalPart::C;
    else throw UsageError("--spec", "part must be A, B or C");
    if (j.contains("parts"))
      for (const auto& p : j.at("parts")) s.parts.push_back(family_spec_from_json(p));
    s.upper_half = j.value("upper_half", false);
  } catch (const Json::exception& e) {
    throw UsageError("--spec", e.what());
  }
  return s;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args, const Json& config) {
  if (!config.is_object()) throw UsageError("--config", "config must be a JSON object");
  std::vector<std::string> out = args;
  for (auto it = config.begin(); it != config.end(); ++it) {
    const std::string flag = "--" + it.key();
    if (has_flag(args, flag)) continue;  // flags win
    const Json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) joined += (joined.empty() ? "" : ",") + config_scalar(x);
      out.push_back(flag);
      out.push_back(joined);
    } else if (!v.is_null()) {
      out.push_back(flag);
      out.push_back(config_scalar(v));
    }
  }
  return out;
}

Json verify_corpus(const VerifyOptions& opt, std::size_t& failed) {
  const auto entries = corpus(opt.seed);
  std::vector<EntryResult> results(entries.size());
  parallel_for(entries.size(), opt.workers, [&](std::size_t i) { results[i] = verify_entry(entries[i], opt); });

  Json summaries = Json::array();
  Json failures = Json::array();
  Json findings = Json::array();
  Json checks = Json::array();
  std::size_t total = 0;
  failed = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    summaries.push_back(results[i].summary);
    for (const auto& c : results[i].checks) {
      ++total;
      checks.push_back(check_json(c, entries[i].name));
      if (!c.pass) {
        ++failed;
        Json f = check_json(c, entries[i].name);
        f["reproducer"] = reproducer(opt.seed, entries[i]);
        failures.push_back(f);
      }
    }
    for (auto f : results[i].findings) {
      f["entry"] = entries[i].name;
      findings.push_back(f);
    }
  }
  for (const auto& c : global_checks(opt)) {
    ++total;
    checks.push_back(check_json(c, "(global)"));
    if (!c.pass) {
      ++failed;
      Json f = check_json(c, "(global)");
      f["reproducer"] = {{"corpus_seed", opt.seed}};
      failures.push_back(f);
    }
  }
  return {{"seed", opt.seed},
          {"check_constant", opt.check_constant},
          {"entries", summaries},
          {"checks", checks},
          {"failures", failures},
          {"findings", findings},
          {"totals", {{"checks", total}, {"passed", total - failed}, {"failed", failed}, {"findings", findings.size()}}},
          {"status", failed == 0 ? "pass" : "fail"}};
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

int run(const std::vector<std::string>& raw_args) {
  CLI::App app{"sumlab: discretized sum-product experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sumlab 1.0");

  int exit_code = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "emit a set family to a set file");
  Common gen_c;
  FamilySpec spec;
  std::string family = "AP", part = "A", spec_file, cert_out;
  add_common(gen, gen_c);
  gen->add_option("--spec", spec_file, "FamilySpec JSON file (overrides family flags)")->check(CLI::ExistingFile);
  gen->add_option("--family", family, "AP | CANTOR | RANDOM_FROSTMAN | PAPER_EXTREMAL | FULL_GRID");
  gen->add_option("--m", spec.m, "grid exponent, delta = 2^-m")->check(CLI::Range(1, 24));
  gen->add_option("--start", spec.start, "AP first index");
  gen->add_option("--step", spec.step, "AP / FULL_GRID step")->check(CLI::PositiveNumber);
  gen->add_option("--length", spec.length, "AP length")->check(CLI::NonNegativeNumber);
  gen->add_option("--base", spec.base, "Cantor base (power of two)");
  gen->add_option("--digits", spec.digits, "Cantor digits, comma separated")->delimiter(',');
  gen->add_option("--depth", spec.depth, "Cantor depth")->check(CLI::NonNegativeNumber);
  gen->add_option("--sigma", spec.sigma, "random Frostman dimension")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", spec.seed, "random seed");
  gen->add_option("--n", spec.n, "extremal parameter n = 2^(4k)");
  gen->add_option("--part", part, "extremal part A | B | C")->check(CLI::IsMember({"A", "B", "C"}));
  gen->add_flag("--upper-half", spec.upper_half, "place the set in [1/2, 1]");
  gen->add_option("--certificate", cert_out, "write the Frostman certificate JSON here");

  // energy
  auto* en = app.add_subcommand("energy", "energy spectrum and K for A, B, C");
  Common en_c;
  std::string fa, fb, fc, csv_out;
  bool prefilter = false;
  add_common(en, en_c);
  set_option(en, "--A", fa, "set file for A");
  set_option(en, "--B", fb, "set file for B");
  set_option(en, "--C", fc, "set file for C");
  en->add_option("--csv", csv_out, "also write per-c energies as CSV");
  en->add_flag("--prefilter", prefilter, "skip c whose energy is provably below the mean");

  // pipeline
  auto* pl = app.add_subcommand("pipeline", "structural extraction, D and the dense/gap dichotomy");
  Common pl_c;
  std::string pa, pb, pc;
  PipelineOptions popt;
  add_common(pl, pl_c);
  set_option(pl, "--A", pa, "set file for A");
  set_option(pl, "--B", pb, "set file for B");
  set_option(pl, "--C", pc, "set file for C");
  pl->add_option("--kappa", popt.kappa, "ratio-set exponent in (0, 1/2)")->check(CLI::Range(0.0, 0.5));
  pl->add_option("--threshold", popt.dense_threshold, "density threshold")->check(CLI::PositiveNumber);
  pl->add_option("--seed", popt.seed, "sampling seed");
  pl->add_option("--triple-cap", popt.triple_cap, "triple enumeration cap")->check(CLI::PositiveNumber);
  pl->add_option("--quadruple-cap", popt.quadruple_cap, "quadruple enumeration cap")->check(CLI::PositiveNumber);
  pl->add_option("--m1", popt.structural.m1, "structural constant m1")->check(CLI::Range(1.0, 1e6));
  pl->add_option("--m2", popt.structural.m2, "structural constant m2")->check(CLI::Range(1.0, 1e6));
  pl->add_flag("--prefilter", popt.structural.prefilter_low_energy, "energy prefilter");

  // bounds
  auto* bd = app.add_subcommand("bounds", "closed-form exponents");
  Common bd_c;
  std::string thm = "1.6";
  BoundParams bp;
  add_common(bd, bd_c);
  bd->add_option("--thm", thm, "1.6 | eps | gamma | 1.10 | 1.11")
      ->check(CLI::IsMember({"1.6", "eps", "gamma", "1.10", "1.11"}));
  bd->add_option("--alpha", bp.alpha, "alpha");
  bd->add_option("--beta", bp.beta, "beta");
  bd->add_option("--gamma", bp.gamma, "gamma");
  auto* eta_opt = bd->add_option("--eta", bp.eta, "eta (default: beta)");
  bd->add_option("--kappa", bp.kappa, "kappa (epsilon_0)");
  bd->add_option("--epsilon", bp.epsilon, "epsilon");
  bd->add_option("--m1", bp.m1, "m1");
  bd->add_option("--m2", bp.m2, "m2");

  // incidence
  auto* inc = app.add_subcommand("incidence", "incidence counts and bound checks");
  Common inc_c;
  std::string check = "st", points_file, lines_file, tol_text = "0", mode_text = "euclidean";
  std::string x1f, x2f, ia, ib, ic, inc_csv;
  double t_param = 1.5, frostman_m = 0;
  std::optional<double> c_fit;
  add_common(inc, inc_c);
  inc->add_option("--check", check, "st | dov | energy")->check(CLI::IsMember({"st", "dov", "energy"}));
  inc->add_option("--points", points_file, "point file ('x y' rationals)")->check(CLI::ExistingFile);
  inc->add_option("--lines", lines_file, "line file ('c d' or 'x r c')")->check(CLI::ExistingFile);
  inc->add_option("--X1", x1f, "set file: first factor of the point grid")->check(CLI::ExistingFile);
  inc->add_option("--X2", x2f, "set file: second factor of the point grid")->check(CLI::ExistingFile);
  inc->add_option("--A", ia, "set file for A (energy check)")->check(CLI::ExistingFile);
  inc->add_option("--B", ib, "set file for B (lines y = c(x - b))")->check(CLI::ExistingFile);
  inc->add_option("--C", ic, "set file for C (line slopes)")->check(CLI::ExistingFile);
  inc->add_option("--tolerance", tol_text, "rational tolerance or 'inf'");
  inc->add_option("--mode", mode_text, "euclidean | vertical")->check(CLI::IsMember({"euclidean", "vertical"}));
  inc->add_option("--t", t_param, "Frostman exponent t of the point set (dov)");
  inc->add_option("--M", frostman_m, "Frostman constant M (dov; default: measured)");
  inc->add_option("--c-fit", c_fit, "fixed constant for the dov bound (default: fitted)");
  inc->add_option("--csv", inc_csv, "also write a CSV row");

  // verify
  auto* vf = app.add_subcommand("verify", "run every invariant suite on the corpus");
  Common vf_c;
  VerifyOptions vopt;
  add_common(vf, vf_c);
  vf->add_option("--seed", vopt.seed, "corpus seed");
  vf->add_option("--constant", vopt.check_constant, "envelope for delta-covering Ruzsa and Plunnecke ratios")
      ->check(CLI::PositiveNumber);
  vf->add_option("--ruzsa-triples", vopt.ruzsa_triples, "random triples for the exact Ruzsa check")
      ->check(CLI::NonNegativeNumber);

  // compare
  auto* cmp = app.add_subcommand("compare", "measured K against the theoretical exponents (CSV)");
  Common cmp_c;
  std::uint64_t cmp_seed = 1;
  double cmp_kappa = 0;
  add_common(cmp, cmp_c);
  cmp->add_option("--seed", cmp_seed, "corpus seed");
  cmp->add_option("--kappa", cmp_kappa, "kappa for Theorem 1.6")->check(CLI::Range(0.0, 0.5));

  std::vector<std::string> args = raw_args;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config" && args[i].rfind("--config=", 0) != 0) continue;
    std::string path;
    std::size_t erase = 1;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        std::cerr << "--config: missing path\n";
        return 2;
      }
      path = args[i + 1];
      erase = 2;
    } else {
      path = args[i].substr(9);
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + erase));
    try {
      args = merge_config(args, load_json_file(path, "--config"));
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 2;
    }
    break;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      if (!spec_file.empty()) {
        spec = family_spec_from_json(load_json_file(spec_file, "--spec"));
      } else {
        try {
          spec.kind = family_kind_from_string(family);
        } catch (const std::exception& e) {
          throw UsageError("--family", e.what());
        }
        spec.part = part == "A" ? ExtremalPart::A : part == "B" ? ExtremalPart::B : ExtremalPart::C;
      }
      const GeneratedSet g = generate_certified(spec);
      std::ostringstream text;
      write_set(text, g.set);
      emit_text(text.str(), gen_c.out);
      if (!cert_out.empty()) {
        Json cert = {{"spec", to_json(spec)}, {"certificate", to_json(g.certificate)}, {"retries", g.retries}};
        emit_report(cert, cert_out);
      }
    } else if (en->parsed()) {
      const auto a = load_set(fa, "--A"), b = load_set(fb, "--B"), c = load_set(fc, "--C");
      require_same_scale({{"--A", &a}, {"--B", &b}, {"--C", &c}});
      const EnergyReport r = energy_spectrum(a, b, c, {en_c.workers, prefilter});
      emit_report(to_json(r), en_c.out);
      if (!csv_out.empty()) emit_text(energy_csv(r), csv_out);
    } else if (pl->parsed()) {
      const auto a = load_set(pa, "--A"), b = load_set(pb, "--B"), c = load_set(pc, "--C");
      require_same_scale({{"--A", &a}, {"--B", &b}, {"--C", &c}});
      if (!(popt.kappa > 0 && popt.kappa < 0.5)) throw UsageError("--kappa", "must lie in (0, 1/2)");
      popt.structural.workers = pl_c.workers;
      try {
        const PipelineTrace t = run_pipeline(a, b, c, popt);
        Json j = to_json(t);
        j["status"] = "ok";
        emit_report(j, pl_c.out);
        if (t.dichotomy && t.dichotomy->branch == Branch::Gap && !recheck_gap_witness(*t.dichotomy)) exit_code = 1;
      } catch (const StageError& e) {
        // A stage whose hypothesis fails is a reported outcome, not a crash.
        Json j = {{"status", "stopped"}, {"stage", e.stage()}, {"diagnostic", e.what()}};
        emit_report(j, pl_c.out);
        exit_code = 1;
      }
    } else if (bd->parsed()) {
      if (eta_opt->count() == 0) bp.eta = bp.beta;
      Json j;
      try {
      if (thm == "1.6") {
        j = to_json(theorem16_bounds(bp));
      } else if (thm == "eps") {
        j = to_json(epsilon_range(bp.alpha, bp.beta, bp.gamma));
      } else if (thm == "gamma") {
        bp.validate(false);
        j = gamma_thresholds_json(bp);
      } else {
        const Theorem110 t = theorem110_exponent(bp.alpha, bp.beta, bp.gamma);
        j = to_json(t);
        if (thm == "1.11") j["exponent_1.10"] = j["exponent"], j["exponent"] = j["sumset_exponent"];
      }
      } catch (const std::invalid_argument& e) {
        throw UsageError(param_flag(e.what()), e.what());
      }
      j["theorem"] = thm;
      emit_report(j, bd_c.out);
    } else if (inc->parsed()) {
      const DistanceMode mode = mode_text == "vertical" ? DistanceMode::Vertical : DistanceMode::Euclidean;
      Json j;
      IncidenceReport rep;
      bool have_rep = false;
      if (check == "energy") {
        if (ia.empty() || ib.empty() || ic.empty()) throw UsageError("--A/--B/--C", "required for --check energy");
        const auto a = load_set(ia, "--A"), b = load_set(ib, "--B"), c = load_set(ic, "--C");
        require_same_scale({{"--A", &a}, {"--B", &b}, {"--C", &c}});
        const EnergyIncidence ei = energy_via_incidence(a, b, c, inc_c.workers);
        j = to_json(ei);
        if (!ei.match) exit_code = 1;
      } else if (check == "dov") {
        if (x1f.empty() || x2f.empty()) throw UsageError("--X1/--X2", "required for --check dov");
        const auto x1 = load_set(x1f, "--X1"), x2 = load_set(x2f, "--X2");
        std::vector<GridLine> lines;
        if (!lines_file.empty()) {
          lines = read_lines(lines_file);
        } else {
          if (ib.empty() || ic.empty()) throw UsageError("--lines", "give --lines or both --B and --C");
          lines = lines_from(load_set(ic, "--C"), load_set(ib, "--B"));
        }
        if (!(t_param > 1.0 && t_param <= 2.0)) throw UsageError("--t", "must lie in (1, 2]");
        const double mval = frostman_m > 0 ? frostman_m : product_frostman_constant(x1, x2, t_param);
        rep = dov_bound_check(x1, x2, lines, t_param, mval, c_fit, inc_c.workers);
        have_rep = true;
        if (!rep.dov_pass) exit_code = 1;
      } else {
        std::vector<Point> points;
        std::vector<GridLine> lines;
        if (!points_file.empty()) points = read_points(points_file);
        else if (!x1f.empty() && !x2f.empty()) points = product_points(load_set(x1f, "--X1"), load_set(x2f, "--X2"));
        else throw UsageError("--points", "give --points or both --X1 and --X2");
        if (!lines_file.empty()) lines = read_lines(lines_file);
        else if (!ib.empty() && !ic.empty()) lines = lines_from(load_set(ic, "--C"), load_set(ib, "--B"));
        else throw UsageError("--lines", "give --lines or both --B and --C");
        rep = st_bound_check(points, lines, parse_tolerance(tol_text), mode, kStConstant, inc_c.workers);
        have_rep = true;
        if (!rep.st_pass) exit_code = 1;
      }
      if (have_rep) {
        j = to_json(rep);
        if (!inc_csv.empty()) emit_text(incidence_csv(rep), inc_csv);
      }
      emit_report(j, inc_c.out);
    } else if (vf->parsed()) {
      vopt.workers = vf_c.workers;
      std::size_t failed = 0;
      const Json j = verify_corpus(vopt, failed);
      emit_report(j, vf_c.out);
      std::cerr << "verify seed " << vopt.seed << ": " << j["totals"]["checks"].get<std::size_t>() << " checks, "
                << failed << " failed, " << j["totals"]["findings"].get<std::size_t>() << " findings\n";
      for (const auto& f : j["failures"])
        std::cerr << "FAIL [" << f["module"].get<std::string>() << "] " << f["entry"].get<std::string>() << ": "
                  << f["invariant"].get<std::string>() << "\n";
      if (failed > 0) exit_code = 1;
    } else if (cmp->parsed()) {
      const auto entries = corpus(cmp_seed);
      std::vector<std::string> rows(entries.size());
      parallel_for(entries.size(), cmp_c.workers, [&](std::size_t i) {
        const auto& e = entries[i];
        const double al = nominal_dimension(e.a.spec), be = nominal_dimension(e.b.spec),
                     ga = nominal_dimension(e.c.spec);
        const double K = k_statistic(e.a.set, e.b.set, e.c.set);
        const double log_inv_delta = e.m * std::log(2.0);
        const double delta = std::exp2(-e.m);
        std::ostringstream row;
        row << e.name << ',' << e.m << ',' << format_real(al) << ',' << format_real(be) << ',' << format_real(ga)
            << ',' << format_real(K) << ',' << format_real(std::log(K) / log_inv_delta) << ',';
        // Theorem 1.10: K >~ delta^e.
        if (al + be > 1.0 && al < 1.0 && be < 1.0 && ga > 0.0) {
          const double ex = theorem110_exponent(al, be, ga).exponent;
          const double bound = std::pow(delta, ex);
          row << format_real(ex) << ',' << format_real(bound) << ',' << format_real(K / bound) << ',';
        } else {
          row << ",,,";
        }
        // Theorem 1.6: K >~ delta^{-min}.
        BoundParams p;
        p.alpha = al;
        p.beta = be;
        p.gamma = ga;
        p.eta = be;
        p.kappa = cmp_kappa;
        bool valid = true;
        try {
          p.validate(true);
        } catch (const std::invalid_argument&) {
          valid = false;
        }
        if (valid) {
          const BoundSet s = theorem16_bounds(p);
          const double bound = std::pow(delta, -s.min_exponent);
          row << format_real(s.min_exponent) << ',' << s.min_label << ',' << format_real(bound) << ','
              << format_real(K / bound);
        } else {
          row << ",,,";
        }
        rows[i] = row.str();
      });
      std::string csv =
          "name,m,alpha,beta,gamma,K,K_exponent,thm110_exponent,thm110_bound,K_over_thm110,thm16_min,thm16_label,"
          "thm16_bound,K_over_thm16\n";
      for (const auto& r : rows) csv += r + "\n";
      emit_text(csv, cmp_c.out);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace sumlab::cli
