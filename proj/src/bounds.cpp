#include "sumlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sumlab {

namespace {

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
}

const BoundComponent& largest(const std::vector<BoundComponent>& v) {
  return *std::max_element(v.begin(), v.end(),
                           [](const BoundComponent& x, const BoundComponent& y) { return x.exponent < y.exponent; });
}

}  // namespace

void BoundParams::validate(bool require_alpha_ge_beta) const {
  require_open_unit(alpha, "alpha");
  require_open_unit(beta, "beta");
  require_open_unit(gamma, "gamma");
  require_open_unit(eta, "eta");
  if (!(kappa >= 0.0 && kappa < 0.5)) throw std::invalid_argument("kappa must lie in [0, 1/2)");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be nonnegative");
  if (!(m1 >= 1.0)) throw std::invalid_argument("m1 must be at least 1");
  if (!(m2 >= 1.0)) throw std::invalid_argument("m2 must be at least 1");
  if (require_alpha_ge_beta && alpha < beta) throw std::invalid_argument("alpha must be at least beta");
}

std::vector<std::pair<std::string, double>> BoundSet::labeled() const {
  std::vector<std::pair<std::string, double>> out{{e0.label, e0.exponent},
                                                  {e1_statement.label, e1_statement.exponent},
                                                  {e1_proof.label, e1_proof.exponent}};
  for (const auto* group : {&m2_components, &m3_components, &m4_components})
    for (const auto& c : *group) out.emplace_back(c.label, c.exponent);
  return out;
}

BoundSet theorem16_bounds(const BoundParams& p) {
  p.validate(true);
  // α enters only through the γ-thresholds.
  const double b = p.beta, g = p.gamma, e = p.eta, k = p.kappa;
  const double d2 = 16 * p.m2 + 36 * p.m1;
  const double d3 = 16 * p.m2 + 44 * p.m1;
  const double d4 = 20 * p.m2 + 54 * p.m1;

  BoundSet s;
  s.params = p;
  s.e0 = {"(m0)", "(γ-β)/4", (g - b) / 4};
  s.e1_statement = {"M1-statement", "(γ+2β+κη)/4", (g + 2 * b + k * e) / 4};
  s.e1_proof = {"(4.3)", "(γ-2β+κη)/4", (g - 2 * b + k * e) / 4};
  s.m2_components = {
      {"(4.16)", "(3γ-8β+1-κ(3-γ))/(16m2+36m1)", (3 * g - 8 * b + 1 - k * (3 - g)) / d2},
      {"(4.17)", "(4γ-9β+1-κ(3-η))/(16m2+36m1)", (4 * g - 9 * b + 1 - k * (3 - e)) / d2},
  };
  s.m3_components = {
      {"(4.18)", "(4γ-10β-κ(3-γ))/(16m2+44m1)", (4 * g - 10 * b - k * (3 - g)) / d3},
      {"(4.19)", "(5γ-11β-κ(2-η))/(16m2+44m1)", (5 * g - 11 * b - k * (2 - e)) / d3},
      {"(4.20)", "(5γ-12β+η-κ(2-γ))/(16m2+44m1)", (5 * g - 12 * b + e - k * (2 - g)) / d3},
      {"(4.21)", "(6γ-13β+η-κ(1-η))/(16m2+44m1)", (6 * g - 13 * b + e - k * (1 - e)) / d3},
  };
  s.m4_components = {
      {"(4.27)", "(6γ-14β-κ(3-γ))/(20m2+54m1)", (6 * g - 14 * b - k * (3 - g)) / d4},
      {"(4.28)", "(7γ-16β+η-κ(2-γ))/(20m2+54m1)", (7 * g - 16 * b + e - k * (2 - g)) / d4},
      {"(4.29)", "(7γ-15β-κ(2-η))/(20m2+54m1)", (7 * g - 15 * b - k * (2 - e)) / d4},
      {"(4.30)", "(8γ-17β+η-κ(1-η))/(20m2+54m1)", (8 * g - 17 * b + e - k * (1 - e)) / d4},
  };
  const auto& w2 = largest(s.m2_components);
  const auto& w3 = largest(s.m3_components);
  const auto& w4 = largest(s.m4_components);
  s.e2 = w2.exponent;
  s.e2_label = w2.label;
  s.e3 = w3.exponent;
  s.e3_label = w3.label;
  s.e4 = w4.exponent;
  s.e4_label = w4.label;

  auto minimum = [&](const BoundComponent& m1, double& value, std::string& label) {
    const std::pair<double, std::string> options[] = {
        {s.e0.exponent, s.e0.label}, {m1.exponent, m1.label}, {s.e2, s.e2_label}, {s.e3, s.e3_label}, {s.e4, s.e4_label}};
    const auto* best = &options[0];
    for (const auto& o : options)
      if (o.first < best->first) best = &o;
    value = best->first;
    label = best->second;
  };
  minimum(s.e1_statement, s.min_exponent, s.min_label);
  minimum(s.e1_proof, s.min_exponent_proof, s.min_label_proof);
  s.slack = {"|log δ|^{O(1)} δ^{O(ε)} multiplies the minimum", "(m0) carries an extra |log δ|^{1/4}"};
  return s;
}

const char* to_string(Regime r) { return r == Regime::Low ? "LOW" : "HIGH"; }

EpsilonRange epsilon_range(double alpha, double beta, double gamma) {
  if (!(beta > 0.0 && beta <= alpha && alpha < 1.0))
    throw std::invalid_argument("epsilon_range: need 0 < beta <= alpha < 1");
  EpsilonRange r;
  r.numerator_a = 4 * gamma - 74 * alpha + 65 * beta + 1;
  r.numerator_b = 6 * gamma - 78 * alpha + 66 * beta;
  r.eps_max = std::min(r.numerator_a / 444, r.numerator_b / 468);
  r.regime = alpha <= (21 * beta + 1) / 22 ? Regime::Low : Regime::High;
  r.gamma_floor = r.regime == Regime::Low ? (78 * alpha - 66 * beta) / 6 : (74 * alpha - 65 * beta - 1) / 4;
  r.gamma_ok = gamma > r.gamma_floor;
  return r;
}

std::vector<std::pair<std::string, double>> gamma_thresholds(const BoundParams& p) {
  const double a = p.alpha, b = p.beta, e = p.eta, k = p.kappa;
  return {
      {"(m0)", 2 * a - b},
      {"(4.3)", 2 * a - 4 * b - k * e},
      {"(4.16)", (74 * a - 66 * b - 1 + 3 * k) / (3 + k)},
      {"(4.17)", (74 * a - 65 * b - 1 + k * (3 - e)) / 4},
      {"(4.18)", (78 * a - 68 * b + 3 * k) / (4 + k)},
      {"(4.19)", (78 * a - 67 * b + k * (2 - e)) / 5},
      {"(4.20)", (78 * a - 66 * b - e + 2 * k) / (5 + k)},
      {"(4.21)", (78 * a - 65 * b - e + k * (1 - e)) / 6},
      {"(4.27)", (97 * a - 83 * b + 3 * k) / (6 + k)},
      {"(4.28)", (97 * a - 81 * b - e + 2 * k) / (7 + k)},
      {"(4.29)", (97 * a - 82 * b + k * (2 - e)) / 7},
      {"(4.30)", (97 * a - 80 * b - e + k * (1 - e)) / 8},
  };
}

Theorem110 theorem110_exponent(double alpha, double beta, double gamma) {
  if (!(alpha + beta > 1.0)) throw std::invalid_argument("theorem110_exponent: requires alpha + beta > 1");
  const double a = alpha, b = beta, g = gamma;
  const double den = 2 * (3 - a - b);
  Theorem110 r;
  r.exponent = (a - 3 * b - 4 * g + 2 * g * (a + b) - a * a + b * b + 2) / den;
  r.sumset_exponent = (-6 * b - 4 * g - 2 * a * a + 4 * a + 2 * b * b + 2 + 2 * g * (a + b)) / den;
  if (a == b) r.equal_form = (-g * (4 - 4 * a) + 2 - 2 * a) / (2 * (3 - 2 * a));
  return r;
}

PlunneckeReport plunnecke_check(const DiscretizedSet& x, std::span<const DiscretizedSet> ys, double constant) {
  if (ys.empty()) throw std::invalid_argument("plunnecke_check: no Y sets");
  const int m = x.scale().m();
  PlunneckeReport r;
  r.constant = constant;
  r.x_cover = covering_number(x, m);
  std::vector<GridSet> sets;
  for (const auto& y : ys) {
    const std::size_t c = covering_number(sumset(x, y), m);
    r.pair_covers.push_back(c);
    r.k_values.push_back(static_cast<double>(c) / static_cast<double>(r.x_cover));
    r.product_k *= r.k_values.back();
    sets.emplace_back(y);
  }
  r.sum_cover = covering_number(iterated_sumset(sets), m);
  r.ratio = static_cast<double>(r.sum_cover) / (r.product_k * static_cast<double>(r.x_cover));
  r.pass = r.ratio <= constant;
  return r;
}

namespace {

RuzsaReport ruzsa_impl(const DiscretizedSet& x, const DiscretizedSet& y, const DiscretizedSet& z, Sign sign,
                       bool exact, int level, double constant) {
  RuzsaReport r;
  r.sign = sign;
  r.exact = exact;
  r.level = level;
  r.constant = constant;
  auto size = [&](const GridSet& s) { return exact ? s.size() : covering_number(s, level); };
  r.xz = size(sumset(x, z, sign));
  r.xy = size(sumset(x, y, sign));
  r.yz = size(sumset(y, z, sign));
  r.y = exact ? y.size() : covering_number(y, level);
  r.ratio = static_cast<double>(r.xz) * static_cast<double>(r.y) /
            (static_cast<double>(r.xy) * static_cast<double>(r.yz));
  // Exact version compared in integers.
  r.pass = exact ? static_cast<i128>(r.xz) * static_cast<i128>(r.y) <= static_cast<i128>(r.xy) * static_cast<i128>(r.yz)
                 : r.ratio <= constant;
  return r;
}

}  // namespace

RuzsaReport ruzsa_check(const DiscretizedSet& x, const DiscretizedSet& y, const DiscretizedSet& z, Sign sign) {
  if (x.empty() || y.empty() || z.empty()) throw std::invalid_argument("ruzsa_check: empty set");
  return ruzsa_impl(x, y, z, sign, true, x.scale().m(), 1.0);
}

RuzsaReport ruzsa_covering_check(const DiscretizedSet& x, const DiscretizedSet& y, const DiscretizedSet& z, Sign sign,
                                 std::optional<int> level, double constant) {
  if (x.empty() || y.empty() || z.empty()) throw std::invalid_argument("ruzsa_check: empty set");
  const int lv = level.value_or(x.scale().m());
  if (lv < 0 || lv > x.scale().m()) throw std::invalid_argument("ruzsa_check: level outside [0, m]");
  return ruzsa_impl(x, y, z, sign, false, lv, constant);
}

}  // namespace sumlab
