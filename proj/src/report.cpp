#include "sumlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace sumlab {

namespace {

void dump_into(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_into(out, it.value(), indent, depth + 1);
      }
      out += nl;
      out += close;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalars = true;
      for (const auto& v : j) scalars = scalars && !v.is_structured();
      out += "[";
      if (!scalars) out += nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) {
          out += ",";
          if (!scalars) out += nl;
          else if (indent > 0) out += " ";
        }
        first = false;
        if (!scalars) out += pad;
        dump_into(out, v, indent, depth + 1);
      }
      if (!scalars) {
        out += nl;
        out += close;
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_real(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json tolerance_json(const Tolerance& t) { return t ? to_json(*t) : Json("inf"); }

}  // namespace

std::string format_real(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::string dump_stable(const Json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  return out;
}

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const DiscretizedSet& x) {
  return {{"m", x.scale().m()}, {"size", x.size()}, {"indices", std::vector<Index>(x.indices().begin(), x.indices().end())}};
}

Json to_json(const GridSet& x) {
  return {{"m", x.scale().m()}, {"size", x.size()}, {"positions", x.positions()}};
}

Json to_json(const FrostmanProfile& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows)
    rows.push_back({{"level", r.level},
                    {"radius", real(r.radius)},
                    {"worst_center", real(r.worst_center)},
                    {"worst_count", r.worst_count},
                    {"ratio", real(r.ratio)}});
  return {{"sigma", real(p.sigma)},   {"cap", real(p.cap)},           {"set_size", p.set_size},
          {"rows", rows},             {"max_ratio", real(p.max_ratio)}, {"best_exponent", real(p.best_exponent)}};
}

Json to_json(const EnergyReport& r) {
  Json per_c = Json::array();
  for (const auto& [k, e] : r.per_c) per_c.push_back({{"c_index", k}, {"energy", e}});
  Json levels = Json::array();
  for (const auto& l : r.levels) levels.push_back({{"band", l.band}, {"rho", real(l.rho)}, {"c_indices", l.c_indices}});
  return {{"a_size", r.a_size},
          {"b_size", r.b_size},
          {"c_size", r.c_size},
          {"per_c", per_c},
          {"total", r.total},
          {"K", real(r.K)},
          {"levels", levels},
          {"largest_level", r.levels.empty() ? Json(nullptr) : Json(r.largest().band)},
          {"prefiltered", r.prefiltered},
          {"k_within_envelope", r.k_within_upper_envelope() && r.k_at_least(Rational(1, 3))}};
}

Json to_json(const RatioSet& r) {
  Json ratios = Json::array();
  for (const auto& q : r.ratios) ratios.push_back(q.str());
  return {{"source", r.source},
          {"kappa", real(r.kappa)},
          {"threshold", real(r.threshold)},
          {"size", r.ratios.size()},
          {"ratios", ratios},
          {"truncated", r.truncated},
          {"quadruples_examined", r.quadruples_examined},
          {"diagnostic", r.diagnostic}};
}

Json to_json(const BsgReport& r) {
  return {{"energy", r.energy},
          {"k_hint", real(r.k_hint)},
          {"occupied_cells", r.occupied_cells},
          {"popular_cells", r.popular_cells},
          {"edges", r.edges},
          {"pivot", r.pivot},
          {"a_size", r.a_size},
          {"b_size", r.b_size},
          {"a_prime_size", r.a_prime_size},
          {"b_prime_size", r.b_prime_size},
          {"sumset_cover", r.sumset_cover},
          {"a_fraction", real(r.a_fraction)},
          {"b_fraction", real(r.b_fraction)},
          {"sumset_ratio", real(r.sumset_ratio)},
          {"a_exponent", real(r.a_exponent)},
          {"b_exponent", real(r.b_exponent)},
          {"sumset_exponent", real(r.sumset_exponent)}};
}

Json to_json(const StructuralVerification& v) {
  return {{"b_prime_size", v.b_prime_size},
          {"b_size", v.b_size},
          {"c_prime_size", v.c_prime_size},
          {"c_size", v.c_size},
          {"sum_cover", v.sum_cover},
          {"diff_cover", v.diff_cover},
          {"dilate_cover_max", v.dilate_cover_max},
          {"dilate_argmax", v.dilate_argmax},
          {"sum_ratio", real(v.sum_ratio)},
          {"diff_ratio", real(v.diff_ratio)},
          {"dilate_ratio", real(v.dilate_ratio)},
          {"b_fraction", real(v.b_fraction)},
          {"c_fraction", real(v.c_fraction)},
          {"rho_k", real(v.rho_k)},
          {"log_inv_delta", real(v.log_inv_delta)},
          {"m1", real(v.m1)},
          {"m2", real(v.m2)},
          {"fitted",
           {{"sum_exponent", real(v.sum_exponent)},
            {"dilate_exponent", real(v.dilate_exponent)},
            {"b_exponent", real(v.b_exponent)},
            {"c_exponent", real(v.c_exponent)}}},
          {"theory",
           {{"sum_exponent", real(2 * v.m2 + 2 * v.m1)},
            {"dilate_exponent_statement", real(4 * v.m2 + 6 * v.m1)},
            {"dilate_exponent_proof", real(4 * v.m2 + 5 * v.m1)},
            {"b_exponent", real(-v.m1)},
            {"c_exponent", real(-4 * v.m1)}}}};
}

Json to_json(const StructuralDecomposition& d) {
  return {{"b_prime", to_json(d.b_prime)},
          {"c_prime", to_json(d.c_prime)},
          {"a_prime", to_json(d.a_prime)},
          {"c_star", d.c_star},
          {"band", d.band},
          {"rho", real(d.rho)},
          {"K", real(d.K)},
          {"level_set", d.level_set},
          {"pigeonhole_pairs", d.pigeonhole_pairs},
          {"pigeonhole_delta", real(d.pigeonhole_delta)},
          {"verification", to_json(d.verification)}};
}

Json to_json(const TripleSearchResult& r) {
  return {{"x1", r.x1},
          {"x2", r.x2},
          {"x3", r.x3},
          {"d", to_json(r.d)},
          {"M", r.m_value},
          {"ratio", real(r.ratio)},
          {"truncated", r.truncated},
          {"triples_examined", r.triples_examined},
          {"diagnostic", r.diagnostic}};
}

Json to_json(const BuildDResult& r) {
  return {{"b1", r.b1}, {"b2", r.b2}, {"b3", r.b3}, {"d", to_json(r.d)}, {"search", to_json(r.search)}};
}

Json to_json(const DenseGapReport& r) {
  Json j = {{"branch", to_string(r.branch)},
            {"density", r.density},
            {"s", real(r.s)},
            {"s_level", r.s_level},
            {"kappa", real(r.kappa)},
            {"threshold", real(r.threshold)},
            {"b2_minus_b3", to_json(r.b2_minus_b3)},
            {"ratios", to_json(r.ratios)},
            {"unit_ratio_count", r.unit_ratios.size()},
            {"diagnostic", r.diagnostic}};
  if (r.witness) {
    const auto& w = *r.witness;
    j["gap_witness"] = {{"r", to_json(w.r)},
                        {"which", w.uses_r_plus_one ? "(r+1)/2" : "r/2"},
                        {"point", to_json(w.point)},
                        {"distance", to_json(w.distance)},
                        {"e1", to_json(w.e1)},
                        {"e2", to_json(w.e2)}};
  } else {
    j["gap_witness"] = nullptr;
  }
  return j;
}

Json to_json(const PipelineTrace& t) {
  return {{"decomposition", to_json(t.decomposition)},
          {"d", to_json(t.d)},
          {"dichotomy", t.dichotomy ? to_json(*t.dichotomy) : Json(nullptr)},
          {"diagnostic", t.diagnostic}};
}

Json to_json(const IncidenceReport& r) {
  Json j = {{"point_count", r.point_count},
            {"line_count", r.line_count},
            {"tolerance", tolerance_json(r.tolerance)},
            {"mode", r.mode == DistanceMode::Euclidean ? "euclidean" : "vertical"},
            {"incidences", r.incidences},
            {"st_constant", real(r.st_constant)},
            {"st_bound", real(r.st_bound)},
            {"st_pass", r.st_pass},
            {"consistent", r.consistent()}};
  if (r.has_dov)
    j["dov"] = {{"t", real(r.t)},
                {"M", real(r.frostman_m)},
                {"delta", real(r.delta)},
                {"d", 2},
                {"n", 1},
                {"shape", real(r.dov_shape)},
                {"c_fit", real(r.c_fit)},
                {"c_fit_supplied", r.c_fit_supplied},
                {"bound", real(r.dov_bound)},
                {"pass", r.dov_pass}};
  return j;
}

Json to_json(const EnergyIncidence& r) {
  return {{"incidences", r.incidences}, {"energy_total", r.energy_total}, {"match", r.match}};
}

Json to_json(const BoundParams& p) {
  return {{"alpha", real(p.alpha)}, {"beta", real(p.beta)},       {"gamma", real(p.gamma)}, {"eta", real(p.eta)},
          {"kappa", real(p.kappa)}, {"epsilon", real(p.epsilon)}, {"m1", real(p.m1)},       {"m2", real(p.m2)}};
}

Json to_json(const BoundSet& b) {
  Json exponents = Json::object();
  Json formulas = Json::object();
  for (const auto& [label, value] : b.labeled()) exponents[label] = real(value);
  auto add = [&](const BoundComponent& c) { formulas[c.label] = c.formula; };
  add(b.e0);
  add(b.e1_statement);
  add(b.e1_proof);
  for (const auto* g : {&b.m2_components, &b.m3_components, &b.m4_components})
    for (const auto& c : *g) add(c);
  Json feasible = Json::object();
  for (const auto& [label, value] : b.labeled()) feasible[label] = value > 0;
  return {{"params", to_json(b.params)},
          {"exponents", exponents},
          {"formulas", formulas},
          {"branches",
           {{"M0", {{"exponent", real(b.e0.exponent)}, {"label", b.e0.label}}},
            {"M1", {{"exponent", real(b.e1_statement.exponent)}, {"label", b.e1_statement.label}}},
            {"M1_proof", {{"exponent", real(b.e1_proof.exponent)}, {"label", b.e1_proof.label}}},
            {"M2", {{"exponent", real(b.e2)}, {"label", b.e2_label}}},
            {"M3", {{"exponent", real(b.e3)}, {"label", b.e3_label}}},
            {"M4", {{"exponent", real(b.e4)}, {"label", b.e4_label}}}}},
          {"min", real(b.min_exponent)},
          {"min_label", b.min_label},
          {"min_with_proof_m1", real(b.min_exponent_proof)},
          {"min_label_with_proof_m1", b.min_label_proof},
          {"feasible", feasible},
          {"slack", b.slack}};
}

Json to_json(const EpsilonRange& e) {
  return {{"eps_max", real(e.eps_max)},
          {"numerator_a", real(e.numerator_a)},
          {"numerator_b", real(e.numerator_b)},
          {"regime", to_string(e.regime)},
          {"gamma_floor", real(e.gamma_floor)},
          {"gamma_ok", e.gamma_ok},
          {"nonempty", e.eps_max > 0}};
}

Json gamma_thresholds_json(const BoundParams& p) {
  Json thresholds = Json::object();
  Json satisfied = Json::object();
  for (const auto& [label, value] : gamma_thresholds(p)) {
    thresholds[label] = real(value);
    satisfied[label] = p.gamma > value;
  }
  return {{"params", to_json(p)}, {"thresholds", thresholds}, {"gamma_exceeds", satisfied}};
}

Json to_json(const Theorem110& t) {
  return {{"exponent", real(t.exponent)},
          {"sumset_exponent", real(t.sumset_exponent)},
          {"equal_form", t.equal_form ? real(*t.equal_form) : Json(nullptr)}};
}

Json to_json(const PlunneckeReport& r) {
  return {{"x_cover", r.x_cover},     {"pair_covers", r.pair_covers}, {"k_values", r.k_values},
          {"sum_cover", r.sum_cover}, {"product_k", real(r.product_k)}, {"ratio", real(r.ratio)},
          {"constant", real(r.constant)}, {"pass", r.pass}};
}

Json to_json(const RuzsaReport& r) {
  return {{"sign", r.sign == Sign::Plus ? "+" : "-"},
          {"exact", r.exact},
          {"level", r.level},
          {"xz", r.xz},
          {"xy", r.xy},
          {"yz", r.yz},
          {"y", r.y},
          {"ratio", real(r.ratio)},
          {"constant", real(r.constant)},
          {"pass", r.pass}};
}

Json to_json(const FamilySpec& s) {
  Json j = {{"kind", to_string(s.kind)}, {"m", s.m}, {"upper_half", s.upper_half}};
  switch (s.kind) {
    case FamilyKind::AP:
      j["start"] = s.start;
      j["step"] = s.step;
      j["length"] = s.length;
      break;
    case FamilyKind::Cantor:
      if (s.levels.empty()) {
        j["base"] = s.base;
        j["digits"] = s.digits;
        j["depth"] = s.depth;
      } else {
        Json levels = Json::array();
        for (const auto& l : s.levels) levels.push_back({{"base", l.base}, {"digits", l.digits}});
        j["levels"] = levels;
      }
      break;
    case FamilyKind::RandomFrostman:
      j["sigma"] = real(s.sigma);
      j["seed"] = s.seed;
      break;
    case FamilyKind::PaperExtremal:
      j["n"] = s.n;
      j["part"] = s.part == ExtremalPart::A ? "A" : s.part == ExtremalPart::B ? "B" : "C";
      break;
    case FamilyKind::FullGrid:
      j["step"] = s.step;
      break;
    case FamilyKind::Union: {
      Json parts = Json::array();
      for (const auto& p : s.parts) parts.push_back(to_json(p));
      j["parts"] = parts;
      break;
    }
  }
  return j;
}

std::string energy_csv(const EnergyReport& r) {
  std::ostringstream out;
  out << "c_index,energy\n";
  for (const auto& [k, e] : r.per_c) out << k << ',' << e << '\n';
  return out.str();
}

std::string incidence_csv(const IncidenceReport& r) {
  std::ostringstream out;
  out << "point_count,line_count,tolerance,incidences,st_bound,st_pass,dov_bound,dov_pass\n";
  out << r.point_count << ',' << r.line_count << ',' << (r.tolerance ? r.tolerance->str() : "inf") << ','
      << r.incidences << ',' << format_real(r.st_bound) << ',' << (r.st_pass ? 1 : 0) << ','
      << (r.has_dov ? format_real(r.dov_bound) : "") << ',' << (r.has_dov ? (r.dov_pass ? "1" : "0") : "") << '\n';
  return out.str();
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace sumlab
