#pragma once

// Closed-form exponents for the lower bounds on K, the ε-range and γ-threshold
// algebra, the incidence-based exponents, and Plünnecke / Ruzsa checkers.
//
// Exponents e mean M = δ^-e.  |log δ|^{O(1)} and δ^{O(ε)} factors are never
// folded into the numbers; they are carried as text in `slack`.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumlab/arith.hpp"
#include "sumlab/gridset.hpp"

namespace sumlab {

struct BoundParams {
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.5;
  double eta = 0.5;
  double kappa = 0.0;  // ε₀
  double epsilon = 0.0;
  double m1 = 1.0;
  double m2 = 7.0;

  // Throws std::invalid_argument naming the offending field.
  void validate(bool require_alpha_ge_beta = true) const;
};

struct BoundComponent {
  std::string label;    // "(4.16)" etc.
  std::string formula;  // numerator / denominator as printed
  double exponent = 0;
};

struct BoundSet {
  BoundParams params;
  BoundComponent e0;            // (m0)
  BoundComponent e1_statement;  // M1 as stated
  BoundComponent e1_proof;      // (4.3)
  std::vector<BoundComponent> m2_components;  // (4.16), (4.17)
  std::vector<BoundComponent> m3_components;  // (4.18)-(4.21)
  std::vector<BoundComponent> m4_components;  // (4.27)-(4.30)
  double e2 = 0, e3 = 0, e4 = 0;
  std::string e2_label, e3_label, e4_label;
  double min_exponent = 0;        // min(e0, e1_statement, e2, e3, e4)
  std::string min_label;
  double min_exponent_proof = 0;  // same with e1_proof
  std::string min_label_proof;
  std::vector<std::string> slack;

  // Every exponent keyed by its label.
  std::vector<std::pair<std::string, double>> labeled() const;
};

BoundSet theorem16_bounds(const BoundParams& p);

enum class Regime { Low, High };
const char* to_string(Regime r);

struct EpsilonRange {
  double eps_max = 0;
  double numerator_a = 0;  // 4γ - 74α + 65β + 1
  double numerator_b = 0;  // 6γ - 78α + 66β
  Regime regime = Regime::Low;
  double gamma_floor = 0;
  bool gamma_ok = false;
};

EpsilonRange epsilon_range(double alpha, double beta, double gamma);

// Twelve labelled lower thresholds on γ.
std::vector<std::pair<std::string, double>> gamma_thresholds(const BoundParams& p);

struct Theorem110 {
  double exponent = 0;          // K >~ δ^exponent
  double sumset_exponent = 0;   // the "some c in C" variant
  std::optional<double> equal_form;  // α = β specialisation, when α == β
};

Theorem110 theorem110_exponent(double alpha, double beta, double gamma);

inline constexpr double kCheckConstant = 8.0;

struct PlunneckeReport {
  std::size_t x_cover = 0;
  std::vector<std::size_t> pair_covers;  // |X + Y_i|_δ
  std::vector<double> k_values;          // K_i
  std::size_t sum_cover = 0;             // |Y_1 + ... + Y_k|_δ
  double product_k = 1;
  double ratio = 0;  // sum_cover / (Π K_i · |X|_δ)
  double constant = kCheckConstant;
  bool pass = false;
};

PlunneckeReport plunnecke_check(const DiscretizedSet& x, std::span<const DiscretizedSet> ys,
                                double constant = kCheckConstant);

struct RuzsaReport {
  Sign sign = Sign::Minus;
  bool exact = true;  // cardinalities; otherwise covering numbers at `level`
  int level = 0;
  std::size_t xz = 0, xy = 0, yz = 0, y = 0;
  double ratio = 0;  // |X∓Z|·|Y| / (|X∓Y|·|Y∓Z|)
  double constant = 1;
  bool pass = false;
};

RuzsaReport ruzsa_check(const DiscretizedSet& x, const DiscretizedSet& y, const DiscretizedSet& z, Sign sign);
// δ-covering version at dyadic level (default: the working scale).
RuzsaReport ruzsa_covering_check(const DiscretizedSet& x, const DiscretizedSet& y, const DiscretizedSet& z, Sign sign,
                                 std::optional<int> level = std::nullopt, double constant = kCheckConstant);

}  // namespace sumlab
