#pragma once

// Executable structural machinery: Cauchy–Schwarz pigeonholing, constructive
// Balog–Szemerédi–Gowers, the good-subset extraction B', C', c*, the Bourgain
// intersection set D = (B' - b1) ∩ (b2 - b3)C', and the dense/gap dichotomy of
// the ratio set R(D).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumlab/arith.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/gridset.hpp"
#include "sumlab/rational.hpp"

namespace sumlab {

class StageError : public std::runtime_error {
public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

// ---------------------------------------------------------------------------
// Cauchy–Schwarz pigeonhole

struct PigeonholeResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // ordered (s, s')
  double delta_param = 0;
  double pair_threshold = 0;   // δ²|T|/2
  double guaranteed_pairs = 0; // δ²|S|²/2
  std::int64_t universe_size = 0;
  i128 sum_sizes = 0;          // Σ|T_s|
  i128 sum_intersections = 0;  // Σ_{s,s'} |T_s ∩ T_s'|
  // (Σ|T_s|)² <= |T| Σ|T_s ∩ T_s'|
  bool cs_inequality = false;
};

using IntersectionFn = std::function<std::int64_t(std::size_t, std::size_t)>;

// Family given through its intersection sizes (|T_s| = intersection(s, s)).
PigeonholeResult cs_pigeonhole(std::size_t family_size, std::int64_t universe_size,
                               const IntersectionFn& intersection, double delta_param);
// Family of explicit sorted subsets of {0, ..., universe_size - 1}.
PigeonholeResult cs_pigeonhole(std::span<const std::vector<std::int64_t>> family, std::int64_t universe_size,
                               double delta_param);

// ---------------------------------------------------------------------------
// Balog–Szemerédi–Gowers

struct BsgReport {
  std::int64_t energy = 0;
  double k_hint = 0;
  std::size_t occupied_cells = 0;
  std::size_t popular_cells = 0;
  std::size_t edges = 0;
  Index pivot = 0;  // the b whose neighbourhood seeds A'
  std::size_t a_size = 0, b_size = 0, a_prime_size = 0, b_prime_size = 0;
  std::size_t sumset_cover = 0;  // |A' + cB'|_δ
  double a_fraction = 0, b_fraction = 0;
  double sumset_ratio = 0;  // |A' + cB'|_δ / sqrt(|A||B|)
  // log-ratios against K_hint: |A'| = K^-a|A|, |B'| = K^-b|B|, |A'+cB'|_δ = K^s sqrt(|A||B|).
  // NaN when K_hint <= 1.
  double a_exponent = 0, b_exponent = 0, sumset_exponent = 0;
};

struct BsgResult {
  DiscretizedSet a_prime;
  DiscretizedSet b_prime;
  BsgReport report;
};

// Requires energy(A, B, c) >= (|A||B|)^{3/2} / K_hint.
BsgResult bsg_extract(const DiscretizedSet& a, const DiscretizedSet& b, Index k, double k_hint);

// ---------------------------------------------------------------------------
// Good subsets B', C', c*

struct StructuralVerification {
  std::size_t b_prime_size = 0, b_size = 0, c_prime_size = 0, c_size = 0;
  std::size_t sum_cover = 0;         // |B' + B'|_δ
  std::size_t diff_cover = 0;        // |B' - B'|_δ
  std::size_t dilate_cover_max = 0;  // max_{c in C'} |c*B' + cB'|_δ
  Index dilate_argmax = 0;
  double sum_ratio = 0, diff_ratio = 0, dilate_ratio = 0;
  double b_fraction = 0, c_fraction = 0;
  double rho_k = 0;
  double log_inv_delta = 0;
  double m1 = 1, m2 = 7;
  // Fitted exponents e with measured = (ρK)^e; NaN when ρK <= 1.
  double sum_exponent = 0;     // vs 2m2 + 2m1
  double dilate_exponent = 0;  // vs 4m2 + 6m1 (statement) and 4m2 + 5m1 (proof)
  double b_exponent = 0;       // vs -m1
  double c_exponent = 0;       // of |C'|·|log δ| / (ρ|C|), vs -4m1
};

struct StructuralDecomposition {
  DiscretizedSet b_prime;
  DiscretizedSet c_prime;
  DiscretizedSet a_prime;
  Index c_star = 0;
  int band = 0;
  double rho = 1;
  double K = 0;
  std::vector<Index> level_set;  // C1
  std::size_t pigeonhole_pairs = 0;
  double pigeonhole_delta = 0;
  StructuralVerification verification;
};

struct StructuralOptions {
  unsigned workers = 1;
  bool prefilter_low_energy = false;
  double m1 = 1;
  double m2 = 7;
};

StructuralDecomposition structural_extract(const DiscretizedSet& a, const DiscretizedSet& b,
                                           const DiscretizedSet& c, const StructuralOptions& options = {});

// Ratios of a decomposition recomputed from its component sets.
StructuralVerification measure_decomposition(const DiscretizedSet& b, const DiscretizedSet& c,
                                             const DiscretizedSet& b_prime, const DiscretizedSet& c_prime,
                                             Index c_star, double rho, double K, double m1, double m2);

// ---------------------------------------------------------------------------
// Bourgain intersection: |(X - x1) ∩ (x2 - x3)Y| >~ |X||Y| / M

struct TripleSearchResult {
  Index x1 = 0, x2 = 0, x3 = 0;  // grid indices of the chosen triple
  GridSet d;                     // D ⊆ X - x1
  std::size_t m_value = 0;       // M = max_y |X + yX|
  double ratio = 0;              // |D|·M / (|X||Y|)
  bool truncated = false;
  std::uint64_t triples_examined = 0;
  std::string diagnostic;
};

// Membership is δ/2-tolerant: y contributes the lowest point of X - x1 within
// δ/2 of (x2 - x3)y.  Exhaustive when |X|³|Y| <= cap, else seeded sampling.
TripleSearchResult bourgain_triple_search(const DiscretizedSet& x, const DiscretizedSet& y,
                                          std::uint64_t cap = kDefaultTripleCap, std::uint64_t seed = 0);

// |(X - x1) ∩ (x2 - x3)Y| under the same convention, for one triple.
GridSet bourgain_intersection(const DiscretizedSet& x, const DiscretizedSet& y, Index x1, Index x2, Index x3);

struct BuildDResult {
  Index b1 = 0, b2 = 0, b3 = 0;
  GridSet d;
  TripleSearchResult search;
};

BuildDResult build_D(const DiscretizedSet& b_prime, const DiscretizedSet& c_prime,
                     std::uint64_t cap = kDefaultTripleCap, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Dense / gap dichotomy

enum class Branch { Gap, Dense, Neither };
const char* to_string(Branch b);

struct GapWitness {
  Rational r;
  bool uses_r_plus_one = false;  // point is (r+1)/2 rather than r/2
  Rational point;
  Rational distance;  // dist(point, R) >= s
  Rational e1, e2;    // point = e1/e2 with r = x1/x2, e2 = 2·x2
};

struct DenseGapReport {
  Branch branch = Branch::Neither;
  std::optional<GapWitness> witness;
  std::size_t density = 0;  // |R ∩ [0,1]|_s
  int s_level = 0;          // s = 2^-s_level
  double s = 0;
  double kappa = 0;
  double threshold = 0;
  Rational b2_minus_b3;
  RatioSet ratios;
  std::vector<Rational> unit_ratios;  // R ∩ [0,1]
  std::string diagnostic;
};

inline constexpr double kDefaultDenseThreshold = 0.125;

DenseGapReport dense_gap_analyze(const GridSet& d_tilde, double kappa, const Rational& b2_minus_b3,
                                 double threshold = kDefaultDenseThreshold,
                                 std::uint64_t cap = kDefaultQuadrupleCap, std::uint64_t seed = 0);

// Linear rescan of every stored ratio: min |point - r| >= s.
bool recheck_gap_witness(const DenseGapReport& report);

// ---------------------------------------------------------------------------
// structural_extract -> build_D -> dense_gap_analyze

struct PipelineOptions {
  StructuralOptions structural;
  double kappa = 0.25;
  double dense_threshold = kDefaultDenseThreshold;
  std::uint64_t triple_cap = kDefaultTripleCap;
  std::uint64_t quadruple_cap = kDefaultQuadrupleCap;
  std::uint64_t seed = 0;
};

struct PipelineTrace {
  StructuralDecomposition decomposition;
  BuildDResult d;
  std::optional<DenseGapReport> dichotomy;  // absent when D is empty
  std::string diagnostic;
};

PipelineTrace run_pipeline(const DiscretizedSet& a, const DiscretizedSet& b, const DiscretizedSet& c,
                           const PipelineOptions& options = {});

}  // namespace sumlab
