#pragma once

// Deterministic and seeded set families: arithmetic progressions, dyadic
// Cantor sets, random Frostman sets, the extremal triple A_n, B_n, C_n, and
// the test corpus built from them.

#include <cstdint>
#include <string>
#include <vector>

#include "sumlab/gridset.hpp"

namespace sumlab {

enum class FamilyKind { AP, Cantor, RandomFrostman, PaperExtremal, FullGrid, Union };
const char* to_string(FamilyKind k);
FamilyKind family_kind_from_string(const std::string& s);

enum class ExtremalPart { A, B, C };

struct CantorLevel {
  int base = 4;  // a power of two
  std::vector<int> digits;
  friend bool operator==(const CantorLevel&, const CantorLevel&) = default;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::AP;
  int m = 8;

  // AP: {start + i·step : 0 <= i < length} (grid indices)
  Index start = 0;
  Index step = 1;
  Index length = 0;

  // CANTOR: Σ_j d_j base^-j over `depth` levels, or the explicit `levels`.
  int base = 4;
  std::vector<int> digits;
  int depth = 0;
  std::vector<CantorLevel> levels;

  // RANDOM_FROSTMAN
  double sigma = 0.5;
  std::uint64_t seed = 0;
  int max_retries = 16;

  // PAPER_EXTREMAL: n = 2^(4k)
  std::uint64_t n = 0;
  ExtremalPart part = ExtremalPart::A;

  // UNION
  std::vector<FamilySpec> parts;

  // Build at scale m-1 and translate by 1/2, giving a subset of [1/2, 1].
  bool upper_half = false;
};

struct GeneratedSet {
  DiscretizedSet set;
  FrostmanProfile certificate;  // at spec.sigma for RANDOM_FROSTMAN, else at the nominal dimension
  int retries = 0;
};

DiscretizedSet generate(const FamilySpec& spec);
GeneratedSet generate_certified(const FamilySpec& spec);

// Nominal dimension of a family: log|digits| / log base for Cantor sets, σ
// for random sets, 1 otherwise.
double nominal_dimension(const FamilySpec& spec);

struct ExtremalTriple {
  DiscretizedSet a, b, c;
};

// A_n = {i/√n}, B_n = C_n = {i/n^{1/4}}, i >= 1, on the grid of scale m.
ExtremalTriple paper_extremal(std::uint64_t n, int m);

struct CorpusSet {
  std::string role;  // "A", "B" or "C"
  FamilySpec spec;
  DiscretizedSet set;
  FrostmanProfile certificate;
  int retries = 0;
};

struct CorpusEntry {
  std::string name;
  int m = 0;
  CorpusSet a, b, c;
};

// Twenty triples at m in {8, 10, 12}; every C lies in [1/2, 1].
std::vector<CorpusEntry> corpus(std::uint64_t seed);

}  // namespace sumlab
