#include <doctest.h>

#include <cstdlib>
#include <set>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sumlab/arith.hpp"
#include "sumlab/random.hpp"

using namespace sumlab;
using testing::ap;
using testing::make;

namespace {

std::vector<Rational> values_of(const GridSet& g) {
  std::vector<Rational> v;
  for (std::size_t k = 0; k < g.size(); ++k) v.push_back(g.value(k));
  return v;
}

// Expands a value multiset into sorted rationals with repetition.
std::vector<Rational> expand(const ValueMultiset& vm) {
  std::vector<Rational> v;
  for (const auto& e : vm.entries())
    for (std::int64_t k = 0; k < e.multiplicity; ++k) v.push_back(Rational(e.value, vm.denominator()));
  return v;
}

std::vector<Rational> rats(int m, std::vector<Index> idx) {
  std::vector<Rational> v;
  for (Index i : idx) v.push_back(Rational::dyadic(i, m));
  return v;
}

}  // namespace

TEST_SUITE("arith") {
  TEST_CASE("sumset examples") {
    const auto s = sumset(make(4, {0, 1}), make(4, {0, 2}));
    CHECK(s.positions() == std::vector<Index>{0, 1, 2, 3});
    CHECK(sumset(ap(6, 8), ap(6, 8)).positions() == GridSet(ap(6, 15)).positions());
    CHECK(sumset(make(4, {0, 3, 12, 15}), make(4, {0, 3, 12, 15})).size() == 9);
  }

  TEST_CASE("differences keep negative positions through the offset") {
    const auto d = sumset(make(4, {0, 5}), make(4, {0, 5}), Sign::Minus);
    CHECK(d.positions() == std::vector<Index>{-5, 0, 5});
    CHECK(d.value(0) == Rational(-5, 16));
  }

  TEST_CASE("sumset matches the oracle on random sets") {
    Xoshiro256 rng(3);
    for (int t = 0; t < 30; ++t) {
      std::vector<Index> a, b;
      for (std::uint64_t k = 0, n = 1 + rng.below(20); k < n; ++k) a.push_back(static_cast<Index>(rng.below(129)));
      for (std::uint64_t k = 0, n = 1 + rng.below(20); k < n; ++k) b.push_back(static_cast<Index>(rng.below(129)));
      const auto x = make(7, a), y = make(7, b);
      CHECK(values_of(sumset(x, y)) == oracle::sumset(oracle::values(x), oracle::values(y)));
      CHECK(values_of(sumset(x, y, Sign::Minus)) == oracle::sumset(oracle::values(x), oracle::values(y), -1));
    }
  }

  TEST_CASE("iterated sumset") {
    const std::vector<GridSet> three{GridSet(ap(5, 3)), GridSet(ap(5, 3)), GridSet(ap(5, 3))};
    CHECK(iterated_sumset(three).size() == 7);
    CHECK_THROWS(iterated_sumset(std::span<const GridSet>{}));
  }

  TEST_CASE("dilate_sum examples") {
    const int m = 5;
    CHECK(expand(dilate_sum(make(m, {0, 1}), testing::one(m), make(m, {0, 1}))) == rats(m, {0, 1, 1, 2}));
    const auto b = make(m, {1, 4, 9});
    const Index k = 12;  // c = 12/32
    std::vector<Rational> cb;
    for (std::size_t i = 0; i < b.size(); ++i) cb.push_back(Rational::dyadic(k, m) * b.value(i));
    const auto vm = dilate_sum(make(m, {0}), k, b);
    CHECK(expand(vm) == cb);
    for (const auto& e : vm.entries()) CHECK(e.multiplicity == 1);

    const auto conv = dilate_sum(ap(m, 4), testing::one(m), ap(m, 4));
    REQUIRE(conv.distinct() == 7);
    for (int s = 0; s <= 6; ++s) {
      CHECK(Rational(conv.entries()[s].value, conv.denominator()) == Rational::dyadic(s, m));
      CHECK(conv.entries()[s].multiplicity == 4 - std::abs(3 - s));
    }
  }

  TEST_CASE("linear_combination examples") {
    const int m = 4;
    const std::vector<GridSet> one_set{GridSet(make(m, {1, 5, 9}))};
    const std::vector<Rational> id{Rational(1)};
    CHECK(expand(linear_combination(id, one_set)) == rats(m, {1, 5, 9}));

    const std::vector<GridSet> two{GridSet(make(m, {0, 1})), GridSet(make(m, {0, 1}))};
    const std::vector<Rational> ones{Rational(1), Rational(1)};
    CHECK(expand(linear_combination(ones, two)) == rats(m, {0, 1, 1, 2}));

    const std::vector<GridSet> evens{GridSet(make(m, {0, 2})), GridSet(make(m, {0, 2}))};
    const std::vector<Rational> halves{Rational(1, 2), Rational(1, 2)};
    CHECK(expand(linear_combination(halves, evens)) == rats(m, {0, 1, 1, 2}));

    CHECK_THROWS_AS(linear_combination(ones, std::span<const GridSet>(two.data(), 1)), std::invalid_argument);
    CHECK_THROWS_AS(linear_combination(ones, two, 3), std::invalid_argument);
  }

  TEST_CASE("SUMLAB_CAP overrides caps") {
    ::setenv("SUMLAB_CAP", "5", 1);
    CHECK(effective_cap(1000) == 5);
    ::setenv("SUMLAB_CAP", "junk", 1);
    CHECK(effective_cap(1000) == 1000);
    ::unsetenv("SUMLAB_CAP");
    CHECK(effective_cap(1000) == 1000);
  }

  TEST_CASE("ratio_set examples") {
    const int m = 8;
    const auto two = ratio_set(GridSet(make(m, {0, 128})), 0.25);
    std::vector<Rational> unit;
    for (const auto& r : two.ratios)
      if (r >= Rational(0) && r <= Rational(1)) unit.push_back(r);
    CHECK(unit == std::vector<Rational>{Rational(0), Rational(1)});

    const auto single = ratio_set(GridSet(make(m, {17})), 0.25);
    CHECK(single.ratios.empty());
    CHECK_FALSE(single.diagnostic.empty());

    const auto three = ratio_set(GridSet(make(m, {0, 64, 128})), 0.25);
    CHECK(three.contains(Rational(1, 2)));
    CHECK_THROWS_AS(ratio_set(GridSet(make(m, {0, 1})), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ratio_set(GridSet(make(m, {0, 1})), 0.0), std::invalid_argument);
  }

  TEST_CASE("ratio_set agrees with quadruple enumeration") {
    const int m = 8;
    const auto d = make(m, {0, 20, 64, 65, 130, 200});
    const double kappa = 0.25;
    const auto rs = ratio_set(GridSet(d), kappa);
    const Rational thr = Rational::dyadic(1, 2);  // δ^κ = 2^-2
    std::set<Rational> want;
    const auto v = oracle::values(d);
    for (const auto& a : v)
      for (const auto& b : v)
        for (const auto& c : v)
          for (const auto& e : v)
            if (abs(c - e) > thr) want.insert((a - b) / (c - e));
    CHECK(rs.ratios == std::vector<Rational>(want.begin(), want.end()));
    CHECK_FALSE(rs.truncated);
  }
}
