#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sumlab/energy.hpp"
#include "sumlab/generators.hpp"
#include "sumlab/random.hpp"

using namespace sumlab;
using testing::ap;
using testing::make;

TEST_SUITE("energy") {
  TEST_CASE("energy examples") {
    const int m = 6;
    CHECK(energy(make(m, {0, 1}), make(m, {0, 1}), testing::one(m)) == 14);
    CHECK(energy(make(m, {9}), make(m, {40}), 17) == 1);
    CHECK(energy(ap(m, 4), ap(m, 4), testing::one(m)) == 124);
  }

  TEST_CASE("two-pointer energy equals the quadruple oracle") {
    Xoshiro256 rng(11);
    for (int t = 0; t < 40; ++t) {
      const int m = 3 + static_cast<int>(rng.below(6));
      std::vector<Index> a, b;
      for (std::uint64_t k = 0, n = 1 + rng.below(9); k < n; ++k) a.push_back(static_cast<Index>(rng.below((1u << m) + 1)));
      for (std::uint64_t k = 0, n = 1 + rng.below(9); k < n; ++k) b.push_back(static_cast<Index>(rng.below((1u << m) + 1)));
      const auto x = make(m, a), y = make(m, b);
      const Index k = static_cast<Index>(rng.below((1u << m) + 1));
      CHECK(energy(x, y, k) == oracle::energy(x, y, Rational::dyadic(k, m)));
    }
  }

  TEST_CASE("exact-collision-free instances have E_c = |A||B|") {
    // Values a + b/2 at least 8δ apart.
    CHECK(energy(make(8, {0, 8}), make(8, {0, 64}), 128) == 4);
  }

  TEST_CASE("energy bounds |A||B| <= E_c <= (|A||B|)^2") {
    Xoshiro256 rng(5);
    for (int t = 0; t < 20; ++t) {
      std::vector<Index> a, b;
      for (std::uint64_t k = 0, n = 1 + rng.below(30); k < n; ++k) a.push_back(static_cast<Index>(rng.below(257)));
      for (std::uint64_t k = 0, n = 1 + rng.below(30); k < n; ++k) b.push_back(static_cast<Index>(rng.below(257)));
      const auto x = make(8, a), y = make(8, b);
      const auto e = energy(x, y, static_cast<Index>(128 + rng.below(129)));
      const auto n = static_cast<std::int64_t>(x.size() * y.size());
      CHECK(e >= n);
      CHECK(e <= n * n);
    }
  }

  TEST_CASE("energy_spectrum examples") {
    const auto one = energy_spectrum(make(4, {0}), make(4, {0}), make(4, {9}));
    CHECK(one.total == 1);
    CHECK(one.K == doctest::Approx(1.0));

    const auto r = energy_spectrum(make(2, {0, 1}), make(2, {0, 1}), make(2, {2}));
    CHECK(r.total == 14);
    CHECK(r.K == doctest::Approx(8.0 / 14.0));
    CHECK(r.k_at_least(Rational(1, 3)));
    CHECK(r.k_within_upper_envelope());
    CHECK_FALSE(r.k_at_least(Rational(4, 7) + Rational(1, 1000)));
    CHECK(r.k_at_most(Rational(4, 7)));
  }

  TEST_CASE("level sets partition C and use the dyadic bands of the mean") {
    const int m = 8;
    const auto a = ap(m, 20, 3), b = ap(m, 16, 5);
    const auto c = make(m, {128, 130, 150, 171, 200, 256});
    const auto r = energy_spectrum(a, b, c);
    std::size_t members = 0;
    for (const auto& l : r.levels) {
      members += l.c_indices.size();
      CHECK(l.rho == doctest::Approx(std::exp2(-l.band)));
      for (Index k : l.c_indices) {
        const auto it = std::find_if(r.per_c.begin(), r.per_c.end(), [&](const auto& p) { return p.first == k; });
        REQUIRE(it != r.per_c.end());
        // 2^N · total <= E_c |C| < 2^(N+1) · total
        const double lhs = static_cast<double>(it->second) * static_cast<double>(c.size());
        CHECK(lhs >= std::exp2(l.band) * static_cast<double>(r.total));
        CHECK(lhs < std::exp2(l.band + 1) * static_cast<double>(r.total));
      }
    }
    CHECK(members == c.size());
    for (std::size_t i = 0; i < r.levels.size(); ++i)
      CHECK(r.levels[i].c_indices.size() <= r.largest().c_indices.size());
  }

  TEST_CASE("workers do not change the report") {
    const auto a = ap(10, 40, 7), b = ap(10, 30, 11);
    const auto c = testing::ap(10, 50, 10, 512);
    const auto r1 = energy_spectrum(a, b, c, {1, false});
    const auto r4 = energy_spectrum(a, b, c, {4, false});
    CHECK(r1.per_c == r4.per_c);
    CHECK(r1.K == r4.K);
  }

  TEST_CASE("prefilter drops below-mean c only") {
    const int m = 8;
    const auto a = ap(m, 16), b = ap(m, 16);
    const auto c = make(m, {128, 131, 256});
    const auto full = energy_spectrum(a, b, c, {1, false});
    const auto pre = energy_spectrum(a, b, c, {1, true});
    CHECK(pre.prefiltered);
    CHECK(pre.total == full.total);
    for (const auto& l : pre.levels) CHECK(l.band >= 0);
  }

  TEST_CASE("K envelope on an AP against 64 slopes") {
    const int m = 12;
    const auto a = ap(m, 1024), b = ap(m, 1024);
    const auto c = ap(m, 64, 32, 2048);
    const auto r = energy_spectrum(a, b, c, {4, false});
    CHECK(r.k_at_least(Rational(1, 3)));
    CHECK(r.k_at_most(Rational(1024)));
    // Reduced-size cross-check against the oracle.
    const auto sa = ap(m, 12), sb = ap(m, 12);
    for (Index k : {2048, 2080, 3000, 4096}) CHECK(energy(sa, sb, k) == oracle::energy(sa, sb, Rational::dyadic(k, m)));
  }

  TEST_CASE("extremal family has K <= 3 at n = 256") {
    const auto t = paper_extremal(256, 8);
    CHECK(k_statistic(t.a, t.b, t.c) <= 3.0);
  }

  TEST_CASE("pi_c covering examples") {
    const std::vector<std::pair<Index, Index>> origin{{0, 0}};
    CHECK(pi_c_covering(origin, 5, Scale(4)) == 1);
    const std::vector<std::pair<Index, Index>> square{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    CHECK(pi_c_covering(square, testing::one(4), Scale(4)) == 3);
    std::vector<std::pair<Index, Index>> diag;
    for (Index i = 0; i < 8; ++i) diag.push_back({i, i});
    CHECK(pi_c_covering(diag, testing::one(4), Scale(4)) == 8);
  }

  TEST_CASE("input errors") {
    CHECK_THROWS_AS(energy_spectrum(make(4, {0}), make(5, {0}), make(4, {9})), std::invalid_argument);
    CHECK_THROWS_AS(energy_spectrum(DiscretizedSet(Scale(4), {}), make(4, {0}), make(4, {9})), std::invalid_argument);
  }
}
