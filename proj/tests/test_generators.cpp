#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sumlab/arith.hpp"
#include "sumlab/generators.hpp"

using namespace sumlab;

TEST_SUITE("generators") {
  TEST_CASE("AP") {
    FamilySpec s;
    s.kind = FamilyKind::AP;
    s.m = 6;
    s.length = 8;
    CHECK(generate(s) == testing::ap(6, 8));
    s.step = 10;
    CHECK_THROWS_AS(generate(s), std::invalid_argument);  // runs past 1
  }

  TEST_CASE("Cantor base 4, digits {0,3}, depth 5") {
    FamilySpec s;
    s.kind = FamilyKind::Cantor;
    s.m = 10;
    s.base = 4;
    s.digits = {0, 3};
    s.depth = 5;
    const auto x = generate(s);
    CHECK(x.size() == 32);
    for (int j = 0; j <= 5; ++j) CHECK(covering_number(x, 2 * j) == (std::size_t{1} << j));
    CHECK(nominal_dimension(s) == doctest::Approx(0.5));
    s.depth = 6;
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
    s.depth = 2;
    s.base = 6;
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
  }

  TEST_CASE("Cantor with explicit levels") {
    FamilySpec s;
    s.kind = FamilyKind::Cantor;
    s.m = 8;
    s.levels = {{4, {0, 1, 2, 3}}, {4, {0, 3}}, {16, {0, 15}}};
    const auto x = generate(s);
    CHECK(x.size() == 16);
    CHECK(covering_number(x, 2) == 4);
    CHECK(covering_number(x, 4) == 8);
    CHECK(nominal_dimension(s) == doctest::Approx(std::log2(16.0) / 8));
  }

  TEST_CASE("random Frostman sets carry a certificate") {
    FamilySpec s;
    s.kind = FamilyKind::RandomFrostman;
    s.m = 10;
    for (double sigma : {0.3, 0.5, 0.7, 0.9}) {
      s.sigma = sigma;
      s.seed = 12;
      const auto g = generate_certified(s);
      CHECK(g.certificate.max_ratio <= 8.0);
      CHECK(g.certificate.sigma == sigma);
      CHECK(generate_certified(s).set == g.set);
      // About 2^(σm) points.
      CHECK(static_cast<double>(g.set.size()) >= std::exp2(sigma * 10) - 1);
      CHECK(static_cast<double>(g.set.size()) <= 2 * std::exp2(sigma * 10) + 1);
    }
    s.sigma = 0;
    CHECK_THROWS_AS(generate(s), std::invalid_argument);
  }

  TEST_CASE("extremal family at n = 2^8") {
    const auto t = paper_extremal(256, 8);
    CHECK(t.a.size() == 16);
    CHECK(t.b.size() == 4);
    CHECK(t.c.size() == 4);
    for (Index k : t.c.indices()) CHECK(covering_number(dilate_sum(t.a, k, t.b), 8) <= 2 * t.a.size());
    CHECK_THROWS_AS(paper_extremal(100, 8), std::invalid_argument);
    CHECK_THROWS_AS(paper_extremal(1u << 16, 6), std::invalid_argument);
  }

  TEST_CASE("upper half translation") {
    FamilySpec s;
    s.kind = FamilyKind::AP;
    s.m = 6;
    s.length = 5;
    s.step = 2;
    s.upper_half = true;
    const auto x = generate(s);
    CHECK(x == testing::make(6, {32, 34, 36, 38, 40}));
  }

  TEST_CASE("union and full grid") {
    FamilySpec g;
    g.kind = FamilyKind::FullGrid;
    g.m = 4;
    g.step = 4;
    CHECK(generate(g) == testing::make(4, {0, 4, 8, 12, 16}));
    FamilySpec a;
    a.kind = FamilyKind::AP;
    a.m = 4;
    a.start = 1;
    a.length = 2;
    FamilySpec u;
    u.kind = FamilyKind::Union;
    u.m = 4;
    u.parts = {g, a};
    CHECK(generate(u) == testing::make(4, {0, 1, 2, 4, 8, 12, 16}));
  }

  TEST_CASE("family names round trip") {
    for (FamilyKind k : {FamilyKind::AP, FamilyKind::Cantor, FamilyKind::RandomFrostman, FamilyKind::PaperExtremal,
                         FamilyKind::FullGrid, FamilyKind::Union})
      CHECK(family_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(family_kind_from_string("SPIRAL"), std::invalid_argument);
  }

  TEST_CASE("corpus") {
    const auto c1 = corpus(1);
    const auto c2 = corpus(1);
    REQUIRE(c1.size() == 20);
    for (std::size_t i = 0; i < c1.size(); ++i) {
      const auto& e = c1[i];
      INFO(e.name);
      CHECK(e.a.set == c2[i].a.set);
      CHECK(e.b.set == c2[i].b.set);
      CHECK(e.c.set == c2[i].c.set);
      CHECK(e.a.certificate.set_size == e.a.set.size());
      CHECK(e.c.set.indices().front() >= Scale(e.m).steps() / 2);
      CHECK(e.c.set.indices().back() <= Scale(e.m).steps());
      for (const auto* s : {&e.a, &e.b, &e.c}) {
        CHECK(s->set.scale().m() == e.m);
        if (s->spec.kind == FamilyKind::RandomFrostman) CHECK(s->certificate.max_ratio <= 8.0);
      }
    }
    CHECK_FALSE(corpus(2)[3].a.set == c1[3].a.set);
  }
}
