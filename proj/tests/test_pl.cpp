// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cuf/instances.hpp"
#include "cuf/pl.hpp"

using namespace cuf;

namespace {

// deterministic strictly-piecewise-monotone surjection fixing 0->0, 1->1,
// with at most `max_bp` interior breakpoints on a 1/16 value grid
PLSurjection random_zigzag(std::mt19937_64& rng, int max_bp) {
  std::uniform_int_distribution<int> nbp(0, max_bp);
  int k = nbp(rng);
  std::vector<std::pair<Rat, Rat>> pts;
  pts.emplace_back(Rat(0), Rat(0));
  std::uniform_int_distribution<int> val(1, 15);
  Rat prev_y(0);
  for (int i = 1; i <= k; ++i) {
    Rat x(i, k + 1);
    Rat y;
    do {
      y = Rat(val(rng), 16);
    } while (y == prev_y);  // no flat piece
    pts.emplace_back(x, y);
    prev_y = y;
  }
  pts.emplace_back(Rat(1), Rat(1));
  if (prev_y == Rat(1)) pts[pts.size() - 2].second = Rat(15, 16);
  return PLSurjection::from_pairs(std::move(pts));
}

}  // namespace

TEST_CASE("PLSurjection construction, evaluation and normalization") {
  PLSurjection id = PLSurjection::identity();
  CHECK(id.eval(Rat(1, 3)) == Rat(1, 3));

  PLSurjection f = PLSurjection::from_pairs(
      {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}});
  CHECK(f.eval(Rat(1, 4)) == Rat(1, 2));
  CHECK(f.eval(Rat(3, 4)) == Rat(1, 2));

  // collinear middle point is merged away
  PLSurjection g = PLSurjection::from_pairs(
      {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1, 2)}, {Rat(1), Rat(1)}});
  CHECK(g.normalized().xs.size() == 2);

  // flat piece rejected
  CHECK_THROWS(PLSurjection::from_pairs(
      {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1, 2)}, {Rat(3, 4), Rat(1, 2)}, {Rat(1), Rat(1)}})
                   .validate());
  // non-surjective (never reaches 1) rejected
  CHECK_THROWS(PLSurjection::from_pairs(
      {{Rat(0), Rat(0)}, {Rat(1), Rat(1, 2)}})
                   .validate());
}

TEST_CASE("encode/decode round trip") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    PLSurjection f = random_zigzag(rng, 6);
    PLSurjection g = PLSurjection::decode(f.encode());
    CHECK(pl_equal(f, g));
  }
}

TEST_CASE("pl_compose agrees with pointwise evaluation") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    PLSurjection f = random_zigzag(rng, 5), g = random_zigzag(rng, 5);
    PLSurjection fg = pl_compose(f, g);
    for (int i = 0; i <= 24; ++i) {
      Rat x(i, 24);
      CHECK(fg.eval(x) == f.eval(g.eval(x)));
    }
  }
}

TEST_CASE("pl_sup_distance is exact on a known pair") {
  PLSurjection id = PLSurjection::identity();
  PLSurjection f = PLSurjection::from_pairs(
      {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(3, 4)}, {Rat(1), Rat(1)}});
  CHECK(pl_sup_distance(id, f) == Rat(1, 4));
  CHECK(pl_sup_distance(f, f) == 0);
}

TEST_CASE("mountain climbing solves 60 random strictly-monotone pairs exactly") {
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 60; ++t) {
    PLSurjection f1 = random_zigzag(rng, 8), f2 = random_zigzag(rng, 8);
    auto [g1, g2] = mountain_climb(f1, f2);
    INFO("trial " << t << ": " << f1.encode() << " vs " << f2.encode());
    // exact identity in normal form, endpoints anchored
    CHECK(pl_equal(pl_compose(f1, g1), pl_compose(f2, g2)));
    CHECK(g1.eval(Rat(0)) == Rat(0));
    CHECK(g2.eval(Rat(0)) == Rat(0));
    CHECK(g1.eval(Rat(1)) == Rat(1));
    CHECK(g2.eval(Rat(1)) == Rat(1));
  }
}

TEST_CASE("level set graph carries the climb") {
  PLSurjection f1 = PLSurjection::from_pairs(
      {{Rat(0), Rat(0)}, {Rat(1, 2), Rat(3, 4)}, {Rat(3, 4), Rat(1, 4)}, {Rat(1), Rat(1)}});
  PLSurjection f2 = PLSurjection::identity();
  LevelSetGraph G = build_level_set_graph(f1, f2);
  REQUIRE(!G.vertices.empty());
  // both corner points are vertices of the level set
  CHECK(G.index_of(Rat(0), Rat(0)) >= 0);
  CHECK(G.index_of(Rat(1), Rat(1)) >= 0);
  // each vertex has at least one neighbor: the level set has no isolated point
  for (std::size_t v = 0; v < G.vertices.size(); ++v)
    CHECK(G.degree(static_cast<int>(v)) >= 1);
}

TEST_CASE("endpoint_normalize anchors both endpoints via precomposition") {
  PLSurjection f = PLSurjection::from_pairs(
      {{Rat(0), Rat(1)}, {Rat(1, 3), Rat(0)}, {Rat(1), Rat(1)}});
  NormalizedPL n = endpoint_normalize(f);
  CHECK(n.result.eval(Rat(0)) == Rat(0));
  CHECK(n.result.eval(Rat(1)) == Rat(1));
  // result = f o u pointwise
  for (int i = 0; i <= 16; ++i) {
    Rat x(i, 16);
    CHECK(n.result.eval(x) == f.eval(n.u.eval(x)));
  }
}

TEST_CASE("stepfn_compose_pl matches pointwise composition away from cuts") {
  std::mt19937_64 rng(13);
  Sem S = make_steplsc_interval();
  auto B = S->basis(2);
  for (int t = 0; t < 12; ++t) {
    PLSurjection h = random_zigzag(rng, 4);
    const StepFn& f = std::get<StepFn>(B[static_cast<std::size_t>(3 * t + 1)]);
    StepFn fh = stepfn_compose_pl(f, h);
    // sample at generic (non-breakpoint) rationals with odd denominator
    for (int i = 1; i < 23; ++i) {
      Rat x(i, 23);
      CHECK(fh.at(x) == f.at(h.eval(x)));
    }
  }
}

TEST_CASE("pl_induced_morphism is a Cu-morphism with replayable description") {
  PLSurjection h = PLSurjection::from_pairs(
      {{Rat(0), Rat(0)}, {Rat(1, 4), Rat(1, 2)}, {Rat(1), Rat(1)}});
  CuMorphism a = pl_induced_morphism(h);
  CHECK(a.desc().rfind("pl:", 0) == 0);
  LawReport r = morphism_laws_check(a, 2);
  for (auto& v : r.violations) INFO(v);
  CHECK(r.pass());
}

TEST_CASE("kp_amalgamate closes random PL-induced squares with certificates") {
  std::mt19937_64 rng(77);
  Sem S = make_steplsc_interval();
  FiniteSubset F = capped_subset(S, 2, 40);
  for (int t = 0; t < 10; ++t) {
    PLSurjection p1 = random_zigzag(rng, 5), p2 = random_zigzag(rng, 5);
    CuMorphism a1 = pl_induced_morphism(p1), a2 = pl_induced_morphism(p2);
    KPAmalgam am = kp_amalgamate(a1, a2, F);
    INFO("trial " << t);
    CHECK(am.certificate);
    // the PL square closes exactly: p1 o h1 = p2 o h2
    CHECK(pl_equal(pl_compose(p1, am.h1), pl_compose(p2, am.h2)));
    // and the certificate is re-checkable
    CHECK(compare_on(compose(am.beta1, a1), compose(am.beta2, a2), F));
  }
}

TEST_CASE("rational_peak_approx is the identity on representable inputs") {
  PLSurjection f = PLSurjection::from_pairs(
      {{Rat(0), Rat(0)}, {Rat(2, 5), Rat(7, 8)}, {Rat(1), Rat(1)}});
  CHECK(pl_equal(rational_peak_approx(f, Rat(1, 100)), f));
}
