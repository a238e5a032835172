// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cuf/core.hpp"
#include "cuf/instances.hpp"

using namespace cuf;

namespace {

// scaling endomorphism of the soft ray: Soft(q) -> Soft(c*q)
CuMorphism soft_scale(const Sem& S, const Rat& c) {
  return {S, S, "softscale:" + rat_str(c), [c](const Element& x) {
            SoftVal v = std::get<SoftVal>(x);
            if (!v.inf && v.q != 0) v.q = Rat(v.q * c);
            return Element(v);
          }};
}

}  // namespace

TEST_CASE("compare_on: identity pairs and simple separations") {
  Sem N = make_extnat();
  FiniteSubset F = capped_subset(N, 3);
  CuMorphism id = CuMorphism::identity(N);
  CHECK(compare_on(id, id, F));

  // doubling vs identity disagree on the basis
  CuMorphism dbl{N, N, "mulpow:2,1", [](const Element& x) {
                   return Element(ext_mul(std::get<ExtNat>(x), ExtNat(2)));
                 }};
  CHECK_FALSE(compare_on(id, dbl, F));
}

TEST_CASE("compare_on includes reflexive compact pairs") {
  Sem N = make_extnat();
  FiniteSubset F = FiniteSubset::make(N, {Element(ExtNat(1))});
  // 1 is compact, so (1,1) must be an ll-pair and separate id from doubling
  bool has_reflexive = false;
  for (auto& [a, b] : F.ll_pairs)
    if (a == b) has_reflexive = true;
  CHECK(has_reflexive);
}

TEST_CASE("comparison relation is not transitive (soft-ray witness)") {
  Sem R = make_soft_ray();
  FiniteSubset F = FiniteSubset::make(
      R, {Element(SoftVal::compact(0)), Element(SoftVal::soft_of(1)),
          Element(SoftVal::soft_of(2))});

  CuMorphism a = soft_scale(R, 1), b = soft_scale(R, Rat(3, 2)),
             c = soft_scale(R, Rat(9, 4));
  // a ~_F b and b ~_F c, yet a !~_F c: the squeeze ratio 9/4 exceeds the
  // largest basis gap 2/1, so (Soft(1), Soft(2)) refutes it.
  CHECK(compare_on(a, b, F));
  CHECK(compare_on(b, c, F));
  CHECK_FALSE(compare_on(a, c, F));
}

TEST_CASE("n_refinement interpolates every ll pair") {
  Sem R = make_soft_ray();
  FiniteSubset F = FiniteSubset::make(
      R, {Element(SoftVal::compact(0)), Element(SoftVal::soft_of(1)),
          Element(SoftVal::soft_of(2))});
  FiniteSubset F2 = n_refinement(F, 2);

  // refinement is a superset
  for (auto& x : F.elements) CHECK(F2.contains(x));

  // every original strict ll pair now has an intermediate element in F2
  for (auto& [i, j] : F.ll_pairs) {
    const Element &xp = F.elements[static_cast<std::size_t>(i)],
                  &x = F.elements[static_cast<std::size_t>(j)];
    if (elem_eq(xp, x)) continue;
    bool has_mid = false;
    for (auto& z : F2.elements)
      if (!elem_eq(z, xp) && !elem_eq(z, x) && R->way_below(xp, z) &&
          R->way_below(z, x))
        has_mid = true;
    CHECK(has_mid);
  }
}

TEST_CASE("refined comparison is stronger than the base comparison") {
  Sem R = make_soft_ray();
  FiniteSubset F = FiniteSubset::make(
      R, {Element(SoftVal::compact(0)), Element(SoftVal::soft_of(1)),
          Element(SoftVal::soft_of(2))});
  FiniteSubset F2 = n_refinement(F, 2);
  CuMorphism a = soft_scale(R, 1), b = soft_scale(R, Rat(3, 2));
  // b passes against a on F but the interpolated pairs tighten the ratio
  CHECK(compare_on(a, b, F));
  CHECK_FALSE(compare_on(a, b, F2));
  // while morphisms equal on the nose still compare on any refinement
  CHECK(compare_on(a, soft_scale(R, 1), F2));
}

TEST_CASE("check_axioms passes on flagship instances at depth 3") {
  for (const Sem& S : {make_extnat(), make_elementary(3), make_two_point(),
                       make_simplicial(2), make_softdim(2)}) {
    AxiomReport r = check_axioms(S, 3);
    INFO(S->id());
    for (auto& v : r.violations) INFO(v);
    CHECK(r.pass());
    CHECK(r.elements_checked > 0);
  }
}

TEST_CASE("capped_subset is deterministic and respects the cap") {
  Sem S = make_softdim(2);
  FiniteSubset a = capped_subset(S, 4, 30), b = capped_subset(S, 4, 30);
  REQUIRE(a.elements.size() == b.elements.size());
  CHECK(a.elements.size() <= 30);
  for (std::size_t i = 0; i < a.elements.size(); ++i)
    CHECK(elem_eq(a.elements[i], b.elements[i]));
  // stride sampling keeps at least one soft element in
  bool has_soft = false;
  for (auto& x : a.elements)
    if (auto* v = std::get_if<SoftVal>(&x); v && v->soft) has_soft = true;
  CHECK(has_soft);
}

TEST_CASE("FiniteSubset::make dedupes and caches ll pairs") {
  Sem N = make_extnat();
  FiniteSubset F = FiniteSubset::make(
      N, {Element(ExtNat(2)), Element(ExtNat(1)), Element(ExtNat(2)),
          Element(ExtNat::infinity())});
  CHECK(F.elements.size() == 3);
  for (auto& [i, j] : F.ll_pairs)
    CHECK(N->way_below(F.elements[static_cast<std::size_t>(i)],
                       F.elements[static_cast<std::size_t>(j)]));
  // infinity is not compact in N-bar: no reflexive pair on it
  for (auto& [i, j] : F.ll_pairs)
    if (i == j)
      CHECK_FALSE(std::get<ExtNat>(F.elements[static_cast<std::size_t>(i)]).is_inf());
}
