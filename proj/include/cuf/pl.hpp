// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_PL_HPP
#define CUF_PL_HPP

#include <map>
#include <vector>

#include "cuf/core.hpp"
#include "cuf/element.hpp"
#include "cuf/morphism.hpp"

namespace cuf {

// Continuous piecewise-linear surjection [0,1] -> [0,1] with rational data and
// no constancy intervals (every piece has nonzero slope).
struct PLSurjection {
  std::vector<Rat> xs;  // 0 = x_0 < ... < x_k = 1
  std::vector<Rat> ys;  // values at breakpoints, each in [0,1]

  static PLSurjection identity();
  static PLSurjection from_pairs(std::vector<std::pair<Rat, Rat>> pts);
  void validate() const;  // throws: shape, range, flat piece, not surjective
  Rat eval(const Rat& t) const;
  PLSurjection normalized() const;  // merge collinear pieces
  std::string encode() const;       // canonical, parseable
  static PLSurjection decode(const std::string& s);
};

bool pl_equal(const PLSurjection& a, const PLSurjection& b);
PLSurjection pl_compose(const PLSurjection& f, const PLSurjection& g);  // f∘g
Rat pl_sup_distance(const PLSurjection& a, const PLSurjection& b);

// f∘h for a step function f and PL map h (exact; result lsc).
StepFn stepfn_compose_pl(const StepFn& f, const PLSurjection& h);

// Level set {(x,y) : f1(x) = f2(y)} subdivided by the breakpoint grid.
struct LevelSetGraph {
  std::vector<std::pair<Rat, Rat>> vertices;
  std::map<int, std::vector<int>> adj;  // vertex index -> sorted neighbor indices
  int index_of(const Rat& x, const Rat& y) const;
  int degree(int v) const;
};

LevelSetGraph build_level_set_graph(const PLSurjection& f1, const PLSurjection& f2);

// Mountain Climbing Lemma solver: for f1, f2 fixing 0↦0, 1↦1 with no flat
// pieces, returns (g1, g2) with f1∘g1 = f2∘g2 exactly (normal-form identity).
std::pair<PLSurjection, PLSurjection> mountain_climb(const PLSurjection& f1,
                                                     const PLSurjection& f2);

// f ∘ u for a PL surjection u with ≤ 2 extra breakpoints so that the result
// fixes 0 ↦ 0 and 1 ↦ 1. Returns the normalized map and u itself.
struct NormalizedPL {
  PLSurjection result;
  PLSurjection u;
};
NormalizedPL endpoint_normalize(const PLSurjection& f);

// Rational strictly-piecewise-monotone approximant within eps. PLSurjection
// data is already exact rational with no flat pieces, so this is the identity
// on representable inputs; the eps contract is part of the interface.
PLSurjection rational_peak_approx(const PLSurjection& f, const Rat& eps);

// Endomorphism of Lsc([0,1], N̄) induced by a PL surjection h: l ↦ l∘h.
// Canonical description "pl:<encoded h>" (used for replay and by kp_amalgamate).
CuMorphism pl_induced_morphism(const PLSurjection& h);

// Near-amalgamation in K_P: both morphisms must be PL-induced (desc "pl:...").
struct KPAmalgam {
  CuMorphism beta1, beta2;
  PLSurjection h1, h2;  // f1∘h1 = f2∘h2 exactly
  Rat eps_F;            // grid bound used
  bool certificate;     // compare_on(beta1∘alpha1, beta2∘alpha2, F)
};
KPAmalgam kp_amalgamate(const CuMorphism& alpha1, const CuMorphism& alpha2,
                        const FiniteSubset& F);

}  // namespace cuf

#endif
