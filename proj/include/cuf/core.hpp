// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_CORE_HPP
#define CUF_CORE_HPP

#include "cuf/morphism.hpp"
#include "cuf/semigroup.hpp"

namespace cuf {

// α ≃_F β : for every (x',x) in F.ll_pairs, α(x') ≤ β(x) and β(x') ≤ α(x).
bool compare_on(const CuMorphism& alpha, const CuMorphism& beta, const FiniteSubset& F);

// F̃ ⊇ F with, for every (f',f) in F.ll_pairs, a chain f' ≪ g_1 ≪ ... ≪ g_n ≪ f
// inside F̃ (built by repeated chain interpolation; deterministic).
FiniteSubset n_refinement(const FiniteSubset& F, int n);

struct AxiomReport {
  int elements_checked = 0;
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

// Exhaustive monoid/order/≪ law check over B_depth (interned and capped at
// `cap` elements; the cap is recorded in the report).
AxiomReport check_axioms(const Sem& S, int depth, int cap = 250);

// Size-capped subset of B_depth (stride-sampled so late/soft elements stay in).
FiniteSubset capped_subset(const Sem& S, int depth, int cap = 140);

}  // namespace cuf

#endif
