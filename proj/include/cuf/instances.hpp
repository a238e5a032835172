// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_INSTANCES_HPP
#define CUF_INSTANCES_HPP

#include "cuf/semigroup.hpp"

namespace cuf {

Sem make_extnat();                 // N̄
Sem make_elementary(int n);        // E_n = {0,...,n,∞}, n ≥ 1
Sem make_two_point();              // {0, ∞}
Sem make_simplicial(int r);        // N̄^r
Sem make_softdim(int p);           // S_p = N[1/p] ⊔ (0,∞]
Sem make_truncated_ep(int p);      // E_p: S_p truncated at 1_c, plus ∞ (compact)
Sem make_soft_ray();               // [0,∞] soft ray: 0 the only compact element
Sem make_steplsc_discrete(int r);  // Lsc(X_r, N̄) ≅ N̄^r
Sem make_steplsc_interval();       // Lsc([0,1], N̄), rational step functions
Sem make_generator_g();            // G = {f ∈ Lsc([0,1]) : f(0)=0, f increasing}

// Closed-form colimit identification for the (N̄, ×p) sequence: stage-i element
// x ↦ Compact(x/p^i), ∞ ↦ Soft(∞).
Element softdim_embed_stage(int p, int stage, const ExtNat& x);

// Stage identification for the e_p sequence: E_{p^k} ∋ j ↦ Compact(j/p^k), ∞ ↦ ∞.
Element truncated_ep_embed_stage(int p, int stage, const ExtNat& x);

bool is_prime(int p);
Int ipow(Int base, int e);

}  // namespace cuf

#endif
