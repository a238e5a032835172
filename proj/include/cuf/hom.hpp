// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_HOM_HPP
#define CUF_HOM_HPP

#include "cuf/core.hpp"
#include "cuf/morphism.hpp"

namespace cuf {

enum class HomKind { not_morphism, morphism, order_embedding };

// Classification of the additive extension of 1 ↦ k as a map E_n → E_m.
// k = 0 (zero map) and k = ∞ are always morphisms, never embeddings;
// finite k ≥ 1 is a morphism iff (n+1)k > m and an embedding iff also nk ≤ m.
HomKind elementary_hom_classify(int n, int m, const ExtNat& k);

// The map E_n → E_m with 1 ↦ k, j ↦ jk, ∞ ↦ (n+1)k (all saturated above m).
CuMorphism elementary_morphism(int n, int m, const ExtNat& k);

// All morphisms (or only the order-embeddings) E_n → E_m, ordered by k.
std::vector<CuMorphism> elementary_enumerate(int n, int m, bool embeddings_only);

// The unique embedding E_{n^k} → E_{n^s} (k ≤ s): 1 ↦ n^{s-k}.
CuMorphism en_category_embedding(int n, int k, int s);

// N̄^r → N̄^t given by a t×r matrix over N̄ (Cu product: 0·∞ = 0).
CuMorphism simplicial_hom(int r, int t, const std::vector<std::vector<ExtNat>>& M);

// Order-embedding test by exhaustion over ({0,...,bound} ∪ {∞})^r pairs.
bool simplicial_is_embedding(int r, int t, const std::vector<std::vector<ExtNat>>& M,
                             int bound);

// M · (1,...,1) = (1,...,1), i.e. the morphism is unital on indicator sums.
bool simplicial_maps_one_to_one(int r, int t, const std::vector<std::vector<ExtNat>>& M);

// Dual of a point map f: X_t → X_r, as a morphism Lsc(X_r) ≅ N̄^r → N̄^t:
// α(x)[y] = x[f[y]]. Description "dual:r,t:[f_0 ... f_{t-1}]".
CuMorphism cantor_dual_morphism(int r, int t, const std::vector<int>& f);

// Recover the point map from a simplicial morphism α: N̄^r → N̄^t, if α is
// induced by one (each α(e_i) a 0/1 tuple, the rows partitioning X_t).
struct DualMapResult {
  bool ok = false;          // α is the dual of a point map
  bool surjective = false;  // the point map is onto X_r  ⇔  α order-embeds
  std::vector<int> f;       // f[y] ∈ {0,...,r-1}
};
DualMapResult lsc_dual_map(const CuMorphism& alpha, int r, int t);

}  // namespace cuf

#endif
