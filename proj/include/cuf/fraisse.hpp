// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_FRAISSE_HPP
#define CUF_FRAISSE_HPP

#include <cstdint>
#include <optional>
#include <tuple>

#include "cuf/core.hpp"
#include "cuf/limits.hpp"
#include "cuf/morphism.hpp"

namespace cuf {

struct Amalgam {
  Sem C;
  CuMorphism beta1, beta2;
  bool exact = false;      // β1∘α1 = β2∘α2 pointwise on the basis
  bool certified = false;  // compare_on(β1∘α1, β2∘α2, F)
};

// Enumerable category of Cu-semigroups: object stream, per-pair hom streams
// (deterministic order: lexicographic on the canonical morphism encoding),
// optional closed-form amalgamator.
struct FraisseCategory {
  std::string name;
  std::function<Sem(int)> object;
  std::function<std::vector<CuMorphism>(const Sem&, const Sem&, int)> homs;
  std::function<std::optional<Amalgam>(const CuMorphism&, const CuMorphism&,
                                       const FiniteSubset&)> amalgamator;
};

// Built-in categories.
FraisseCategory cat_sp(int p);                       // one object N̄, maps ×p^k
FraisseCategory cat_einf();                          // all E_n, nonzero morphisms
FraisseCategory cat_en(int n, int max_exp = 6);      // E_{n^k}, unique embeddings
FraisseCategory cat_cantor(int max_rank);            // N̄^r, duals of surjections
FraisseCategory cat_kp(int hom_cap = 40);            // Lsc[0,1], PL-induced maps
FraisseCategory cat_sdim(int max_rank);              // cantor duals + retractions

// Retraction for a dual-of-surjection morphism (ρ∘ι = id via a section).
std::optional<CuMorphism> sdim_retraction(const CuMorphism& iota);

// Direct-sum extension of an inductive sequence of simplicial stages:
// T_i = S_0 ⊕ ... ⊕ S_i, τ_i(s_0,...,s_i) = (s_0,...,s_i, σ_i(s_i)).
FormalColimit retid_extend(const FormalColimit& C);

// ---------------------------------------------------------------------------

struct JepResult {
  bool found = false;
  int object_index = -1;
  Sem B;
  CuMorphism into1, into2;  // first witnesses in enumeration order
};
JepResult check_jep(const FraisseCategory& cat, const Sem& A1, const Sem& A2, int bound);

// Near-amalgamation: closed form if registered (output verified), else first
// witness in enumeration order. nullopt = exhausted(bound).
std::optional<Amalgam> amalgamate(const FraisseCategory& cat, const CuMorphism& alpha1,
                                  const CuMorphism& alpha2, const FiniteSubset& F,
                                  int bound);

// Deterministic bijective enumeration of demand triples (n, a, k): stage index,
// hom-stream index (object ⊗ position, unpaired), basis depth. Weight-ordered
// with a seeded shuffle inside each weight class.
struct DemandSchedule {
  std::uint64_t seed = 0;
  std::vector<std::tuple<int, int, int>> first(int count) const;
};

struct DemandCert {
  int stage = 0;            // i: demand out of S_i
  std::string alpha_desc;   // α: S_i → T
  int basis_depth = 0;      // k: compared on B_k
  int j = 0;                // return stage
  std::string beta_desc;    // β: T → S_j with β∘α ≃_{B_k} σ_{i,j}
};

struct FraissePrefix {
  FraisseCategory cat;
  std::vector<Sem> stages;
  std::vector<CuMorphism> connect;
  std::vector<DemandCert> ledger;
  int last() const { return static_cast<int>(stages.size()) - 1; }
  CuMorphism map(int i, int j) const;  // σ_{i,j}
};

// Processes the first `steps` demands; extends by amalgamation against the
// current tail when a demand is not yet satisfied. Throws on exhaustion.
FraissePrefix build_fraisse_prefix(const FraisseCategory& cat,
                                   const DemandSchedule& schedule, int steps,
                                   int bound = 24);

struct FraisseCert {
  bool ok = false;
  int j = -1;
  CuMorphism beta;
  std::string note;  // on failure: the minimal missing demand
};
// Searches later stages for β with β∘α ≃_F σ_{i,j}; re-checkable certificate.
FraisseCert verify_fraisse_property(const FraissePrefix& P, int i,
                                    const CuMorphism& alpha, const FiniteSubset& F,
                                    int bound = 24);

// Identified colimit of a prefix (closed form attached for s_p, e_∞, e_n).
FormalColimit prefix_colimit(const FraissePrefix& P, int depth);

// Zig-zag two-sided intertwining between two runs of the same category.
Intertwining uniqueness_intertwine(const FraissePrefix& P1, const FraissePrefix& P2,
                                   int depth);

// One-sided intertwining (α_i: T_i → S_{φ(i)}) of a target sequence into a run.
Intertwining universality_map(const FraissePrefix& P, const FormalColimit& target,
                              int depth);

struct HomogeneityResult {
  Intertwining intertwining;
  CuMorphism nu;            // ν: S_l → S_j with σ_{l,j}∘α ≃_F ν∘β
  CuMorphism eta;           // η: S_l → S_{j'} with σ_{l,j'}∘β ≃_F η∘α
  bool cert_alpha = false;  // the two endpoint comparisons, re-checked
  bool cert_beta = false;
};
// 4-refinement F̃, NAP+Fraïssé double step each way, then uniqueness-style
// continuation of the ν-seeded zig-zag.
HomogeneityResult homogeneity_iso(const FraissePrefix& P, const CuMorphism& alpha,
                                  const CuMorphism& beta, const FiniteSubset& F,
                                  int depth);

}  // namespace cuf

#endif
