// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_LIMITS_HPP
#define CUF_LIMITS_HPP

#include <functional>
#include <optional>

#include "cuf/core.hpp"
#include "cuf/morphism.hpp"

namespace cuf {

// Sequence α_0, α_1, ... of morphisms with a shared domain and codomain.
struct MorphismSequence {
  Sem dom, cod;
  std::function<CuMorphism(int)> at;
  // optional Cauchy modulus F ↦ i_F; when absent, cauchy_limit searches one
  std::function<int(const FiniteSubset&)> modulus;
};

struct CauchyLimitResult {
  CuMorphism limit;
  std::vector<int> phi;          // verified modulus per basis depth 0..depth
  bool stabilized = true;        // every basis evaluation reached a fixed value
  bool chain_independent = true; // chain-shift evaluations agree on the basis
};

// Limit of a ≃-Cauchy sequence, evaluated on a ≪-chain below the argument:
// sup over l of α_{φ(ψ(l,f))}(f_l), with φ verified on B_0..B_depth (window
// spot-checks; basis sets size-capped) and ψ the minimal strictly-increasing
// index with chain-prefix containment. φ beyond depth extends affinely; the
// result is certified separately by verify_limit. Throws a diagnostic when no
// modulus can be verified or a chain leaves the basis family.
CauchyLimitResult cauchy_limit(const MorphismSequence& seq, int depth);

// Convergence certificate: for every basis ≪-pair (x', x), eventually
// α_j(x') ≤ limit(x) and limit(x') ≤ α_j(x) (three consecutive j spot-checked).
LawReport verify_limit(const MorphismSequence& seq, const CuMorphism& limit, int depth);

// ---------------------------------------------------------------------------
enum class TriBool { yes, no, unknown };

// Finite prefix of an inductive sequence S_0 → S_1 → ... with the depth-bounded
// order realization; optional closed-form identification into a target.
struct FormalColimit {
  std::vector<Sem> stages;
  std::vector<CuMorphism> connect;  // σ_i : S_i → S_{i+1}
  int depth = 4;

  Sem target;  // empty unless identified
  std::function<Element(int, const Element&)> closed_form;  // stage elt ↦ target
  // target elt ↦ staged ≪-chain (stage, element) whose images sup to it
  std::function<std::vector<std::pair<int, Element>>(const Element&, int)> approx_stages;

  CuMorphism map(int i, int j) const;  // σ_{i,j}, i ≤ j
  CuMorphism cone(int i) const;        // σ_{i,∞} via closed_form (requires target)
  int last() const { return static_cast<int>(stages.size()) - 1; }
};

FormalColimit colimit_make(std::vector<Sem> stages, std::vector<CuMorphism> connect,
                           int depth);

// yes: stage witness k with σ_{i,k}(x') ≤ σ_{j,k}(y) for every basis interpolant
// x' ≪ x (stable under depth increase). no: closed-form refutation only.
TriBool colimit_leq(const FormalColimit& C, int i, const Element& x, int j,
                    const Element& y);

struct IdentifyReport {
  std::vector<std::string> issues;
  int pairs_resolved = 0, pairs_unknown = 0;
  bool pass() const { return issues.empty(); }
};

// Checks stage_maps commute with the connecting maps and that the depth-bounded
// colimit order never disagrees with the target order under stage_maps.
IdentifyReport identify_colimit(const FormalColimit& C, const Sem& target,
                                const std::vector<CuMorphism>& stage_maps);

// ---------------------------------------------------------------------------
// Approximate intertwining between two inductive sequences. One-sided: α_i only.
struct Intertwining {
  FormalColimit S, T;
  std::vector<int> phi;  // α_i : S_i → T_{φ(i)}
  std::vector<CuMorphism> alpha;
  std::vector<int> psi;  // β_i : T_i → S_{ψ(i)} (two-sided only)
  std::vector<CuMorphism> beta;
  std::vector<std::string> ledger;  // recorded (F, indices) certificates
};

struct InducedResult {
  CuMorphism alpha;
  std::vector<std::string> issues;
  bool stabilized = true;
  bool pass() const { return issues.empty(); }
};

// Induced morphism between the identified colimit targets; verifies the
// per-stage approximate commutation α∘σ_{i,∞} ≃_F τ_{φ(j),∞}∘α_j∘σ_{i,j}.
InducedResult one_sided_induced(const Intertwining& I, int depth);

struct TwoSidedResult {
  CuMorphism alpha, beta;
  std::vector<std::string> issues;
  bool pass() const { return issues.empty(); }
};

// Both induced maps plus β∘α ≃ id / α∘β ≃ id certificates on 2-refined bases.
TwoSidedResult two_sided_induced(const Intertwining& I, int depth);

}  // namespace cuf

#endif
