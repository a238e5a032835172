// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_METRICS_HPP
#define CUF_METRICS_HPP

#include <functional>

#include "cuf/limits.hpp"
#include "cuf/paths.hpp"

namespace cuf {

// Finite (or truncated enumerable) family Λ of Cu-paths into a common target.
struct GeneratingFamily {
  Sem target;
  std::vector<CuPath> paths;
  int truncation = 0;  // 0 = use all paths; else first `truncation` only
  std::size_t active() const {
    return truncation > 0 ? std::min<std::size_t>(static_cast<std::size_t>(truncation),
                                                  paths.size())
                          : paths.size();
  }
};

struct DLambda {
  Rat value;
  int truncated_at = 0;  // number of paths the sup actually ranged over
};

// d_Λ(α, β) = sup_{τ∈Λ} d_G(α∘τ, β∘τ). Exact sup over the active paths; the
// truncation used is echoed back.
DLambda d_lambda(const CuMorphism& alpha, const CuMorphism& beta,
                 const GeneratingFamily& L);

// Squeeze certificate for a ≪-pair (x', x): x' ≤ Σ τ_i(1_{(t_i + margin,1]})
// and Σ τ_i(1_{(t_i,1]}) ≤ x. Sound bridge: d_Λ < margin forces the F-comparison
// on that pair.
struct SqueezeCert {
  std::size_t pair = 0;                            // index into F.ll_pairs
  std::vector<std::pair<std::size_t, Rat>> terms;  // (path index, t_i)
  Rat margin;
};

struct BridgeEps {
  Rat eps;  // 0 when some pair has no certificate (see diagnostics)
  std::vector<SqueezeCert> certs;
  std::vector<std::string> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

// ε_F from generating-image certificates (single-term search plus staircase
// decomposition of increasing step-function targets).
BridgeEps bridge_eps_for_set(const FiniteSubset& F, const GeneratingFamily& L);

// F_ε = { τ(1_{(i/n,1]}), τ(1_{(i/n + ε/2,1]}) } over a 1/n-partition with
// 1/n ≤ ε/2, for each path of the (finite) family.
FiniteSubset bridge_set_for_eps(const Rat& eps, const GeneratingFamily& L);

struct MetricLimitResult {
  CuMorphism limit;
  std::vector<int> phi;
  std::vector<Rat> dist_to_limit;  // d_Λ(α_i, limit) on the verified prefix
  bool metric_converges = false;   // last prefix distance < 1/(depth+2)
};

// Converts the d_Λ modulus to a comparison modulus through bridge_eps_for_set
// when the pairwise distances are summable on the prefix; otherwise lets the
// comparison-level limit search its own modulus. The metric need not converge
// to 0 against the limit — that is reported, not assumed. An `identified`
// closed form, when supplied and certified by verify_limit, stands in for the
// search-backed limit in the distance report (needed when Λ only composes
// with closed-form morphisms).
MetricLimitResult d_lambda_cauchy_limit(const std::function<CuMorphism(int)>& seq,
                                        const GeneratingFamily& L, int depth,
                                        const std::optional<CuMorphism>& identified =
                                            std::nullopt);

// inf { r : ∀V grid-open, α(1_V) ≤ β(1_{V_r}) and β(1_V) ≤ α(1_{V_r}) } with V
// ranging over unions of open 1/n-cells of [0,1] and V_r the exact open
// r-neighborhood. Exact rational value.
Rat lsc_metric(const CuMorphism& alpha, const CuMorphism& beta, int grid_n);

// The comparison-vs-metric gap witnesses: τ_n = shift by 1/n on S, and the
// family {λ_m} of reparametrized generator paths (0↦0, 1/2↦1/m, 1↦1).
CuMorphism counterexample_tau(const Sem& S, int n);
GeneratingFamily lambda_counterexample(const Sem& S, int max_m);

// Λ made of constant paths at every compact basis element (the discrete
// "triviality" family: d_Λ ∈ {0, 1} on morphisms separated by the basis).
GeneratingFamily family_from_basis(const Sem& S, int depth);

// StepFn for a union of open 1/n-cells (used by the lsc-metric tests).
StepFn grid_open_union(int n, const std::vector<int>& cells);

}  // namespace cuf

#endif
