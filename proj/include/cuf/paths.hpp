// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_PATHS_HPP
#define CUF_PATHS_HPP

#include <variant>

#include "cuf/core.hpp"
#include "cuf/morphism.hpp"

namespace cuf {

// A Cu-path into S: a decreasing right-constant net (y_t)_{t∈[0,1]} with
// y_t ≪ y_r whenever r < t, i.e. the morphism 1_{(t,1]} ↦ y_t out of the
// generator semigroup. Three exact representations.

// Right-closed constant pieces: value ys[j] on [ts[j], ts[j+1]); every value
// compact (the within-piece ≪ condition forces it).
struct StepPath {
  std::vector<Rat> ts;       // 0 = ts[0] < ts[1] < ... ≤ 1
  std::vector<Element> ys;   // strictly ≪-decreasing along t
};

// Soft numeric values on a ray-like target: y_t = Soft(interp(t)), piecewise
// linear and strictly decreasing (the pure scaling path is vals = {c, 0}).
struct SoftLinePath {
  std::vector<Rat> ts;    // 0 = ts[0] < ... < ts[k] = 1
  std::vector<Rat> vals;  // strictly decreasing, vals[k] ≥ 0; value 0 means zero
};

// Indicator-valued path into Lsc([0,1]) or G: t ↦ 1_{(h(t),1]} with h the
// piecewise-linear nondecreasing reparametrization (h ≥ 1 means the value 0).
struct IndicatorPath {
  std::vector<Rat> xs;  // 0 = xs[0] < ... < xs[k] = 1
  std::vector<Rat> hs;  // nondecreasing, in [0,1]
};

struct CuPath {
  Sem target;
  std::variant<StepPath, SoftLinePath, IndicatorPath> rep;

  void validate() const;           // throws on broken invariants
  Element eval(const Rat& t) const;  // representation value y_t, t ∈ [0,1]
};

// StepPath with y_{1/n} = chain[n-1], extended constantly below 1/k; soft
// numeric chains fall back to a SoftLinePath interpolation through the same
// nodes. Throws on a non-≪-increasing chain or unrepresentable values.
CuPath path_from_chain(const Sem& S, const std::vector<Element>& chain);

CuPath affine_path(const Sem& target, const Rat& c);  // t ↦ Soft(c(1−t))
CuPath indicator_path(const std::vector<Rat>& xs, const std::vector<Rat>& hs,
                      Sem target = nullptr);  // default target Lsc([0,1])

// IndicatorPath reparametrized by a forward shift: h ↦ min(h + s, 1).
CuPath path_shift(const CuPath& u, const Rat& s);

// γ∘u. StepPath: values mapped through γ. SoftLinePath: γ must act linearly on
// the soft ray (probed exactly). IndicatorPath: identity or a "shift:" map.
CuPath compose_path(const CuMorphism& gamma, const CuPath& u);

// d_G(u,w) = inf { r > 0 : ∀t, u(t+r) ≤ w(t) and w(t+r) ≤ u(t) }, with the
// generator reading u(s) = 0 for s ≥ 1. Exact; the infimum is located on the
// finite candidate set induced by the two representations.
Rat d_g(const CuPath& u, const CuPath& w);

// The forward-shift endomorphism f ↦ f(· − s) of Lsc([0,1]) or G, desc "shift:s".
CuMorphism shift_morphism(const Sem& S, const Rat& s);

}  // namespace cuf

#endif
