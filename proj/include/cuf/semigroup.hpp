// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_SEMIGROUP_HPP
#define CUF_SEMIGROUP_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cuf/element.hpp"

namespace cuf {

// Effectively-presented Cu-semigroup: decidable ≤ and ≪ on canonical elements,
// enumerable nested sup-dense basis, constructive interpolation (axiom O2 on
// representables). Immutable after construction; all operations pure.
class CuSemigroup {
 public:
  virtual ~CuSemigroup() = default;

  virtual std::string id() const = 0;
  virtual bool valid(const Element& x) const = 0;
  virtual Element zero() const = 0;
  virtual Element add(const Element& a, const Element& b) const = 0;
  virtual bool leq(const Element& a, const Element& b) const = 0;
  virtual bool way_below(const Element& a, const Element& b) const = 0;

  // Finite, nested, sup-dense basis sets B_0 ⊆ B_1 ⊆ ...; closed under the
  // interpolants this library requests (interpolants land in deeper sets).
  virtual std::vector<Element> basis(int depth) const = 0;
  // A second, independent enumeration of the same basis family (used by the
  // limit-uniqueness checks). Default: same sets, reversed insertion order.
  virtual std::vector<Element> basis_alt(int depth) const;

  // Membership in B_depth. Default enumerates basis(depth); instances override
  // with closed forms so membership stays cheap at depths where enumeration is
  // not (the Cauchy-limit chain bookkeeping probes deep sets).
  virtual bool in_basis(const Element& x, int depth) const;

  // Given x' ≪ x, return z with x' ≪ z ≪ x. Deterministic, lowest encoding.
  virtual Element interpolate(const Element& xp, const Element& x) const = 0;

  // ≪-increasing chain whose sup is x (used for Cauchy-limit evaluation);
  // for compact x the constant chain. Throws if x has no representable chain.
  virtual std::vector<Element> approach_chain(const Element& x, int len) const;

  virtual std::string show(const Element& x) const { return elem_encode(x); }

  bool eq(const Element& a, const Element& b) const { return leq(a, b) && leq(b, a); }
  bool compact(const Element& x) const { return way_below(x, x); }
};

using Sem = std::shared_ptr<const CuSemigroup>;

inline bool same_sem(const Sem& a, const Sem& b) { return a->id() == b->id(); }

// Finite subset of a semigroup with its cached ≪-pairs (reflexive pairs for
// compact elements included — see the comparison definition).
struct FiniteSubset {
  Sem host;
  std::vector<Element> elements;             // sorted by encoding, deduped
  std::vector<std::pair<int, int>> ll_pairs;  // indices (x', x) with x' ≪ x

  static FiniteSubset make(Sem host, std::vector<Element> elems);
  bool contains(const Element& x) const;
};

}  // namespace cuf

#endif
