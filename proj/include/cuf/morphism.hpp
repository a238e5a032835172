// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_MORPHISM_HPP
#define CUF_MORPHISM_HPP

#include <functional>
#include <string>

#include "cuf/semigroup.hpp"

namespace cuf {

// A Cu-morphism represented by a closed-form evaluation rule plus a canonical
// description string. The description drives deterministic "first witness"
// selection and certificate serialization; evaluation is total on canonical
// elements of the domain.
class CuMorphism {
 public:
  CuMorphism() = default;
  CuMorphism(Sem dom, Sem cod, std::string desc,
             std::function<Element(const Element&)> fn)
      : dom_(std::move(dom)), cod_(std::move(cod)), desc_(std::move(desc)),
        fn_(std::move(fn)) {}

  const Sem& dom() const { return dom_; }
  const Sem& cod() const { return cod_; }
  const std::string& desc() const { return desc_; }
  bool empty() const { return !fn_; }

  Element operator()(const Element& x) const { return fn_(x); }

  static CuMorphism identity(Sem s);

 private:
  Sem dom_, cod_;
  std::string desc_;
  std::function<Element(const Element&)> fn_;
};

// f ∘ g (apply g first). Throws on object mismatch.
CuMorphism compose(const CuMorphism& f, const CuMorphism& g);

struct LawReport {
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

// Verifies 0, +, ≤, ≪ preservation on all basis pairs up to depth.
LawReport morphism_laws_check(const CuMorphism& alpha, int depth);

}  // namespace cuf

#endif
