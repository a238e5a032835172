// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/morphism.hpp"

#include <sstream>

namespace cuf {

CuMorphism CuMorphism::identity(Sem s) {
  return CuMorphism(s, s, "id[" + s->id() + "]", [](const Element& x) { return x; });
}

CuMorphism compose(const CuMorphism& f, const CuMorphism& g) {
  if (!same_sem(f.dom(), g.cod()))
    throw std::invalid_argument("compose: object mismatch " + f.dom()->id() + " vs " +
                                g.cod()->id());
  // identities vanish in the canonical description
  if (g.desc().rfind("id[", 0) == 0) return CuMorphism(g.dom(), f.cod(), f.desc(), [f](const Element& x) { return f(x); });
  if (f.desc().rfind("id[", 0) == 0) return CuMorphism(g.dom(), f.cod(), g.desc(), [g](const Element& x) { return g(x); });
  return CuMorphism(g.dom(), f.cod(), f.desc() + "*" + g.desc(),
                    [f, g](const Element& x) { return f(g(x)); });
}

LawReport morphism_laws_check(const CuMorphism& alpha, int depth) {
  LawReport rep;
  const CuSemigroup& D = *alpha.dom();
  const CuSemigroup& C = *alpha.cod();
  auto note = [&](const std::string& law, const Element& a, const Element& b) {
    std::ostringstream os;
    os << alpha.desc() << ": " << law << " at " << D.show(a) << ", " << D.show(b);
    rep.violations.push_back(os.str());
  };
  if (!C.eq(alpha(D.zero()), C.zero()))
    rep.violations.push_back(alpha.desc() + ": 0 not preserved");
  auto B = D.basis(depth);
  for (auto& x : B)
    for (auto& y : B) {
      if (!C.eq(alpha(D.add(x, y)), C.add(alpha(x), alpha(y)))) note("additivity", x, y);
      if (D.leq(x, y) && !C.leq(alpha(x), alpha(y))) note("order", x, y);
      if (D.way_below(x, y) && !C.way_below(alpha(x), alpha(y))) note("way-below", x, y);
      if (rep.violations.size() > 25) return rep;
    }
  return rep;
}

}  // namespace cuf
