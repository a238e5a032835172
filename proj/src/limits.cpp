// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/limits.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace cuf {

namespace {

struct LimState {
  MorphismSequence seq;
  int depth = 0;
  int cap_index = 0;
  std::map<int, int> phi;
  std::map<int, CuMorphism> memo;
  bool stabilized = true;
  std::mutex mu;

  const CuMorphism& at(int i) {
    auto it = memo.find(i);
    if (it != memo.end()) return it->second;
    return memo.emplace(i, seq.at(i)).first->second;
  }
};

// verified modulus for B_n (n ≤ depth); affine extension beyond the budget
int get_phi(LimState& st, int n) {
  int last = st.phi.empty() ? -1 : st.phi.rbegin()->first;
  for (int m = last + 1; m <= std::min(n, st.depth); ++m) {
    FiniteSubset F = capped_subset(st.seq.dom, m);
    int start = m ? st.phi[m - 1] : 0;
    if (st.seq.modulus) start = std::max(start, st.seq.modulus(F));
    int found = -1;
    for (int i = start; i <= st.cap_index && found < 0; ++i) {
      bool ok = true;
      for (int j = i; j <= i + 2 && ok; ++j)
        for (int k = j + 1; k <= i + 2 && ok; ++k)
          ok = compare_on(st.at(j), st.at(k), F);
      // far probe: a window agreement must also survive against a late index,
      // or an early plateau would masquerade as convergence
      if (ok && i + 2 < st.cap_index) ok = compare_on(st.at(i), st.at(st.cap_index), F);
      if (ok) found = i;
      if (st.seq.modulus) break;  // supplied modulus is verified, not searched past
    }
    if (found < 0) {
      std::ostringstream os;
      os << "cauchy_limit: no modulus verifiable for B_" << m << " (" << F.elements.size()
         << " elements) within index " << st.cap_index;
      throw std::runtime_error(os.str());
    }
    st.phi[m] = found;
  }
  if (n <= st.depth) return st.phi[n];
  return st.phi[st.depth] + (n - st.depth);
}

Element limit_value(LimState& st, const Element& x, int shift) {
  std::lock_guard<std::mutex> lock(st.mu);
  const auto& dom = *st.seq.dom;
  const auto& cod = *st.seq.cod;
  const int len = st.depth + 2;
  auto chain = st.seq.dom->approach_chain(x, len + shift);
  chain.erase(chain.begin(), chain.begin() + shift);

  const int ncap = 2 * st.depth + 16;
  int prev = -1;
  Element val = cod.zero();
  Element prior = val;
  for (int l = 0; l < len; ++l) {
    int psi = -1;
    std::size_t pfx = std::min(static_cast<std::size_t>(l + 2), chain.size());
    for (int n = prev + 1; n <= ncap && psi < 0; ++n) {
      bool all = true;
      for (std::size_t q = 0; q < pfx && all; ++q) all = dom.in_basis(chain[q], n);
      if (all) psi = n;
    }
    if (psi < 0)
      throw std::runtime_error("cauchy_limit: chain prefix for " + dom.show(x) +
                               " leaves the basis family (element " +
                               dom.show(chain[static_cast<std::size_t>(l)]) + ")");
    prev = psi;
    Element v = st.at(get_phi(st, psi))(chain[static_cast<std::size_t>(l)]);
    if (cod.leq(val, v)) {
      prior = val;
      val = v;
    } else if (!cod.leq(v, val)) {
      throw std::runtime_error("cauchy_limit: chain values incomparable at " + cod.show(v) +
                               " vs " + cod.show(val));
    } else {
      prior = val;  // value already dominated: sequence stabilized here
    }
  }
  if (!cod.eq(prior, val)) st.stabilized = false;
  return val;
}

}  // namespace

CauchyLimitResult cauchy_limit(const MorphismSequence& seq, int depth) {
  if (!seq.at) throw std::invalid_argument("cauchy_limit: empty sequence");
  auto st = std::make_shared<LimState>();
  st->seq = seq;
  st->depth = depth;
  st->cap_index = 4 * depth + 12;
  {
    std::lock_guard<std::mutex> lock(st->mu);
    get_phi(*st, depth);  // verify the modulus up front
  }
  CauchyLimitResult res;
  res.limit = CuMorphism(seq.dom, seq.cod,
                         "limit[" + seq.dom->id() + "->" + seq.cod->id() + "]",
                         [st](const Element& x) { return limit_value(*st, x, 0); });
  for (int n = 0; n <= depth; ++n) res.phi.push_back(get_phi(*st, n));

  // chain independence: a shifted ≪-chain must give the same basis values
  auto probe = seq.dom->basis(std::min(depth, 3));
  if (probe.size() > 25) probe.resize(25);
  for (auto& x : probe)
    if (!seq.cod->eq(limit_value(*st, x, 0), limit_value(*st, x, 1)))
      res.chain_independent = false;
  res.stabilized = st->stabilized;
  return res;
}

LawReport verify_limit(const MorphismSequence& seq, const CuMorphism& limit, int depth) {
  LawReport rep;
  FiniteSubset F = capped_subset(seq.dom, depth);
  const auto& cod = *seq.cod;
  const int cap = 4 * depth + 12;
  std::map<int, CuMorphism> memo;
  auto at = [&](int i) -> const CuMorphism& {
    auto it = memo.find(i);
    if (it != memo.end()) return it->second;
    return memo.emplace(i, seq.at(i)).first->second;
  };
  for (auto [i, j] : F.ll_pairs) {
    const Element& xp = F.elements[static_cast<std::size_t>(i)];
    const Element& x = F.elements[static_cast<std::size_t>(j)];
    Element lx = limit(x), lxp = limit(xp);
    bool certified = false;
    for (int j0 = 0; j0 <= cap && !certified; ++j0) {
      bool ok = true;
      for (int jj = j0; jj <= j0 + 2 && ok; ++jj)
        ok = cod.leq(at(jj)(xp), lx) && cod.leq(lxp, at(jj)(x));
      // a window agreement must also survive against a late index, or an
      // early plateau would masquerade as convergence
      if (ok && j0 + 2 < cap) ok = cod.leq(at(cap)(xp), lx) && cod.leq(lxp, at(cap)(x));
      certified = ok;
    }
    if (!certified)
      rep.violations.push_back("limit certificate fails at (" + seq.dom->show(xp) + ", " +
                               seq.dom->show(x) + ")");
  }
  return rep;
}

// ---------------------------------------------------------------------------

CuMorphism FormalColimit::map(int i, int j) const {
  if (i < 0 || j < i || j > last()) throw std::invalid_argument("FormalColimit::map");
  CuMorphism m = CuMorphism::identity(stages[static_cast<std::size_t>(i)]);
  for (int k = i; k < j; ++k) m = compose(connect[static_cast<std::size_t>(k)], m);
  return m;
}

CuMorphism FormalColimit::cone(int i) const {
  if (!target || !closed_form) throw std::invalid_argument("FormalColimit::cone: not identified");
  auto cf = closed_form;
  return CuMorphism(stages[static_cast<std::size_t>(i)], target,
                    "cone:" + std::to_string(i) + "[" + target->id() + "]",
                    [cf, i](const Element& x) { return cf(i, x); });
}

FormalColimit colimit_make(std::vector<Sem> stages, std::vector<CuMorphism> connect,
                           int depth) {
  if (stages.empty() || connect.size() + 1 != stages.size())
    throw std::invalid_argument("colimit_make: shape");
  for (std::size_t i = 0; i < connect.size(); ++i)
    if (!same_sem(connect[i].dom(), stages[i]) || !same_sem(connect[i].cod(), stages[i + 1]))
      throw std::invalid_argument("colimit_make: connecting map " + std::to_string(i) +
                                  " objects");
  FormalColimit C;
  C.stages = std::move(stages);
  C.connect = std::move(connect);
  C.depth = depth;
  return C;
}

TriBool colimit_leq(const FormalColimit& C, int i, const Element& x, int j,
                    const Element& y) {
  if (i < 0 || i > C.last() || j < 0 || j > C.last())
    throw std::invalid_argument("colimit_leq: stage out of range");
  const auto& Si = *C.stages[static_cast<std::size_t>(i)];
  // interpolants must be sup-dense below x: a truncated basis slice can have a
  // sup strictly below x and certify inequalities that deeper slices refute
  std::vector<Element> interp;
  try {
    interp = Si.approach_chain(x, C.depth + 2);
  } catch (...) {
    for (auto& b : Si.basis(C.depth))
      if (Si.way_below(b, x)) interp.push_back(b);
    if (Si.compact(x)) interp.push_back(x);
  }

  for (int k = std::max(i, j); k <= C.last(); ++k) {
    CuMorphism mx = C.map(i, k), my = C.map(j, k);
    Element yk = my(y);
    const auto& Sk = *C.stages[static_cast<std::size_t>(k)];
    bool all = true;
    for (auto& xp : interp)
      if (!Sk.leq(mx(xp), yk)) {
        all = false;
        break;
      }
    if (all) return TriBool::yes;
  }
  if (C.target && C.closed_form &&
      !C.target->leq(C.closed_form(i, x), C.closed_form(j, y)))
    return TriBool::no;
  return TriBool::unknown;
}

IdentifyReport identify_colimit(const FormalColimit& C, const Sem& target,
                                const std::vector<CuMorphism>& stage_maps) {
  if (stage_maps.size() != C.stages.size())
    throw std::invalid_argument("identify_colimit: one stage map per stage required");
  IdentifyReport rep;
  auto stage_basis = [&](int i) {
    auto B = C.stages[static_cast<std::size_t>(i)]->basis(C.depth);
    if (B.size() > 40) B.resize(40);
    return B;
  };

  // cone condition: μ_{i+1} ∘ σ_i = μ_i on the basis
  for (int i = 0; i < C.last(); ++i)
    for (auto& x : stage_basis(i)) {
      Element via = stage_maps[static_cast<std::size_t>(i + 1)](
          C.connect[static_cast<std::size_t>(i)](x));
      Element direct = stage_maps[static_cast<std::size_t>(i)](x);
      if (!target->eq(via, direct))
        rep.issues.push_back("stage map does not commute at stage " + std::to_string(i) +
                             ", " + C.stages[static_cast<std::size_t>(i)]->show(x) + ": " +
                             target->show(via) + " vs " + target->show(direct));
    }
  if (!rep.issues.empty()) return rep;

  // additivity of the identification on each stage
  for (int i = 0; i <= C.last(); ++i) {
    auto B = stage_basis(i);
    if (B.size() > 15) B.resize(15);
    const auto& Si = *C.stages[static_cast<std::size_t>(i)];
    const auto& mu = stage_maps[static_cast<std::size_t>(i)];
    for (auto& x : B)
      for (auto& y : B)
        if (!target->eq(mu(Si.add(x, y)), target->add(mu(x), mu(y))))
          rep.issues.push_back("identification not additive at stage " + std::to_string(i));
  }

  // order agreement: depth-bounded colimit order vs target order
  FormalColimit D = C;
  D.target = target;
  D.closed_form = [stage_maps](int i, const Element& x) {
    return stage_maps[static_cast<std::size_t>(i)](x);
  };
  for (int i = 0; i <= C.last(); ++i) {
    std::vector<int> js = {i};
    if (i + 1 <= C.last()) js.push_back(i + 1);
    if (C.last() != i && C.last() != i + 1) js.push_back(C.last());
    for (int j : js)
      for (auto& x : stage_basis(i))
        for (auto& y : stage_basis(j)) {
          bool t = target->leq(stage_maps[static_cast<std::size_t>(i)](x),
                               stage_maps[static_cast<std::size_t>(j)](y));
          TriBool c = colimit_leq(D, i, x, j, y);
          if (c == TriBool::unknown) {
            ++rep.pairs_unknown;
            continue;
          }
          ++rep.pairs_resolved;
          if ((c == TriBool::yes) != t)
            rep.issues.push_back(
                std::string("order disagreement (colimit ") +
                (c == TriBool::yes ? "yes" : "no") + ", target " + (t ? "yes" : "no") +
                ") at (" + std::to_string(i) + "," +
                C.stages[static_cast<std::size_t>(i)]->show(x) + ") vs (" +
                std::to_string(j) + "," + C.stages[static_cast<std::size_t>(j)]->show(y) +
                ")");
        }
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct InducedState {
  Intertwining I;
  int depth = 0;
  bool stabilized = true;
  std::mutex mu;
};

Element induced_value(InducedState& st, const Element& x) {
  std::lock_guard<std::mutex> lock(st.mu);
  const auto& S = st.I.S;
  const auto& T = st.I.T;
  const auto& Tt = *T.target;
  const int jmax = std::min(S.last(), static_cast<int>(st.I.alpha.size()) - 1);
  auto staged = S.approx_stages(x, st.depth + 2);
  Element v = Tt.zero();
  Element vprev = v;
  for (auto& [i, e] : staged) {
    // the staged chain increases, so truncating at the prefix end keeps the
    // value a sound under-approximation of the colimit sup
    if (i > jmax) break;
    Element w = Tt.zero();
    Element wprev = w;
    for (int j = i; j <= jmax; ++j) {
      Element z = st.I.alpha[static_cast<std::size_t>(j)](S.map(i, j)(e));
      Element wj = T.closed_form(st.I.phi[static_cast<std::size_t>(j)], z);
      if (Tt.leq(w, wj)) {
        wprev = w;
        w = wj;
      } else if (!Tt.leq(wj, w)) {
        throw std::runtime_error("one_sided_induced: stage values incomparable");
      } else {
        wprev = w;
      }
    }
    if (!Tt.eq(wprev, w)) st.stabilized = false;
    if (Tt.leq(v, w)) {
      vprev = v;
      v = w;
    } else if (!Tt.leq(w, v)) {
      throw std::runtime_error("one_sided_induced: chain values incomparable");
    } else {
      vprev = v;
    }
  }
  if (!Tt.eq(vprev, v)) st.stabilized = false;
  return v;
}

}  // namespace

InducedResult one_sided_induced(const Intertwining& I, int depth) {
  if (!I.S.target || !I.S.approx_stages || !I.T.target || !I.T.closed_form)
    throw std::invalid_argument("one_sided_induced: colimits must be identified");
  if (I.phi.size() < I.alpha.size())
    throw std::invalid_argument("one_sided_induced: phi shorter than alpha");
  auto st = std::make_shared<InducedState>();
  st->I = I;
  st->depth = depth;
  InducedResult res;
  res.alpha = CuMorphism(I.S.target, I.T.target,
                         "onesided:" + I.S.target->id() + "->" + I.T.target->id(),
                         [st](const Element& x) { return induced_value(*st, x); });

  // approximate commutation α∘σ_{i,∞} ≃_F τ_{φ(j),∞}∘α_j∘σ_{i,j}
  const int jmax = std::min(I.S.last(), static_cast<int>(I.alpha.size()) - 1);
  for (int i = 0; i <= jmax; ++i) {
    FiniteSubset F = capped_subset(I.S.stages[static_cast<std::size_t>(i)],
                                   std::min(depth, 3), 60);
    CuMorphism lhs = compose(res.alpha, I.S.cone(i));
    bool ok = false;
    for (int j = jmax; j >= i && !ok; --j) {
      CuMorphism rhs = compose(I.T.cone(I.phi[static_cast<std::size_t>(j)]),
                               compose(I.alpha[static_cast<std::size_t>(j)], I.S.map(i, j)));
      ok = compare_on(lhs, rhs, F);
    }
    if (!ok)
      res.issues.push_back("approximate commutation not certified at stage " +
                           std::to_string(i));
  }
  res.stabilized = st->stabilized;
  return res;
}

TwoSidedResult two_sided_induced(const Intertwining& I, int depth) {
  if (I.beta.empty()) throw std::invalid_argument("two_sided_induced: one-sided input");
  Intertwining R;  // reversed roles
  R.S = I.T;
  R.T = I.S;
  R.phi = I.psi;
  R.alpha = I.beta;
  R.psi = I.phi;
  R.beta = I.alpha;

  InducedResult a = one_sided_induced(I, depth);
  InducedResult b = one_sided_induced(R, depth);
  TwoSidedResult res;
  res.alpha = a.alpha;
  res.beta = b.alpha;
  res.issues = a.issues;
  res.issues.insert(res.issues.end(), b.issues.begin(), b.issues.end());

  // the inverse certificates are asserted on the depth-d bases themselves;
  // refinements beyond the prefix resolution would demand elements the finite
  // data cannot resolve
  for (int d = 1; d <= std::min(depth, 3); ++d) {
    FiniteSubset F = capped_subset(I.S.target, d, 60);
    if (!compare_on(compose(res.beta, res.alpha), CuMorphism::identity(I.S.target), F))
      res.issues.push_back("beta∘alpha not ≃ id on B_" + std::to_string(d));
    FiniteSubset G = capped_subset(I.T.target, d, 60);
    if (!compare_on(compose(res.alpha, res.beta), CuMorphism::identity(I.T.target), G))
      res.issues.push_back("alpha∘beta not ≃ id on B_" + std::to_string(d));
  }
  return res;
}

}  // namespace cuf
