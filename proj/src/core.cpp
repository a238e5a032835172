// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/core.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace cuf {

std::vector<Element> CuSemigroup::basis_alt(int depth) const {
  auto b = basis(depth);
  std::reverse(b.begin(), b.end());
  return b;
}

bool CuSemigroup::in_basis(const Element& x, int depth) const {
  // memoize the enumerated sets by encoding; the Cauchy-limit bookkeeping
  // probes the same deep sets many times per run
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, std::set<std::string>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto [it, fresh] = cache.try_emplace({id(), depth});
  if (fresh)
    for (auto& b : basis(depth)) it->second.insert(elem_encode(b));
  return it->second.count(elem_encode(x)) != 0;
}

std::vector<Element> CuSemigroup::approach_chain(const Element& x, int len) const {
  if (compact(x)) return std::vector<Element>(static_cast<std::size_t>(len), x);
  throw std::runtime_error(id() + ": no approach chain for non-compact " + show(x));
}

FiniteSubset FiniteSubset::make(Sem host, std::vector<Element> elems) {
  std::sort(elems.begin(), elems.end(), elem_less);
  elems.erase(std::unique(elems.begin(), elems.end(), elem_eq), elems.end());
  FiniteSubset F;
  F.host = std::move(host);
  F.elements = std::move(elems);
  for (int i = 0; i < static_cast<int>(F.elements.size()); ++i)
    for (int j = 0; j < static_cast<int>(F.elements.size()); ++j)
      if (F.host->way_below(F.elements[i], F.elements[j])) F.ll_pairs.emplace_back(i, j);
  return F;
}

bool FiniteSubset::contains(const Element& x) const {
  for (auto& e : elements)
    if (elem_eq(e, x)) return true;
  return false;
}

bool compare_on(const CuMorphism& alpha, const CuMorphism& beta, const FiniteSubset& F) {
  if (!same_sem(alpha.dom(), beta.dom()) || !same_sem(alpha.cod(), beta.cod()) ||
      !same_sem(alpha.dom(), F.host))
    throw std::invalid_argument("compare_on: domain mismatch");
  const auto& cod = *alpha.cod();
  for (auto [i, j] : F.ll_pairs) {
    const Element& xp = F.elements[i];
    const Element& x = F.elements[j];
    if (!cod.leq(alpha(xp), beta(x))) return false;
    if (!cod.leq(beta(xp), alpha(x))) return false;
  }
  return true;
}

FiniteSubset n_refinement(const FiniteSubset& F, int n) {
  if (n < 1) throw std::invalid_argument("n_refinement: n >= 1 required");
  std::vector<Element> elems = F.elements;
  for (auto [i, j] : F.ll_pairs) {
    Element lo = F.elements[i];
    const Element& hi = F.elements[j];
    for (int k = 0; k < n; ++k) {
      Element z = F.host->interpolate(lo, hi);
      elems.push_back(z);
      lo = z;
    }
  }
  return FiniteSubset::make(F.host, std::move(elems));
}

FiniteSubset capped_subset(const Sem& S, int depth, int cap) {
  auto B = S->basis(depth);
  if (static_cast<int>(B.size()) > cap) {
    std::vector<Element> sampled;
    std::size_t stride =
        (B.size() + static_cast<std::size_t>(cap) - 1) / static_cast<std::size_t>(cap);
    for (std::size_t i = 0; i < B.size(); i += stride) sampled.push_back(B[i]);
    B = std::move(sampled);
  }
  return FiniteSubset::make(S, std::move(B));
}

namespace {
std::string viol(const CuSemigroup& S, const std::string& law,
                 std::initializer_list<Element> xs) {
  std::ostringstream os;
  os << S.id() << ": " << law << " fails at";
  for (auto& x : xs) os << " " << S.show(x);
  return os.str();
}
}  // namespace

AxiomReport check_axioms(const Sem& Sp, int depth, int cap) {
  const CuSemigroup& S = *Sp;
  AxiomReport rep;
  auto B = S.basis(depth);
  {
    bool has_zero = false;
    for (auto& x : B) has_zero |= elem_eq(x, S.zero());
    if (!has_zero) B.insert(B.begin(), S.zero());
  }
  if (static_cast<int>(B.size()) > cap) B.resize(static_cast<std::size_t>(cap));
  const int N = static_cast<int>(B.size());
  rep.elements_checked = N;

  // intern sums so the cubic sweeps work on indices
  std::map<std::string, int> index;
  std::vector<Element> all = B;
  for (int i = 0; i < N; ++i) index[elem_encode(B[i])] = i;
  auto intern = [&](const Element& x) -> int {
    auto key = elem_encode(x);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    all.push_back(x);
    int id = static_cast<int>(all.size()) - 1;
    index.emplace(std::move(key), id);
    return id;
  };

  std::vector<std::vector<int>> sum(N, std::vector<int>(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) sum[i][j] = intern(S.add(B[i], B[j]));

  const int M = static_cast<int>(all.size());
  // relation matrices over the basis plus a stride sample of the interned
  // sums: the pairwise order checks stay quadratic in a bounded set even when
  // the sum closure is much larger than the basis
  std::vector<int> rel;
  for (int i = 0; i < N; ++i) rel.push_back(i);
  {
    int extra = M - N, keep = std::min(extra, 100);
    if (keep > 0) {
      int stride = extra / keep + (extra % keep ? 1 : 0);
      for (int i = N; i < M; i += std::max(stride, 1)) rel.push_back(i);
    }
  }
  const int R = static_cast<int>(rel.size());
  std::vector<std::vector<char>> LEQ(R, std::vector<char>(R)), LL(R, std::vector<char>(R));
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) {
      LEQ[i][j] = S.leq(all[rel[i]], all[rel[j]]);
      LL[i][j] = S.way_below(all[rel[i]], all[rel[j]]);
    }

  // positivity, commutativity
  int zero = intern(S.zero());
  for (int i = 0; i < R; ++i)
    if (!S.leq(all[zero], all[rel[i]]))
      rep.violations.push_back(viol(S, "0 <= x", {all[rel[i]]}));
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j)
      if (sum[i][j] != sum[j][i] && !S.eq(all[sum[i][j]], all[sum[j][i]]))
        rep.violations.push_back(viol(S, "commutativity", {B[i], B[j]}));
  }
  for (int i = 0; i < N; ++i) {
    Element zi = S.add(B[i], S.zero());
    if (!S.eq(zi, B[i])) rep.violations.push_back(viol(S, "x + 0 = x", {B[i]}));
  }

  // associativity on a stride sample of basis triples (recompute when a sum
  // leaves the table); full cube on small bases
  {
    std::vector<int> ai;
    int astep = N > 40 ? N / 40 + 1 : 1;
    for (int i = 0; i < N; i += astep) ai.push_back(i);
    for (int i : ai)
      for (int j : ai)
        for (int k : ai) {
          int ij = sum[i][j], jk = sum[j][k];
          Element l = ij < N ? all[sum[ij][k]] : S.add(all[ij], B[k]);
          Element r = jk < N ? all[sum[i][jk]] : S.add(B[i], all[jk]);
          if (!S.eq(l, r)) {
            rep.violations.push_back(viol(S, "associativity", {B[i], B[j], B[k]}));
            goto assoc_done;
          }
        }
  }
assoc_done:;

  // monotonicity of + in each argument (commutativity covers the other)
  {
    std::vector<std::pair<int, int>> leq_pairs;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (LEQ[i][j]) leq_pairs.emplace_back(i, j);
    std::size_t pstep = leq_pairs.size() > 800 ? leq_pairs.size() / 800 + 1 : 1;
    int kstep = N > 30 ? N / 30 + 1 : 1;
    for (std::size_t t = 0; t < leq_pairs.size(); t += pstep) {
      auto [i, j] = leq_pairs[t];
      for (int k = 0; k < N; k += kstep)
        if (!S.leq(all[sum[i][k]], all[sum[j][k]])) {
          rep.violations.push_back(viol(S, "add monotone", {B[i], B[j], B[k]}));
          goto mono_done;
        }
    }
  }
mono_done:;

  // ≪ implies ≤ ; ≪ transitive ; up/down compatibility x' ≤ x ≪ y ≤ y' ⇒ x' ≪ y'
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j)
      if (LL[i][j] && !LEQ[i][j])
        rep.violations.push_back(viol(S, "<< implies <=", {all[rel[i]], all[rel[j]]}));
  {
    // compat = LEQ * LL * LEQ must imply LL (also yields transitivity since LL ⊆ LEQ)
    std::vector<std::vector<char>> T(R, std::vector<char>(R, 0));
    for (int i = 0; i < R; ++i)
      for (int j = 0; j < R; ++j)
        if (LL[i][j])
          for (int k = 0; k < R; ++k)
            if (LEQ[j][k]) T[i][k] = 1;  // LL then LEQ
    bool bad = false;
    for (int a = 0; a < R && !bad; ++a)
      for (int i = 0; i < R && !bad; ++i)
        if (LEQ[a][i])
          for (int k = 0; k < R; ++k)
            if (T[i][k] && !LL[a][k]) {
              rep.violations.push_back(
                  viol(S, "<< compatibility", {all[rel[a]], all[rel[i]], all[rel[k]]}));
              bad = true;
              break;
            }
  }

  // O3: x' ≪ x and y' ≪ y imply x' + y' ≪ x + y (pair list stride-capped)
  {
    std::vector<std::pair<int, int>> llp;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (LL[i][j]) llp.emplace_back(i, j);
    std::size_t stride = llp.size() > 250 ? llp.size() / 250 + 1 : 1;
    std::vector<std::pair<int, int>> ps;
    for (std::size_t t = 0; t < llp.size(); t += stride) ps.push_back(llp[t]);
    for (auto& [i, j] : ps) {
      for (auto& [k, l] : ps)
        if (!S.way_below(all[sum[i][k]], all[sum[j][l]])) {
          rep.violations.push_back(viol(S, "O3 additivity of <<", {B[i], B[j], B[k]}));
          goto o3_done;
        }
    }
  }
o3_done:;

  // O2 interpolation on all ≪ pairs of the basis
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (!LL[i][j]) continue;
      Element z = S.interpolate(B[i], B[j]);
      if (!S.way_below(B[i], z) || !S.way_below(z, B[j]))
        rep.violations.push_back(viol(S, "interpolation", {B[i], B[j], z}));
    }

  return rep;
}

}  // namespace cuf
