// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/metrics.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "cuf/instances.hpp"

namespace cuf {

namespace {

void push_unique(std::vector<Rat>& v, const Rat& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

// generator semantics: the parameter-t generator vanishes once t ≥ 1
Element gen_eval(const CuPath& p, const Rat& t) {
  return t >= 1 ? p.target->zero() : p.eval(t);
}

std::vector<Rat> path_params(const CuPath& p) {
  std::vector<Rat> ts;
  if (auto* sp = std::get_if<StepPath>(&p.rep)) ts = sp->ts;
  else if (auto* lp = std::get_if<SoftLinePath>(&p.rep)) ts = lp->ts;
  else ts = std::get<IndicatorPath>(p.rep).xs;
  std::vector<Rat> out = ts;
  for (std::size_t j = 0; j + 1 < ts.size(); ++j)
    push_unique(out, Rat((ts[j] + ts[j + 1]) / 2));
  for (int k = 0; k < 8; ++k) push_unique(out, Rat(k, 8));
  push_unique(out, Rat(1));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DLambda d_lambda(const CuMorphism& alpha, const CuMorphism& beta,
                 const GeneratingFamily& L) {
  if (!same_sem(alpha.dom(), beta.dom()) || !same_sem(alpha.cod(), beta.cod()) ||
      !same_sem(alpha.dom(), L.target))
    throw std::invalid_argument("d_lambda: family must target the common domain");
  DLambda res{Rat(0), static_cast<int>(L.active())};
  for (std::size_t i = 0; i < L.active(); ++i) {
    Rat d = d_g(compose_path(alpha, L.paths[i]), compose_path(beta, L.paths[i]));
    if (d > res.value) res.value = d;
  }
  return res;
}

// ---------------------------------------------------------------------------

namespace {

// increasing staircase: f = Σ_j jump_j · 1_{(c_j,1]} (G-shaped step functions)
bool staircase_jumps(const StepFn& fraw, std::vector<std::pair<Rat, std::int64_t>>& out) {
  StepFn f = fraw.normalized();
  if (f.pt.front() != ExtNat(0)) return false;
  ExtNat prev(0);
  for (std::size_t j = 0; j < f.cell.size(); ++j) {
    if (f.cell[j].is_inf() || !(prev <= f.cell[j])) return false;
    // interior value must equal the left limit (no isolated dips)
    ExtNat expected = j == 0 ? ExtNat(0) : f.cell[j - 1];
    if (f.pt[j] != expected) return false;
    if (f.cell[j].n > prev.n) out.emplace_back(f.cuts[j], f.cell[j].n - prev.n);
    prev = f.cell[j];
  }
  return f.pt.back() == prev;
}

std::optional<Rat> indicator_param(const CuPath& p, const Rat& cut) {
  const auto* ip = std::get_if<IndicatorPath>(&p.rep);
  if (!ip) return std::nullopt;
  if (cut < ip->hs.front() || cut > ip->hs.back()) return std::nullopt;
  for (std::size_t j = 0; j + 1 < ip->xs.size(); ++j) {
    if (ip->hs[j + 1] < cut) continue;
    if (ip->hs[j + 1] == ip->hs[j]) return ip->xs[j];
    return Rat(ip->xs[j] +
               (cut - ip->hs[j]) * (ip->xs[j + 1] - ip->xs[j]) / (ip->hs[j + 1] - ip->hs[j]));
  }
  return std::nullopt;
}

}  // namespace

BridgeEps bridge_eps_for_set(const FiniteSubset& F, const GeneratingFamily& L) {
  BridgeEps out;
  out.eps = Rat(1, 2);
  const Sem& S = F.host;
  if (!same_sem(S, L.target)) throw std::invalid_argument("bridge_eps_for_set: target");
  const std::vector<Rat> margins = {Rat(1, 2),  Rat(1, 4),  Rat(1, 8),
                                    Rat(1, 16), Rat(1, 32), Rat(1, 64)};

  auto sum_at = [&](const std::vector<std::pair<std::size_t, Rat>>& terms, const Rat& r) {
    Element acc = S->zero();
    for (auto& [pi, t] : terms) acc = S->add(acc, gen_eval(L.paths[pi], Rat(t + r)));
    return acc;
  };

  for (std::size_t pi = 0; pi < F.ll_pairs.size(); ++pi) {
    const Element& xp = F.elements[static_cast<std::size_t>(F.ll_pairs[pi].first)];
    const Element& x = F.elements[static_cast<std::size_t>(F.ll_pairs[pi].second)];
    std::optional<SqueezeCert> found;

    // single-term search: τ(t) ≤ x with x' still below the margin-shifted value
    for (std::size_t p = 0; p < L.active() && !found; ++p) {
      auto ts = path_params(L.paths[p]);
      for (auto& m : margins) {
        for (auto& t : ts) {
          if (!S->leq(gen_eval(L.paths[p], t), x)) continue;
          if (!S->leq(xp, gen_eval(L.paths[p], Rat(t + m)))) continue;
          found = SqueezeCert{pi, {{p, t}}, m};
          break;
        }
        if (found) break;
      }
    }

    // staircase decomposition of the lower element: x' = Σ_j 1_{(c_j,1]};
    // pulling each parameter back by the margin enlarges the sum, and the
    // certificate holds if the enlarged sum still sits below x
    if (!found) {
      if (const auto* f = std::get_if<StepFn>(&xp)) {
        std::vector<std::pair<Rat, std::int64_t>> jumps;
        if (staircase_jumps(*f, jumps)) {
          std::vector<std::pair<std::size_t, Rat>> base;
          bool complete = true;
          std::int64_t total = 0;
          for (auto& [cut, mult] : jumps) {
            std::optional<std::pair<std::size_t, Rat>> term;
            for (std::size_t p = 0; p < L.active() && !term; ++p)
              if (auto t = indicator_param(L.paths[p], cut)) term = {{p, *t}};
            total += mult;
            if (!term || total > 64) {
              complete = false;
              break;
            }
            for (std::int64_t c = 0; c < mult; ++c) base.push_back(*term);
          }
          if (complete) {
            for (auto& m : margins) {
              std::vector<std::pair<std::size_t, Rat>> terms = base;
              for (auto& [p, t] : terms) t = std::max(Rat(0), Rat(t - m));
              if (S->leq(sum_at(terms, Rat(0)), x) && S->leq(xp, sum_at(terms, m))) {
                found = SqueezeCert{pi, terms, m};
                break;
              }
            }
          }
        }
      }
    }

    if (!found) {
      out.diagnostics.push_back("no generating-image certificate for pair " +
                                S->show(xp) + " << " + S->show(x));
      continue;
    }
    if (found->margin < out.eps) out.eps = found->margin;
    out.certs.push_back(std::move(*found));
  }
  if (!out.diagnostics.empty()) out.eps = Rat(0);
  return out;
}

FiniteSubset bridge_set_for_eps(const Rat& eps, const GeneratingFamily& L) {
  if (eps <= 0 || eps > 1) throw std::invalid_argument("bridge_set_for_eps: eps range");
  // 1/n ≤ ε/2
  Int num = numerator(eps), den = denominator(eps);
  Int n_int = (2 * den + num - 1) / num;
  int n = static_cast<int>(n_int.convert_to<std::int64_t>());
  std::vector<Element> elems;
  for (std::size_t p = 0; p < L.active(); ++p)
    for (int i = 0; i <= n; ++i) {
      Rat t(i, n);
      elems.push_back(gen_eval(L.paths[p], t));
      elems.push_back(gen_eval(L.paths[p], Rat(t + eps / 2)));
    }
  return FiniteSubset::make(L.target, std::move(elems));
}

// ---------------------------------------------------------------------------

MetricLimitResult d_lambda_cauchy_limit(const std::function<CuMorphism(int)>& seq,
                                        const GeneratingFamily& L, int depth,
                                        const std::optional<CuMorphism>& identified) {
  const int horizon = 4 * depth + 12;
  // memoized view of the sequence: the limit machinery revisits indices often
  auto memo = std::make_shared<std::map<int, CuMorphism>>();
  auto at = [seq, memo](int i) -> const CuMorphism& {
    auto it = memo->find(i);
    if (it == memo->end()) it = memo->emplace(i, seq(i)).first;
    return it->second;
  };
  CuMorphism a0 = at(0);
  std::vector<Rat> pairwise;
  for (int i = 0; i < horizon; ++i)
    pairwise.push_back(d_lambda(at(i), at(i + 1), L).value);

  MorphismSequence ms;
  ms.dom = a0.dom();
  ms.cod = a0.cod();
  ms.at = at;
  BridgeEps probe = bridge_eps_for_set(capped_subset(ms.dom, depth), L);
  if (probe.ok()) {
    ms.modulus = [&L, pairwise, horizon](const FiniteSubset& F) -> int {
      BridgeEps b = bridge_eps_for_set(F, L);
      if (!b.ok()) return horizon;
      for (int i = 0; i <= horizon; ++i) {
        Rat tail(0);
        for (int j = i; j < horizon; ++j) tail += pairwise[static_cast<std::size_t>(j)];
        if (tail < b.eps) return i;
      }
      return horizon;
    };
  }

  CauchyLimitResult lim = cauchy_limit(ms, depth);
  MetricLimitResult res;
  res.limit = lim.limit;
  res.phi = lim.phi;
  CuMorphism report = lim.limit;
  if (identified) {
    if (!verify_limit(ms, *identified, depth).pass())
      throw std::invalid_argument(
          "d_lambda_cauchy_limit: supplied closed form fails the limit certificate");
    report = *identified;
    res.limit = *identified;
  }
  for (int i = 0; i <= std::min(horizon, depth + 3); ++i)
    res.dist_to_limit.push_back(d_lambda(at(i), report, L).value);
  res.metric_converges = res.dist_to_limit.back() < Rat(1, depth + 2);
  return res;
}

// ---------------------------------------------------------------------------

namespace {

// relative-open union of raw intervals (l,u) read inside X = [0,1]
StepFn open_union(std::vector<std::pair<Rat, Rat>> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<Rat, Rat>> merged;
  for (auto& [l, u] : iv) {
    if (!(l < u)) continue;
    if (!merged.empty() && l < merged.back().second)
      merged.back().second = std::max(merged.back().second, u);
    else
      merged.emplace_back(l, u);
  }
  auto inside = [&](const Rat& x) {
    for (auto& [l, u] : merged)
      if (l < x && x < u) return true;
    return false;
  };
  std::vector<Rat> cuts = {Rat(0), Rat(1)};
  for (auto& [l, u] : merged) {
    if (l > 0 && l < 1) push_unique(cuts, l);
    if (u > 0 && u < 1) push_unique(cuts, u);
  }
  std::sort(cuts.begin(), cuts.end());
  StepFn f;
  f.cuts = cuts;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
    f.cell.emplace_back(inside(Rat((cuts[j] + cuts[j + 1]) / 2)) ? 1 : 0);
  for (auto& c : cuts) f.pt.emplace_back(inside(c) ? 1 : 0);
  f.validate();
  return f.normalized();
}

}  // namespace

StepFn grid_open_union(int n, const std::vector<int>& cells) {
  std::vector<std::pair<Rat, Rat>> iv;
  for (int c : cells) {
    if (c < 0 || c >= n) throw std::invalid_argument("grid_open_union: cell index");
    iv.emplace_back(Rat(c, n), Rat(c + 1, n));
  }
  return open_union(std::move(iv));
}

Rat lsc_metric(const CuMorphism& alpha, const CuMorphism& beta, int grid_n) {
  if (!same_sem(alpha.dom(), beta.dom()) || !same_sem(alpha.cod(), beta.cod()))
    throw std::invalid_argument("lsc_metric: parallel morphisms required");
  if (grid_n < 1 || grid_n > 10) throw std::invalid_argument("lsc_metric: grid 1..10");
  const Sem& T = alpha.cod();

  std::vector<std::vector<int>> subsets;
  for (int mask = 1; mask < (1 << grid_n); ++mask) {
    std::vector<int> cells;
    for (int c = 0; c < grid_n; ++c)
      if (mask & (1 << c)) cells.push_back(c);
    subsets.push_back(std::move(cells));
  }

  // candidate shifts: grid fractions plus |image cut − grid point| differences
  std::vector<Rat> cand = {Rat(0), Rat(1)};
  for (int k = 1; k <= 8 * grid_n; ++k) push_unique(cand, Rat(k, 8 * grid_n));
  for (int c = 0; c < grid_n; ++c) {
    Element v = Element(grid_open_union(grid_n, {c}));
    for (const CuMorphism* m : {&alpha, &beta}) {
      Element img = (*m)(v);
      if (const auto* f = std::get_if<StepFn>(&img))
        for (auto& cut : f->cuts)
          for (int j = 0; j <= grid_n; ++j) {
            Rat d = cut - Rat(j, grid_n);
            if (d < 0) d = -d;
            if (d > 0 && d <= 1) push_unique(cand, d);
          }
    }
  }
  std::sort(cand.begin(), cand.end());

  auto check = [&](const Rat& r) {
    for (auto& cells : subsets) {
      Element v = Element(grid_open_union(grid_n, cells));
      std::vector<std::pair<Rat, Rat>> iv;
      for (int c : cells) iv.emplace_back(Rat(c, grid_n) - r, Rat(c + 1, grid_n) + r);
      Element vr = Element(open_union(std::move(iv)));
      if (!T->leq(alpha(v), beta(vr))) return false;
      if (!T->leq(beta(v), alpha(vr))) return false;
    }
    return true;
  };

  // monotone in r: binary search the sorted candidates
  std::size_t lo = 0, hi = cand.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (check(cand[mid])) hi = mid;
    else lo = mid + 1;
  }
  if (lo == cand.size()) return Rat(2);  // beyond the diameter: no r ≤ 1 works
  return cand[lo];
}

// ---------------------------------------------------------------------------

CuMorphism counterexample_tau(const Sem& S, int n) {
  if (n < 1) throw std::invalid_argument("counterexample_tau: n >= 1");
  return shift_morphism(S, Rat(1, n));
}

GeneratingFamily lambda_counterexample(const Sem& S, int max_m) {
  GeneratingFamily L;
  L.target = S;
  L.paths.push_back(indicator_path({Rat(0), Rat(1)}, {Rat(0), Rat(1)}, S));
  for (int m = 2; m <= max_m; ++m)
    L.paths.push_back(
        indicator_path({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(1, m), Rat(1)}, S));
  return L;
}

GeneratingFamily family_from_basis(const Sem& S, int depth) {
  GeneratingFamily L;
  L.target = S;
  for (auto& x : S->basis(depth))
    if (S->compact(x)) L.paths.push_back(CuPath{S, StepPath{{Rat(0)}, {x}}});
  return L;
}

}  // namespace cuf
