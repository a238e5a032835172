// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/paths.hpp"

#include <algorithm>
#include <optional>

#include "cuf/instances.hpp"

namespace cuf {

namespace {

// linear interpolation through (xs[j], ys[j]) nodes, xs strictly increasing
Rat pl_at(const std::vector<Rat>& xs, const std::vector<Rat>& ys, const Rat& t) {
  if (t <= xs.front()) return ys.front();
  if (t >= xs.back()) return ys.back();
  for (std::size_t j = 0; j + 1 < xs.size(); ++j)
    if (xs[j] <= t && t <= xs[j + 1]) {
      if (t == xs[j]) return ys[j];
      return ys[j] + (ys[j + 1] - ys[j]) * (t - xs[j]) / (xs[j + 1] - xs[j]);
    }
  return ys.back();
}

void push_unique(std::vector<Rat>& v, const Rat& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

void CuPath::validate() const {
  if (!target) throw std::invalid_argument("CuPath: no target");
  if (auto* sp = std::get_if<StepPath>(&rep)) {
    if (sp->ts.empty() || sp->ts.size() != sp->ys.size() || sp->ts.front() != 0)
      throw std::invalid_argument("StepPath: shape");
    for (std::size_t j = 0; j + 1 < sp->ts.size(); ++j)
      if (!(sp->ts[j] < sp->ts[j + 1])) throw std::invalid_argument("StepPath: ts order");
    if (sp->ts.back() > 1) throw std::invalid_argument("StepPath: ts range");
    for (std::size_t j = 0; j < sp->ys.size(); ++j) {
      if (!target->valid(sp->ys[j])) throw std::invalid_argument("StepPath: value");
      if (!target->compact(sp->ys[j]))
        throw std::domain_error("StepPath: non-compact value " + target->show(sp->ys[j]) +
                                " (use a soft-line representation)");
      if (j && !target->leq(sp->ys[j], sp->ys[j - 1]))
        throw std::invalid_argument("StepPath: values not decreasing");
    }
  } else if (auto* lp = std::get_if<SoftLinePath>(&rep)) {
    if (lp->ts.size() < 2 || lp->ts.size() != lp->vals.size() || lp->ts.front() != 0 ||
        lp->ts.back() != 1)
      throw std::invalid_argument("SoftLinePath: shape");
    for (std::size_t j = 0; j + 1 < lp->ts.size(); ++j)
      if (!(lp->ts[j] < lp->ts[j + 1]))
        throw std::invalid_argument("SoftLinePath: ts order");
    for (std::size_t j = 0; j < lp->vals.size(); ++j) {
      if (lp->vals[j] < 0) throw std::invalid_argument("SoftLinePath: negative value");
      // within-piece ≪ forces strict decrease wherever the value is nonzero
      if (j && !(lp->vals[j] < lp->vals[j - 1]) && lp->vals[j - 1] != 0)
        throw std::invalid_argument("SoftLinePath: not strictly decreasing");
    }
  } else {
    const auto& ip = std::get<IndicatorPath>(rep);
    if (ip.xs.size() < 2 || ip.xs.size() != ip.hs.size() || ip.xs.front() != 0 ||
        ip.xs.back() != 1)
      throw std::invalid_argument("IndicatorPath: shape");
    for (std::size_t j = 0; j + 1 < ip.xs.size(); ++j) {
      if (!(ip.xs[j] < ip.xs[j + 1])) throw std::invalid_argument("IndicatorPath: xs order");
      if (ip.hs[j + 1] < ip.hs[j])
        throw std::invalid_argument("IndicatorPath: h not nondecreasing");
    }
    for (auto& h : ip.hs)
      if (h < 0 || h > 1) throw std::invalid_argument("IndicatorPath: h range");
  }
}

Element CuPath::eval(const Rat& t) const {
  if (t < 0 || t > 1) throw std::invalid_argument("CuPath::eval: t outside [0,1]");
  if (auto* sp = std::get_if<StepPath>(&rep)) {
    std::size_t j = 0;
    while (j + 1 < sp->ts.size() && sp->ts[j + 1] <= t) ++j;
    return sp->ys[j];
  }
  if (auto* lp = std::get_if<SoftLinePath>(&rep)) {
    Rat v = pl_at(lp->ts, lp->vals, t);
    if (v == 0) return target->zero();
    return SoftVal::soft_of(v);
  }
  const auto& ip = std::get<IndicatorPath>(rep);
  Rat h = pl_at(ip.xs, ip.hs, t);
  if (h >= 1) return target->zero();
  return StepFn::indicator_right(h);
}

// ---------------------------------------------------------------------------

CuPath path_from_chain(const Sem& S, const std::vector<Element>& chain) {
  if (chain.empty()) throw std::invalid_argument("path_from_chain: empty chain");
  for (std::size_t j = 0; j + 1 < chain.size(); ++j)
    if (!S->way_below(chain[j], chain[j + 1]))
      throw std::invalid_argument("path_from_chain: chain is not ≪-increasing at " +
                                  std::to_string(j));
  const int k = static_cast<int>(chain.size());
  bool all_compact = true;
  for (auto& x : chain) all_compact = all_compact && S->compact(x);

  if (all_compact) {
    StepPath sp;
    sp.ts.emplace_back(0);
    for (int n = k - 1; n >= 1; --n) sp.ts.emplace_back(Rat(1, n));
    for (int n = k; n >= 1; --n) sp.ys.push_back(chain[static_cast<std::size_t>(n - 1)]);
    CuPath p{S, std::move(sp)};
    p.validate();
    return p;
  }

  // soft numeric fallback: interpolate Soft values linearly through t = 1/n
  std::vector<Rat> q(static_cast<std::size_t>(k));
  for (int n = 1; n <= k; ++n) {
    const auto* sv = std::get_if<SoftVal>(&chain[static_cast<std::size_t>(n - 1)]);
    if (!sv || !sv->soft || sv->inf || sv->q <= 0)
      throw std::domain_error("path_from_chain: value " +
                              S->show(chain[static_cast<std::size_t>(n - 1)]) +
                              " has no step or soft-line representation");
    q[static_cast<std::size_t>(n - 1)] = sv->q;
  }
  SoftLinePath lp;
  if (k == 1) {
    lp.ts = {Rat(0), Rat(1)};
    lp.vals = {Rat(2) * q[0], q[0]};
  } else {
    Rat qk = q[static_cast<std::size_t>(k - 1)], qk1 = q[static_cast<std::size_t>(k - 2)];
    Rat slope = (qk1 - qk) / (Rat(1, k - 1) - Rat(1, k));
    lp.ts.emplace_back(0);
    lp.vals.push_back(qk - slope * Rat(1, k));
    for (int n = k; n >= 1; --n) {
      lp.ts.push_back(Rat(1, n));
      lp.vals.push_back(q[static_cast<std::size_t>(n - 1)]);
    }
  }
  CuPath p{S, std::move(lp)};
  p.validate();
  return p;
}

CuPath affine_path(const Sem& target, const Rat& c) {
  if (c < 0) throw std::invalid_argument("affine_path: negative scale");
  SoftLinePath lp;
  lp.ts = {Rat(0), Rat(1)};
  lp.vals = {c, Rat(0)};
  CuPath p{target, std::move(lp)};
  p.validate();
  return p;
}

CuPath indicator_path(const std::vector<Rat>& xs, const std::vector<Rat>& hs, Sem target) {
  if (!target) target = make_steplsc_interval();
  CuPath p{target, IndicatorPath{xs, hs}};
  p.validate();
  return p;
}

CuPath path_shift(const CuPath& u, const Rat& s) {
  const auto* ip = std::get_if<IndicatorPath>(&u.rep);
  if (!ip) throw std::domain_error("path_shift: indicator representation required");
  if (s < 0) throw std::invalid_argument("path_shift: negative shift");
  IndicatorPath r;
  for (std::size_t j = 0; j < ip->xs.size(); ++j) {
    // insert the crossing where h + s reaches 1 so the interpolation stays
    // the pointwise min(h + s, 1)
    if (j) {
      Rat a = Rat(ip->hs[j - 1] + s), b = Rat(ip->hs[j] + s);
      if (a < 1 && b > 1) {
        r.xs.push_back(Rat(ip->xs[j - 1] +
                           (Rat(1) - a) * (ip->xs[j] - ip->xs[j - 1]) / (b - a)));
        r.hs.emplace_back(1);
      }
    }
    r.xs.push_back(ip->xs[j]);
    r.hs.push_back(std::min(Rat(ip->hs[j] + s), Rat(1)));
  }
  return CuPath{u.target, std::move(r)};
}

// ---------------------------------------------------------------------------

CuMorphism shift_morphism(const Sem& S, const Rat& s) {
  if (s < 0 || s > 1) throw std::invalid_argument("shift_morphism: s outside [0,1]");
  std::string desc = "shift:" + rat_str(s);
  // pullback along φ(x) = max(x − s, 0): (τf)(x) = f(φ(x)); lsc is preserved
  // because φ is continuous, and on generators 1_{(t,1]} this is the cut shift
  return CuMorphism(S, S, desc, [s](const Element& e) -> Element {
    const auto& f = std::get<StepFn>(e);
    if (s == 0) return f;
    ExtNat f0 = f.pt.front();
    if (s >= 1) return StepFn::constant(f0);
    StepFn g = stepfn_refine(f, {Rat(1 - s)});
    StepFn r;
    r.cuts.emplace_back(0);
    r.pt.push_back(f0);
    r.cell.push_back(f0);  // [0, s] is flattened to the value at 0
    for (std::size_t j = 0; j < g.cuts.size() && g.cuts[j] <= 1 - s; ++j) {
      r.cuts.push_back(Rat(g.cuts[j] + s));
      r.pt.push_back(g.pt[j]);
      if (g.cuts[j] < 1 - s) r.cell.push_back(g.cell[j]);
    }
    r.validate();
    return r.normalized();
  });
}

// ---------------------------------------------------------------------------

namespace {

// generator reading: the parameter-t generator is 0 once t ≥ 1
Element gen_eval(const CuPath& p, const Rat& t) {
  if (t >= 1) return p.target->zero();
  return p.eval(t);
}

Rat dg_step(const CuPath& u, const CuPath& w) {
  const auto& a = std::get<StepPath>(u.rep);
  const auto& b = std::get<StepPath>(w.rep);
  const Sem& S = u.target;
  std::vector<Rat> marks = a.ts;
  for (auto& x : b.ts) push_unique(marks, x);

  std::vector<Rat> cand = {Rat(0), Rat(1)};
  for (auto& hi : marks) {
    push_unique(cand, Rat(1 - hi));
    for (auto& lo : marks) {
      Rat d = hi - lo;
      if (d > 0 && d <= 1) push_unique(cand, d);
    }
  }
  std::sort(cand.begin(), cand.end());

  auto check = [&](const Rat& r) {
    std::vector<Rat> ts = {Rat(0)};
    for (auto& x : marks) {
      if (x <= 1) push_unique(ts, x);
      Rat sh = x - r;
      if (sh > 0 && sh <= 1) push_unique(ts, sh);
    }
    for (auto& t : ts) {
      if (!S->leq(gen_eval(u, Rat(t + r)), gen_eval(w, t))) return false;
      if (!S->leq(gen_eval(w, Rat(t + r)), gen_eval(u, t))) return false;
    }
    return true;
  };
  for (auto& r : cand)
    if (check(r)) return r;
  return Rat(1);  // r = 1 always satisfies the saturated condition
}

Rat dg_soft(const CuPath& u, const CuPath& w) {
  const auto& a = std::get<SoftLinePath>(u.rep);
  const auto& b = std::get<SoftLinePath>(w.rep);
  auto val = [](const SoftLinePath& p, const Rat& t) { return pl_at(p.ts, p.vals, t); };

  // one direction: ∀t ∈ [0, 1−r] (continuous closure), mov(t+r) ≤ ref(t)
  auto dir_ok = [&](const SoftLinePath& mov, const SoftLinePath& ref, const Rat& r) {
    if (r >= 1) return true;
    std::vector<Rat> ts = {Rat(0), Rat(1 - r)};
    for (auto& t : ref.ts)
      if (t <= 1 - r) push_unique(ts, t);
    for (auto& x : mov.ts) {
      Rat t = x - r;
      if (t >= 0 && t <= 1 - r) push_unique(ts, t);
    }
    for (auto& t : ts)
      if (val(mov, Rat(t + r)) > val(ref, t)) return false;
    return true;
  };
  auto check = [&](const Rat& r) { return dir_ok(a, b, r) && dir_ok(b, a, r); };

  std::vector<Rat> cand = {Rat(0), Rat(1)};
  auto add_dir = [&](const SoftLinePath& mov, const SoftLinePath& ref) {
    auto solve_on_mov = [&](const Rat& t0, const Rat& v) {
      // r with val(mov, t0 + r) = v, per segment of mov
      for (std::size_t j = 0; j + 1 < mov.ts.size(); ++j) {
        Rat dy = mov.vals[j + 1] - mov.vals[j];
        if (dy == 0) continue;
        Rat s = mov.ts[j] + (v - mov.vals[j]) * (mov.ts[j + 1] - mov.ts[j]) / dy;
        Rat r = s - t0;
        if (r > 0 && r <= 1) push_unique(cand, r);
      }
    };
    for (auto& t0 : ref.ts) solve_on_mov(t0, val(ref, t0));
    for (auto& x : mov.ts) {
      // r with val(ref, x − r) = val(mov, x), per segment of ref
      for (std::size_t j = 0; j + 1 < ref.ts.size(); ++j) {
        Rat dy = ref.vals[j + 1] - ref.vals[j];
        if (dy == 0) continue;
        Rat t = ref.ts[j] + (val(mov, x) - ref.vals[j]) * (ref.ts[j + 1] - ref.ts[j]) / dy;
        Rat r = x - t;
        if (r > 0 && r <= 1) push_unique(cand, r);
      }
    }
    // binding at the closure point t = 1 − r: val(mov, 1) = val(ref, 1 − r)
    for (std::size_t j = 0; j + 1 < ref.ts.size(); ++j) {
      Rat dy = ref.vals[j + 1] - ref.vals[j];
      if (dy == 0) continue;
      Rat t = ref.ts[j] + (val(mov, Rat(1)) - ref.vals[j]) * (ref.ts[j + 1] - ref.ts[j]) / dy;
      Rat r = 1 - t;
      if (r > 0 && r <= 1) push_unique(cand, r);
    }
    for (auto& x : mov.ts)
      for (auto& t : ref.ts) {
        Rat d = x - t;
        if (d > 0 && d <= 1) push_unique(cand, d);
      }
  };
  add_dir(a, b);
  add_dir(b, a);
  std::sort(cand.begin(), cand.end());
  for (auto& r : cand)
    if (check(r)) return r;
  return Rat(1);
}

// least s with h(s) ≥ v (strict: h(s) > v as an infimum); nullopt when h never
// reaches v on [0,1]
std::optional<Rat> ginv(const IndicatorPath& p, const Rat& v, bool strict) {
  auto above = [&](const Rat& y) { return strict ? y > v : y >= v; };
  if (above(p.hs.front())) return Rat(0);
  for (std::size_t j = 0; j + 1 < p.xs.size(); ++j) {
    if (!above(p.hs[j + 1])) continue;
    // here h(xs[j]) is below the target, so the segment strictly increases
    Rat dy = p.hs[j + 1] - p.hs[j];
    return Rat(p.xs[j] + (v - p.hs[j]) * (p.xs[j + 1] - p.xs[j]) / dy);
  }
  return std::nullopt;
}

Rat dg_indicator(const CuPath& u, const CuPath& w) {
  const auto& a = std::get<IndicatorPath>(u.rep);
  const auto& b = std::get<IndicatorPath>(w.rep);
  Rat best(0);
  // direction: mov(t+r) ≤ ref(t) ⟺ h_mov(t+r) ≥ min(h_ref(t), 1) or t+r ≥ 1
  auto dir = [&](const IndicatorPath& mov, const IndicatorPath& ref) {
    std::vector<Rat> ts = {Rat(0), Rat(1)};
    for (auto& x : ref.xs) push_unique(ts, x);
    std::vector<Rat> levels = mov.hs;
    push_unique(levels, Rat(1));
    for (auto& lv : levels) {
      // preimages of mov breakpoint values (and the cap level 1) under h_ref
      for (std::size_t i = 0; i + 1 < ref.xs.size(); ++i) {
        Rat dy = ref.hs[i + 1] - ref.hs[i];
        if (dy == 0) continue;
        Rat t = ref.xs[i] + (lv - ref.hs[i]) * (ref.xs[i + 1] - ref.xs[i]) / dy;
        if (t >= 0 && t <= 1) push_unique(ts, t);
      }
    }
    // h_ref strictly increasing immediately to the right of t (below the cap)?
    auto rising = [&](const Rat& t) {
      if (t >= 1 || pl_at(ref.xs, ref.hs, t) >= 1) return false;
      for (std::size_t i = 0; i + 1 < ref.xs.size(); ++i)
        if (ref.xs[i] <= t && t < ref.xs[i + 1]) return ref.hs[i + 1] > ref.hs[i];
      return false;
    };
    for (auto& t : ts) {
      // 1_{(a,1]} ≤ 1_{(b,1]} iff a ≥ b, so the non-strict inverse binds at t
      // itself; when h_ref keeps rising past t, the inverse jumps across any
      // plateau of h_mov at this level, and the sup is approached as the
      // right-limit — captured by the strict inverse
      Rat v = std::min(pl_at(ref.xs, ref.hs, t), Rat(1));
      auto s = ginv(mov, v, rising(t));
      Rat need = s ? std::min(Rat(1 - t), Rat(std::max(Rat(0), Rat(*s - t)))) : Rat(1 - t);
      if (need > best) best = need;
    }
  };
  dir(a, b);
  dir(b, a);
  return best;
}

}  // namespace

Rat d_g(const CuPath& u, const CuPath& w) {
  if (!same_sem(u.target, w.target)) throw std::invalid_argument("d_g: target mismatch");
  if (u.rep.index() != w.rep.index())
    throw std::invalid_argument("d_g: mixed path representations");
  if (std::holds_alternative<StepPath>(u.rep)) return dg_step(u, w);
  if (std::holds_alternative<SoftLinePath>(u.rep)) return dg_soft(u, w);
  return dg_indicator(u, w);
}

// ---------------------------------------------------------------------------

CuPath compose_path(const CuMorphism& gamma, const CuPath& u) {
  if (!same_sem(gamma.dom(), u.target)) throw std::invalid_argument("compose_path: domain");
  if (gamma.desc().rfind("id[", 0) == 0) return CuPath{gamma.cod(), u.rep};

  if (auto* sp = std::get_if<StepPath>(&u.rep)) {
    StepPath r;
    r.ts = sp->ts;
    for (auto& y : sp->ys) r.ys.push_back(gamma(y));
    CuPath p{gamma.cod(), std::move(r)};
    p.validate();  // rejects non-compact images
    return p;
  }
  if (auto* lp = std::get_if<SoftLinePath>(&u.rep)) {
    // γ must act linearly on the soft ray; probe at 1 and 1/2 exactly
    const Sem& T = gamma.cod();
    Element img = gamma(Element(SoftVal::soft_of(Rat(1))));
    const auto* sv = std::get_if<SoftVal>(&img);
    if (!sv || !sv->soft || sv->inf)
      throw std::domain_error("compose_path: " + gamma.desc() + " is not a soft scaling");
    Rat c = sv->q;
    if (!T->eq(gamma(Element(SoftVal::soft_of(Rat(1, 2)))),
               Element(SoftVal::soft_of(Rat(c / 2)))) ||
        !T->eq(gamma(u.target->zero()), T->zero()))
      throw std::domain_error("compose_path: " + gamma.desc() + " is not linear on softs");
    if (c == 0) return CuPath{T, StepPath{{Rat(0)}, {T->zero()}}};
    SoftLinePath r = *lp;
    for (auto& v : r.vals) v = v * c;
    CuPath p{T, std::move(r)};
    p.validate();
    return p;
  }
  const std::string& d = gamma.desc();
  if (d.rfind("shift:", 0) == 0) {
    CuPath p = path_shift(u, parse_rat(d.substr(6)));
    p.target = gamma.cod();
    return p;
  }
  throw std::domain_error("compose_path: indicator paths compose with identities and "
                          "shifts only (got " + d + ")");
}

}  // namespace cuf
