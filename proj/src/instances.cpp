// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/instances.hpp"

#include <algorithm>
#include <set>

namespace cuf {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Int ipow(Int base, int e) {
  Int r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

namespace {

const ExtNat& as_nbar(const Element& x) { return std::get<ExtNat>(x); }
const Tuple& as_tuple(const Element& x) { return std::get<Tuple>(x); }
const SoftVal& as_soft(const Element& x) { return std::get<SoftVal>(x); }
const StepFn& as_step(const Element& x) { return std::get<StepFn>(x); }

// ---------------------------------------------------------------- N̄ --------
class ExtNatSem : public CuSemigroup {
 public:
  std::string id() const override { return "Nbar"; }
  bool valid(const Element& x) const override { return std::holds_alternative<ExtNat>(x); }
  Element zero() const override { return ExtNat(0); }
  Element add(const Element& a, const Element& b) const override {
    return as_nbar(a) + as_nbar(b);
  }
  bool leq(const Element& a, const Element& b) const override {
    return as_nbar(a) <= as_nbar(b);
  }
  bool way_below(const Element& a, const Element& b) const override {
    return way_below_nbar(as_nbar(a), as_nbar(b));
  }
  std::vector<Element> basis(int depth) const override {
    std::vector<Element> B;
    for (int k = 0; k <= depth; ++k) B.push_back(ExtNat(k));
    B.push_back(ExtNat::infinity());
    return B;
  }
  Element interpolate(const Element& xp, const Element& x) const override {
    if (!way_below(xp, x)) throw std::invalid_argument("interpolate: not <<");
    return xp;  // finite elements are compact
  }
  std::vector<Element> approach_chain(const Element& x, int len) const override {
    if (!as_nbar(x).is_inf()) return std::vector<Element>(static_cast<std::size_t>(len), x);
    std::vector<Element> c;
    for (int k = 1; k <= len; ++k) c.push_back(ExtNat(k));
    return c;
  }
  bool in_basis(const Element& x, int depth) const override {
    return as_nbar(x).is_inf() || as_nbar(x).n <= depth;
  }
};

// ------------------------------------------------------------- E_n ---------
class ElementarySem : public CuSemigroup {
 public:
  explicit ElementarySem(int n) : n_(n) {}
  std::string id() const override {
    return n_ == 0 ? "TwoPoint" : "E_" + std::to_string(n_);
  }
  bool valid(const Element& x) const override {
    if (!std::holds_alternative<ExtNat>(x)) return false;
    const ExtNat& v = as_nbar(x);
    return v.is_inf() || v.n <= n_;
  }
  Element zero() const override { return ExtNat(0); }
  Element add(const Element& a, const Element& b) const override {
    ExtNat s = as_nbar(a) + as_nbar(b);
    if (!s.is_inf() && s.n > n_) return ExtNat::infinity();  // saturation
    return s;
  }
  bool leq(const Element& a, const Element& b) const override {
    return as_nbar(a) <= as_nbar(b);
  }
  bool way_below(const Element& a, const Element& b) const override {
    return leq(a, b);  // every element compact: increasing sequences stabilize
  }
  std::vector<Element> basis(int) const override {
    std::vector<Element> B;
    for (int k = 0; k <= n_; ++k) B.push_back(ExtNat(k));
    B.push_back(ExtNat::infinity());
    return B;
  }
  Element interpolate(const Element& xp, const Element& x) const override {
    if (!way_below(xp, x)) throw std::invalid_argument("interpolate: not <<");
    return xp;
  }
  bool in_basis(const Element& x, int) const override { return valid(x); }
  int bound() const { return n_; }

 private:
  int n_;
};

// ------------------------------------------------------------ N̄^r ---------
class SimplicialSem : public CuSemigroup {
 public:
  explicit SimplicialSem(int r, std::string tag) : r_(r), tag_(std::move(tag)) {}
  std::string id() const override { return tag_; }
  bool valid(const Element& x) const override {
    return std::holds_alternative<Tuple>(x) &&
           static_cast<int>(as_tuple(x).size()) == r_;
  }
  Element zero() const override { return Tuple(static_cast<std::size_t>(r_), ExtNat(0)); }
  Element add(const Element& a, const Element& b) const override {
    Tuple r = as_tuple(a);
    const Tuple& y = as_tuple(b);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] + y[i];
    return r;
  }
  bool leq(const Element& a, const Element& b) const override {
    const Tuple &x = as_tuple(a), &y = as_tuple(b);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] <= y[i])) return false;
    return true;
  }
  bool way_below(const Element& a, const Element& b) const override {
    const Tuple &x = as_tuple(a), &y = as_tuple(b);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!way_below_nbar(x[i], y[i])) return false;
    return true;
  }
  std::vector<Element> basis(int depth) const override {
    // entries in {0..depth, ∞}; odometer order; capped for very large products
    std::vector<ExtNat> vals;
    for (int k = 0; k <= depth; ++k) vals.push_back(ExtNat(k));
    vals.push_back(ExtNat::infinity());
    std::vector<Element> B;
    std::vector<std::size_t> idx(static_cast<std::size_t>(r_), 0);
    const std::size_t cap = 4000;
    while (true) {
      Tuple t;
      for (auto i : idx) t.push_back(vals[i]);
      B.push_back(std::move(t));
      if (B.size() >= cap) break;
      std::size_t j = 0;
      while (j < idx.size() && ++idx[j] == vals.size()) idx[j++] = 0;
      if (j == idx.size()) break;
    }
    return B;
  }
  Element interpolate(const Element& xp, const Element& x) const override {
    if (!way_below(xp, x)) throw std::invalid_argument("interpolate: not <<");
    return xp;  // x' finite in every coordinate, hence compact
  }
  std::vector<Element> approach_chain(const Element& x, int len) const override {
    const Tuple& t = as_tuple(x);
    std::vector<Element> c;
    for (int k = 1; k <= len; ++k) {
      Tuple u = t;
      for (auto& v : u)
        if (v.is_inf()) v = ExtNat(k);
      c.push_back(std::move(u));
    }
    return c;
  }
  bool in_basis(const Element& x, int depth) const override {
    // mirror the capped odometer enumeration exactly
    const Tuple& t = as_tuple(x);
    std::int64_t base = depth + 2, index = 0, weight = 1;
    for (auto& v : t) {
      if (!v.is_inf() && v.n > depth) return false;
      std::int64_t d = v.is_inf() ? base - 1 : v.n;
      if (d > 0 && weight >= 4000) return false;  // beyond the enumeration cap
      index += d * weight;
      if (index >= 4000) return false;
      if (weight < 4000) weight *= base;
    }
    return true;
  }
  int rank() const { return r_; }

 private:
  int r_;
  std::string tag_;
};

// -------------------------------------------------------------- S_p --------
bool p_adic(const Rat& q, int p) {
  Int d = denominator(q);
  while (d % p == 0) d /= p;
  return d == 1;
}

class SoftDimSem : public CuSemigroup {
 public:
  explicit SoftDimSem(int p) : p_(p) {}
  std::string id() const override { return "S_" + std::to_string(p_); }
  bool valid(const Element& x) const override {
    if (!std::holds_alternative<SoftVal>(x)) return false;
    const SoftVal& v = as_soft(x);
    if (v.inf) return v.soft;
    if (v.q < 0) return false;
    if (!v.soft) return p_adic(v.q, p_);
    return v.q > 0;
  }
  Element zero() const override { return SoftVal::compact(0); }
  Element add(const Element& a, const Element& b) const override {
    return softval_add(as_soft(a), as_soft(b));
  }
  bool leq(const Element& a, const Element& b) const override {
    return softval_leq(as_soft(a), as_soft(b));
  }
  bool way_below(const Element& a, const Element& b) const override {
    return softval_way_below(as_soft(a), as_soft(b));
  }
  std::vector<Element> basis(int depth) const override {
    std::vector<Element> B;
    Int den = ipow(p_, depth);
    Int numax = den * depth;
    for (Int k = 0; k <= numax; ++k) B.push_back(SoftVal::compact(Rat(k, den)));
    for (Int k = 1; k <= numax; ++k) B.push_back(SoftVal::soft_of(Rat(k, den)));
    B.push_back(SoftVal::soft_inf());
    return B;
  }
  Element interpolate(const Element& xpE, const Element& xE) const override {
    if (!way_below(xpE, xE)) throw std::invalid_argument("interpolate: not <<");
    const SoftVal &xp = as_soft(xpE), &x = as_soft(xE);
    if (!x.inf && xp.q == x.q) return xE;  // x compact here by the << rule
    // strictly between val(x') and val(x), p-adic compact, minimal denominator
    Rat lo = xp.q;
    if (x.inf) return SoftVal::compact(Rat(Int(lo) + 1));
    Rat hi = x.q;
    Int den = 1;
    while (true) {
      Int a = Int(lo * den) + 1;  // smallest numerator with a/den > lo
      if (Rat(a, den) < hi) return SoftVal::compact(Rat(a, den));
      den *= p_;
    }
  }
  std::vector<Element> approach_chain(const Element& xE, int len) const override {
    const SoftVal& x = as_soft(xE);
    if (compact(xE)) return std::vector<Element>(static_cast<std::size_t>(len), xE);
    std::vector<Element> c;  // p-adic steps keep chain prefixes inside the basis sets
    Int pk = p_;
    for (int k = 1; k <= len; ++k, pk *= p_)
      c.push_back(x.inf ? SoftVal::soft_of(Rat(k))
                        : SoftVal::soft_of(x.q * Rat(pk - 1, pk)));
    return c;
  }
  bool in_basis(const Element& xE, int depth) const override {
    const SoftVal& x = as_soft(xE);
    if (x.inf) return true;
    if (x.q > depth) return false;
    if (denominator(Rat(x.q * ipow(p_, depth))) != 1) return false;
    return x.soft ? x.q > 0 : x.q >= 0;
  }

 private:
  int p_;
};

// ------------------------------------------------- truncated E_p -----------
// Carrier {x ∈ N[1/p] ⊔ (0,1] : x ≤ 1} ∪ {∞}; ∞ is a genuine top element and is
// compact (as in every E_{p^k} stage), unlike Soft(∞) in S_p.
class TruncatedEpSem : public CuSemigroup {
 public:
  explicit TruncatedEpSem(int p) : p_(p) {}
  std::string id() const override { return "Ep_" + std::to_string(p_); }
  bool valid(const Element& x) const override {
    if (!std::holds_alternative<SoftVal>(x)) return false;
    const SoftVal& v = as_soft(x);
    if (v.inf) return v.soft;
    if (v.q < 0 || v.q > 1) return false;
    if (!v.soft) return p_adic(v.q, p_);
    return v.q > 0;
  }
  Element zero() const override { return SoftVal::compact(0); }
  Element add(const Element& a, const Element& b) const override {
    SoftVal s = softval_add(as_soft(a), as_soft(b));
    // saturate: x + y = ∞ whenever the sum is strictly greater than 1_c
    if (!softval_leq(s, SoftVal::compact(1))) return SoftVal::soft_inf();
    return s;
  }
  bool leq(const Element& a, const Element& b) const override {
    return softval_leq(as_soft(a), as_soft(b));
  }
  bool way_below(const Element& a, const Element& b) const override {
    const SoftVal &x = as_soft(a), &y = as_soft(b);
    if (x.inf) return y.inf;  // ∞ ≪ ∞ holds here (stagewise compactness survives)
    return softval_way_below(x, y);
  }
  std::vector<Element> basis(int depth) const override {
    std::vector<Element> B;
    Int den = ipow(p_, depth);
    for (Int k = 0; k <= den; ++k) B.push_back(SoftVal::compact(Rat(k, den)));
    for (Int k = 1; k <= den; ++k) B.push_back(SoftVal::soft_of(Rat(k, den)));
    B.push_back(SoftVal::soft_inf());
    return B;
  }
  Element interpolate(const Element& xpE, const Element& xE) const override {
    if (!way_below(xpE, xE)) throw std::invalid_argument("interpolate: not <<");
    const SoftVal &xp = as_soft(xpE), &x = as_soft(xE);
    if (x.inf) return xE;  // ∞ compact: z = ∞ works
    if (xp.q == x.q) return xE;
    Rat lo = xp.q, hi = x.q;
    Int den = 1;
    while (true) {
      Int a = Int(lo * den) + 1;
      if (Rat(a, den) < hi) return SoftVal::compact(Rat(a, den));
      den *= p_;
    }
  }
  std::vector<Element> approach_chain(const Element& xE, int len) const override {
    const SoftVal& x = as_soft(xE);
    if (compact(xE)) return std::vector<Element>(static_cast<std::size_t>(len), xE);
    std::vector<Element> c;  // soft, finite value; p-adic steps (see SoftDimSem)
    Int pk = p_;
    for (int k = 1; k <= len; ++k, pk *= p_)
      c.push_back(SoftVal::soft_of(x.q * Rat(pk - 1, pk)));
    return c;
  }
  bool in_basis(const Element& xE, int depth) const override {
    const SoftVal& x = as_soft(xE);
    if (x.inf) return true;
    if (x.q > 1) return false;
    if (denominator(Rat(x.q * ipow(p_, depth))) != 1) return false;
    return x.soft ? x.q > 0 : x.q >= 0;
  }

 private:
  int p_;
};

// ------------------------------------------------------- soft ray ----------
class SoftRaySem : public CuSemigroup {
 public:
  std::string id() const override { return "Ray"; }
  bool valid(const Element& x) const override {
    if (!std::holds_alternative<SoftVal>(x)) return false;
    const SoftVal& v = as_soft(x);
    if (!v.soft) return !v.inf && v.q == 0;  // only compact element: 0
    return v.inf || v.q > 0;
  }
  Element zero() const override { return SoftVal::compact(0); }
  Element add(const Element& a, const Element& b) const override {
    return softval_add(as_soft(a), as_soft(b));
  }
  bool leq(const Element& a, const Element& b) const override {
    return softval_leq(as_soft(a), as_soft(b));
  }
  bool way_below(const Element& a, const Element& b) const override {
    return softval_way_below(as_soft(a), as_soft(b));
  }
  std::vector<Element> basis(int depth) const override {
    std::vector<Element> B{zero()};
    Int den = ipow(2, depth);
    for (Int k = 1; k <= den * depth; ++k) B.push_back(SoftVal::soft_of(Rat(k, den)));
    B.push_back(SoftVal::soft_inf());
    return B;
  }
  Element interpolate(const Element& xpE, const Element& xE) const override {
    if (!way_below(xpE, xE)) throw std::invalid_argument("interpolate: not <<");
    const SoftVal &xp = as_soft(xpE), &x = as_soft(xE);
    if (!xp.soft && !x.soft) return zero();  // 0 ≪ 0
    if (x.inf) return SoftVal::soft_of(xp.q + 1);
    if (!xp.soft) return SoftVal::soft_of(x.q / 2);
    return SoftVal::soft_of((xp.q + x.q) / 2);
  }
  std::vector<Element> approach_chain(const Element& xE, int len) const override {
    const SoftVal& x = as_soft(xE);
    if (compact(xE)) return std::vector<Element>(static_cast<std::size_t>(len), xE);
    std::vector<Element> c;  // dyadic steps keep chain prefixes inside the basis sets
    Int pk = 2;
    for (int k = 1; k <= len; ++k, pk *= 2)
      c.push_back(x.inf ? SoftVal::soft_of(Rat(k)) : SoftVal::soft_of(x.q * Rat(pk - 1, pk)));
    return c;
  }
  bool in_basis(const Element& xE, int depth) const override {
    const SoftVal& x = as_soft(xE);
    if (x.inf) return x.soft;
    if (!x.soft) return x.q == 0;
    if (x.q <= 0 || x.q > depth) return false;
    return denominator(Rat(x.q * ipow(2, depth))) == 1;
  }
};

// -------------------------------------------------- Lsc([0,1], N̄) ----------
Rat min_gap(const std::vector<Rat>& cuts) {
  Rat g = 1;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) g = std::min(g, Rat(cuts[j + 1] - cuts[j]));
  return g;
}

// exact sup-convolution of the usc envelope of f over closed balls of radius d
StepFn sup_convolve(const StepFn& f, const Rat& d) {
  std::vector<Rat> cuts{Rat(0)};
  for (auto& t : f.cuts) {
    if (t - d > 0 && t - d < 1) cuts.push_back(t - d);
    if (t > 0 && t < 1) cuts.push_back(t);
    if (t + d > 0 && t + d < 1) cuts.push_back(t + d);
  }
  cuts.push_back(Rat(1));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // max of the usc envelope of f over (lo,hi) or [lo,hi]; f.cuts stay in [0,1],
  // so comparing against the unclamped window handles domain boundaries
  auto env_max_over = [&](const Rat& lo, const Rat& hi, bool open) {
    ExtNat m(0);
    for (std::size_t j = 0; j < f.cuts.size(); ++j) {
      bool in = open ? (lo < f.cuts[j] && f.cuts[j] < hi)
                     : (lo <= f.cuts[j] && f.cuts[j] <= hi);
      if (in) m = max(m, stepfn_env_pt(f, j));
    }
    for (std::size_t j = 0; j + 1 < f.cuts.size(); ++j)
      if (f.cuts[j] < hi && f.cuts[j + 1] > lo) m = max(m, f.cell[j]);
    return m;
  };

  StepFn g;
  g.cuts = cuts;
  // cell value = sup over the union of closed d-balls centered in the open
  // cell, which is the open window (cuts[j]-d, cuts[j+1]+d)
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
    g.cell.push_back(env_max_over(cuts[j] - d, cuts[j + 1] + d, true));
  for (std::size_t j = 0; j < cuts.size(); ++j)
    g.pt.push_back(env_max_over(cuts[j] - d, cuts[j] + d, false));
  // sup-convolutions are usc; repair breakpoints down to the lsc envelope
  for (std::size_t j = 0; j < g.pt.size(); ++j) {
    ExtNat lim = j == 0                  ? g.cell[0]
                 : j == g.pt.size() - 1  ? g.cell[j - 1]
                                         : min(g.cell[j - 1], g.cell[j]);
    g.pt[j] = min(g.pt[j], lim);
  }
  return g.normalized();
}

// erosion min over closed balls of radius d, values capped at `cap`
StepFn erode(const StepFn& f, const Rat& d, const ExtNat& cap) {
  std::vector<Rat> cuts{Rat(0)};
  for (auto& t : f.cuts) {
    if (t - d > 0 && t - d < 1) cuts.push_back(t - d);
    if (t > 0 && t < 1) cuts.push_back(t);
    if (t + d > 0 && t + d < 1) cuts.push_back(t + d);
  }
  cuts.push_back(Rat(1));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto min_over = [&](const Rat& lo, const Rat& hi) {
    Rat a = std::max(lo, Rat(0)), b = std::min(hi, Rat(1));
    ExtNat m = ExtNat::infinity();
    for (std::size_t j = 0; j < f.cuts.size(); ++j)
      if (a <= f.cuts[j] && f.cuts[j] <= b) m = min(m, f.pt[j]);
    for (std::size_t j = 0; j + 1 < f.cuts.size(); ++j)
      if (f.cuts[j] < b && f.cuts[j + 1] > a) m = min(m, f.cell[j]);
    return min(m, cap);
  };

  StepFn g;
  g.cuts = cuts;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
    g.cell.push_back(min_over(cuts[j] - d, cuts[j + 1] + d));
  for (std::size_t j = 0; j < cuts.size(); ++j) g.pt.push_back(min_over(cuts[j] - d, cuts[j] + d));
  return g.normalized();
}

class IntervalLscSem : public CuSemigroup {
 public:
  std::string id() const override { return "Lsc[0,1]"; }
  bool valid(const Element& x) const override {
    if (!std::holds_alternative<StepFn>(x)) return false;
    try {
      as_step(x).validate();
    } catch (...) {
      return false;
    }
    return true;
  }
  Element zero() const override { return StepFn::constant(ExtNat(0)); }
  Element add(const Element& a, const Element& b) const override {
    return stepfn_add(as_step(a), as_step(b));
  }
  bool leq(const Element& a, const Element& b) const override {
    return stepfn_leq(as_step(a), as_step(b));
  }
  bool way_below(const Element& a, const Element& b) const override {
    return stepfn_way_below(as_step(a), as_step(b));
  }
  std::vector<Element> basis(int depth) const override {
    return enum_basis(depth, false);
  }
  Element interpolate(const Element& xpE, const Element& xE) const override {
    const StepFn &fp = as_step(xpE), &f = as_step(xE);
    if (!stepfn_way_below(fp, f)) throw std::invalid_argument("interpolate: not <<");
    Rat d = min_gap(merge_cuts(fp.cuts, f.cuts)) / 2;
    StepFn g = sup_convolve(fp, d);
    if (!stepfn_way_below(fp, g) || !stepfn_way_below(g, f))
      throw std::runtime_error("Lsc interpolation failed (representation)");
    return g;
  }
  std::vector<Element> approach_chain(const Element& xE, int len) const override {
    const StepFn& f = as_step(xE);
    if (compact(xE)) return std::vector<Element>(static_cast<std::size_t>(len), xE);
    Rat g0 = min_gap(f.cuts);
    std::vector<Element> c;
    Rat r = g0 / 4;
    for (int k = 1; k <= len; ++k, r /= 2) c.push_back(erode(f, r, ExtNat(k)));
    return c;
  }

 protected:
  // ranked enumeration: by weight w = grid level + value bound, lex within;
  // deterministic, depth-independent order, truncated by a growing cap.
  std::vector<Element> enum_basis(int depth, bool increasing_only) const {
    std::vector<Element> B;
    std::set<std::string> seen;
    std::size_t cap = 40 + 60 * static_cast<std::size_t>(depth);
    for (int w = 0; w <= 2 * depth && B.size() < cap; ++w) {
      for (int lvl = 0; lvl <= w && B.size() < cap; ++lvl) {
        int vmax = w - lvl;
        int cells = 1 << lvl;
        if (cells > 16 || vmax > 6) continue;
        std::vector<ExtNat> vals;
        for (int v = 0; v <= vmax; ++v) vals.push_back(ExtNat(v));
        if (vmax >= 1) vals.push_back(ExtNat::infinity());
        std::vector<std::size_t> idx(static_cast<std::size_t>(cells), 0);
        while (B.size() < cap) {
          bool ok = true;
          if (increasing_only)
            for (int j = 0; j + 1 < cells && ok; ++j)
              ok = vals[idx[static_cast<std::size_t>(j)]] <=
                   vals[idx[static_cast<std::size_t>(j + 1)]];
          if (ok) {
            StepFn f;
            for (int j = 0; j <= cells; ++j) f.cuts.push_back(Rat(j, cells));
            for (int j = 0; j < cells; ++j) f.cell.push_back(vals[idx[static_cast<std::size_t>(j)]]);
            f.pt.push_back(increasing_only ? ExtNat(0) : f.cell.front());
            for (int j = 1; j < cells; ++j)
              f.pt.push_back(increasing_only ? f.cell[static_cast<std::size_t>(j - 1)]
                                             : min(f.cell[static_cast<std::size_t>(j - 1)],
                                                   f.cell[static_cast<std::size_t>(j)]));
            f.pt.push_back(f.cell.back());
            if (increasing_only && !f.cell.empty() && !(f.pt[0] <= f.cell[0])) ok = false;
            if (ok) {
              f = f.normalized();
              if (seen.insert(f.str()).second) B.push_back(std::move(f));
            }
          }
          std::size_t j = 0;
          while (j < idx.size() && ++idx[j] == vals.size()) idx[j++] = 0;
          if (j == idx.size()) break;
        }
      }
    }
    return B;
  }
};

class GeneratorGSem : public IntervalLscSem {
 public:
  std::string id() const override { return "G"; }
  bool valid(const Element& x) const override {
    if (!IntervalLscSem::valid(x)) return false;
    const StepFn& f = as_step(x);
    if (f.pt[0] != ExtNat(0)) return false;
    for (std::size_t j = 0; j + 1 < f.cell.size(); ++j)
      if (!(f.cell[j] <= f.cell[j + 1])) return false;
    for (std::size_t j = 1; j < f.pt.size(); ++j)
      if (f.pt[j] != f.cell[j - 1]) return false;  // increasing + lsc forces this
    return true;
  }
  std::vector<Element> basis(int depth) const override {
    return enum_basis(depth, true);
  }
  // the depth-n family is the enumerated prefix extended, past the depth
  // where the enumeration saturates its grid, by every G staircase with cuts
  // on the dyadic 1/2^n grid and finite values at most n; it is increasing
  // in n and its union is sup-dense
  bool in_basis(const Element& xE, int depth) const override {
    if (CuSemigroup::in_basis(xE, depth)) return true;
    if (depth <= 4 || !valid(xE)) return false;
    const StepFn& f = as_step(xE);
    Int grid = ipow(2, std::min(depth, 30));
    for (auto& c : f.cuts)
      if (denominator(Rat(c * grid)) != 1) return false;
    for (auto& v : f.cell)
      if (!v.is_inf() && v.n > depth) return false;
    return true;
  }
  std::vector<Element> approach_chain(const Element& xE, int len) const override {
    const StepFn& f = as_step(xE);
    if (compact(xE)) return std::vector<Element>(static_cast<std::size_t>(len), xE);
    // pullback-shift the staircase right by a shrinking dyadic and cap the
    // values: stays in G form and on dyadic grids, so the chain remains
    // inside the basis family
    std::vector<Element> c;
    for (int k = 1; k <= len; ++k) {
      Rat s(1, Int(ipow(2, k + 1)));
      ExtNat cap(k);
      StepFn g = stepfn_refine(f, {Rat(1 - s)});
      StepFn r;
      r.cuts.emplace_back(0);
      r.pt.emplace_back(0);
      r.cell.emplace_back(0);  // G form: value 0 at and near 0
      for (std::size_t j = 0; j < g.cuts.size() && g.cuts[j] <= 1 - s; ++j) {
        r.cuts.push_back(Rat(g.cuts[j] + s));
        r.pt.push_back(min(g.pt[j], cap));
        if (g.cuts[j] < 1 - s) r.cell.push_back(min(g.cell[j], cap));
      }
      c.push_back(r.normalized());
    }
    return c;
  }
  Element interpolate(const Element& xpE, const Element& xE) const override {
    Element zE = IntervalLscSem::interpolate(xpE, xE);
    StepFn z = as_step(zE);
    // repair to G form: pt_0 = 0, pt_j = left cell (only lowers values)
    z.pt[0] = ExtNat(0);
    for (std::size_t j = 1; j < z.pt.size(); ++j) z.pt[j] = z.cell[j - 1];
    z = z.normalized();
    if (!stepfn_way_below(as_step(xpE), z) || !stepfn_way_below(z, as_step(xE)))
      throw std::runtime_error("G interpolation failed (representation)");
    return z;
  }
};

}  // namespace

Sem make_extnat() { return std::make_shared<ExtNatSem>(); }

Sem make_elementary(int n) {
  if (n < 1) throw std::invalid_argument("make_elementary: n >= 1");
  return std::make_shared<ElementarySem>(n);
}

Sem make_two_point() { return std::make_shared<ElementarySem>(0); }

Sem make_simplicial(int r) {
  if (r < 1) throw std::invalid_argument("make_simplicial: r >= 1");
  return std::make_shared<SimplicialSem>(r, "Nbar^" + std::to_string(r));
}

Sem make_softdim(int p) {
  if (!is_prime(p)) throw std::invalid_argument("make_softdim: p prime");
  return std::make_shared<SoftDimSem>(p);
}

Sem make_truncated_ep(int p) {
  if (!is_prime(p)) throw std::invalid_argument("make_truncated_ep: p prime");
  return std::make_shared<TruncatedEpSem>(p);
}

Sem make_soft_ray() { return std::make_shared<SoftRaySem>(); }

Sem make_steplsc_discrete(int r) { return make_simplicial(r); }

Sem make_steplsc_interval() { return std::make_shared<IntervalLscSem>(); }

Sem make_generator_g() { return std::make_shared<GeneratorGSem>(); }

Element softdim_embed_stage(int p, int stage, const ExtNat& x) {
  if (x.is_inf()) return SoftVal::soft_inf();
  return SoftVal::compact(Rat(Int(x.n), ipow(p, stage)));
}

Element truncated_ep_embed_stage(int p, int stage, const ExtNat& x) {
  if (x.is_inf()) return SoftVal::soft_inf();
  return SoftVal::compact(Rat(Int(x.n), ipow(p, stage)));
}

}  // namespace cuf
