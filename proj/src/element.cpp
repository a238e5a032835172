// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/element.hpp"

#include <algorithm>
#include <sstream>

namespace cuf {

std::string rat_str(const Rat& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

ExtNat min(const ExtNat& a, const ExtNat& b) { return a <= b ? a : b; }
ExtNat max(const ExtNat& a, const ExtNat& b) { return a <= b ? b : a; }

ExtNat ext_mul(const ExtNat& a, const ExtNat& b) {
  if ((!a.inf && a.n == 0) || (!b.inf && b.n == 0)) return ExtNat(0);
  if (a.inf || b.inf) return ExtNat::infinity();
  if (b.n > INT64_MAX / a.n) throw std::overflow_error("ext_mul");
  return ExtNat(a.n * b.n);
}

// --------------------------------------------------------------------------
bool softval_leq(const SoftVal& a, const SoftVal& b) {
  if (b.inf) return true;
  if (a.inf) return false;
  if (a.q != b.q) return a.q < b.q;
  return !(a.is_compact_tag() && b.soft);
}

bool softval_way_below(const SoftVal& a, const SoftVal& b) {
  if (a.inf) return false;              // Soft(inf) ≪ nothing, not even itself
  if (b.inf) return true;               // every finite value ≪ Soft(inf)
  if (a.q != b.q) return a.q < b.q;
  return b.is_compact_tag();
}

SoftVal softval_add(const SoftVal& a, const SoftVal& b) {
  if (a.inf || b.inf) return SoftVal::soft_inf();
  SoftVal r;
  r.q = a.q + b.q;
  r.soft = a.soft || b.soft;
  return r;
}

// --------------------------------------------------------------------------
StepFn StepFn::constant(const ExtNat& v) {
  StepFn f;
  f.cuts = {Rat(0), Rat(1)};
  f.cell = {v};
  f.pt = {v, v};
  return f;
}

StepFn StepFn::indicator(const Rat& a, const Rat& b) {
  Rat lo = std::max(a, Rat(0)), hi = std::min(b, Rat(1));
  if (!(lo < hi)) return constant(ExtNat(0));
  StepFn f;
  f.cuts.push_back(Rat(0));
  if (lo != 0) f.cuts.push_back(lo);
  if (hi != 1) f.cuts.push_back(hi);
  f.cuts.push_back(Rat(1));
  f.cell.assign(f.cuts.size() - 1, ExtNat(0));
  f.pt.assign(f.cuts.size(), ExtNat(0));
  for (std::size_t j = 0; j + 1 < f.cuts.size(); ++j)
    if (f.cuts[j] >= lo && f.cuts[j + 1] <= hi) f.cell[j] = ExtNat(1);
  // interior breakpoints strictly inside (lo,hi) carry value 1
  for (std::size_t j = 0; j < f.cuts.size(); ++j)
    if (f.cuts[j] > lo && f.cuts[j] < hi) f.pt[j] = ExtNat(1);
  if (lo == 0 && hi > 0) { /* 0 stays 0: interval open at lo */ }
  return f.normalized();
}

StepFn StepFn::indicator_right(const Rat& t) {
  if (t >= 1) return constant(ExtNat(0));
  StepFn f = indicator(t, Rat(1));
  f.pt.back() = ExtNat(1);  // (t,1] is closed at 1; lsc holds (left liminf = 1)
  return f.normalized();
}

void StepFn::validate() const {
  if (cuts.size() < 2 || cell.size() + 1 != cuts.size() || pt.size() != cuts.size())
    throw std::invalid_argument("StepFn: shape");
  if (cuts.front() != 0 || cuts.back() != 1) throw std::invalid_argument("StepFn: range");
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
    if (!(cuts[j] < cuts[j + 1])) throw std::invalid_argument("StepFn: cuts not increasing");
  for (std::size_t j = 0; j < pt.size(); ++j) {
    ExtNat lim = j == 0                ? cell[0]
                 : j == pt.size() - 1  ? cell[j - 1]
                                       : min(cell[j - 1], cell[j]);
    if (!(pt[j] <= lim)) throw std::invalid_argument("StepFn: not lsc at breakpoint");
  }
}

StepFn StepFn::normalized() const {
  StepFn r;
  r.cuts.push_back(cuts[0]);
  r.pt.push_back(pt[0]);
  for (std::size_t j = 0; j < cell.size(); ++j) {
    if (!r.cell.empty() && r.cell.back() == cell[j] && pt[j] == cell[j]) {
      // merge: drop interior breakpoint j
      continue;
    }
    if (j > 0) {
      r.cuts.push_back(cuts[j]);
      r.pt.push_back(pt[j]);
    }
    r.cell.push_back(cell[j]);
  }
  r.cuts.push_back(cuts.back());
  r.pt.push_back(pt.back());
  return r;
}

ExtNat StepFn::at(const Rat& x) const {
  for (std::size_t j = 0; j < cuts.size(); ++j)
    if (cuts[j] == x) return pt[j];
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
    if (cuts[j] < x && x < cuts[j + 1]) return cell[j];
  throw std::invalid_argument("StepFn::at: outside [0,1]");
}

bool operator==(const StepFn& a, const StepFn& b) {
  StepFn x = a.normalized(), y = b.normalized();
  return x.cuts == y.cuts && x.cell == y.cell && x.pt == y.pt;
}

std::string StepFn::str() const {
  StepFn f = normalized();
  std::ostringstream os;
  os << "Step[";
  for (std::size_t j = 0; j < f.cell.size(); ++j) {
    os << rat_str(f.cuts[j]) << ":" << f.pt[j].str() << "|" << f.cell[j].str() << "|";
  }
  os << rat_str(f.cuts.back()) << ":" << f.pt.back().str() << "]";
  return os.str();
}

std::vector<Rat> merge_cuts(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  std::vector<Rat> r;
  r.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

StepFn stepfn_refine(const StepFn& f, const std::vector<Rat>& cuts) {
  StepFn r;
  r.cuts = merge_cuts(f.cuts, cuts);
  r.cell.reserve(r.cuts.size() - 1);
  r.pt.reserve(r.cuts.size());
  std::size_t j = 0;  // index into f.cuts with f.cuts[j] <= r.cuts[i]
  for (std::size_t i = 0; i < r.cuts.size(); ++i) {
    while (j + 1 < f.cuts.size() && f.cuts[j + 1] <= r.cuts[i]) ++j;
    r.pt.push_back(f.cuts[j] == r.cuts[i] ? f.pt[j] : f.cell[j]);
    if (i + 1 < r.cuts.size()) r.cell.push_back(f.cell[j]);
  }
  return r;
}

StepFn stepfn_add(const StepFn& a, const StepFn& b) {
  auto cuts = merge_cuts(a.cuts, b.cuts);
  StepFn x = stepfn_refine(a, cuts), y = stepfn_refine(b, cuts);
  StepFn r = x;
  for (std::size_t j = 0; j < r.cell.size(); ++j) r.cell[j] = x.cell[j] + y.cell[j];
  for (std::size_t j = 0; j < r.pt.size(); ++j) r.pt[j] = x.pt[j] + y.pt[j];
  return r.normalized();
}

bool stepfn_leq(const StepFn& a, const StepFn& b) {
  auto cuts = merge_cuts(a.cuts, b.cuts);
  StepFn x = stepfn_refine(a, cuts), y = stepfn_refine(b, cuts);
  for (std::size_t j = 0; j < x.cell.size(); ++j)
    if (!(x.cell[j] <= y.cell[j])) return false;
  for (std::size_t j = 0; j < x.pt.size(); ++j)
    if (!(x.pt[j] <= y.pt[j])) return false;
  return true;
}

bool stepfn_finite(const StepFn& a) {
  for (auto& v : a.cell)
    if (v.is_inf()) return false;
  for (auto& v : a.pt)
    if (v.is_inf()) return false;
  return true;
}

ExtNat stepfn_env_pt(const StepFn& f, std::size_t j) {
  ExtNat e = f.pt[j];
  if (j > 0) e = max(e, f.cell[j - 1]);
  if (j < f.cell.size()) e = max(e, f.cell[j]);
  return e;
}

bool stepfn_way_below(const StepFn& a, const StepFn& b) {
  if (!stepfn_finite(a)) return false;
  auto cuts = merge_cuts(a.cuts, b.cuts);
  StepFn x = stepfn_refine(a, cuts), y = stepfn_refine(b, cuts);
  for (std::size_t j = 0; j < x.cell.size(); ++j)
    if (!(x.cell[j] <= y.cell[j])) return false;
  for (std::size_t j = 0; j < x.pt.size(); ++j)
    if (!(stepfn_env_pt(x, j) <= y.pt[j])) return false;
  return true;
}

// --------------------------------------------------------------------------
bool elem_eq(const Element& a, const Element& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<ExtNat>(&a)) return *x == std::get<ExtNat>(b);
  if (auto* x = std::get_if<Tuple>(&a)) return *x == std::get<Tuple>(b);
  if (auto* x = std::get_if<SoftVal>(&a)) return *x == std::get<SoftVal>(b);
  return std::get<StepFn>(a) == std::get<StepFn>(b);
}

std::string elem_encode(const Element& e) {
  struct V {
    std::string operator()(const ExtNat& x) const { return "N:" + x.str(); }
    std::string operator()(const Tuple& x) const {
      std::string s = "T:[";
      for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + x[i].str();
      return s + "]";
    }
    std::string operator()(const SoftVal& x) const { return "S:" + x.str(); }
    std::string operator()(const StepFn& x) const { return "F:" + x.str(); }
  };
  return std::visit(V{}, e);
}

bool elem_less(const Element& a, const Element& b) {
  const std::string ea = elem_encode(a), eb = elem_encode(b);
  if (ea.size() != eb.size()) return ea.size() < eb.size();  // short-lex: stable + natural
  return ea < eb;
}

}  // namespace cuf
