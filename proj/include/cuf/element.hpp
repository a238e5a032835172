// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_ELEMENT_HPP
#define CUF_ELEMENT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cuf {

using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

std::string rat_str(const Rat& q);
Rat parse_rat(const std::string& s);

// ---------------------------------------------------------------------------
// Extended naturals N̄ = {0,1,2,...,∞}. Addition saturates only at ∞; finite
// overflow is a hard error (desk scale never gets close).
struct ExtNat {
  bool inf = false;
  std::int64_t n = 0;

  ExtNat() = default;
  ExtNat(std::int64_t v) : n(v) {  // NOLINT: implicit by design
    if (v < 0) throw std::invalid_argument("ExtNat: negative");
  }
  static ExtNat infinity() {
    ExtNat x;
    x.inf = true;
    return x;
  }
  bool is_inf() const { return inf; }
  friend bool operator==(const ExtNat& a, const ExtNat& b) {
    return a.inf == b.inf && (a.inf || a.n == b.n);
  }
  friend bool operator!=(const ExtNat& a, const ExtNat& b) { return !(a == b); }
  friend bool operator<=(const ExtNat& a, const ExtNat& b) {
    if (b.inf) return true;
    if (a.inf) return false;
    return a.n <= b.n;
  }
  friend bool operator<(const ExtNat& a, const ExtNat& b) { return a <= b && a != b; }
  friend ExtNat operator+(const ExtNat& a, const ExtNat& b) {
    if (a.inf || b.inf) return infinity();
    std::int64_t r = 0;
    if (__builtin_add_overflow(a.n, b.n, &r)) throw std::overflow_error("ExtNat add");
    return ExtNat(r);
  }
  // n ≪ m iff n ≤ m and n finite; in particular ∞ ≪ ∞ fails.
  friend bool way_below_nbar(const ExtNat& a, const ExtNat& b) { return !a.inf && a <= b; }
  std::string str() const { return inf ? "inf" : std::to_string(n); }
};

ExtNat min(const ExtNat& a, const ExtNat& b);
ExtNat max(const ExtNat& a, const ExtNat& b);
// Cu product on N̄: 0 absorbs even against ∞; finite overflow is a hard error.
ExtNat ext_mul(const ExtNat& a, const ExtNat& b);

// ---------------------------------------------------------------------------
// Tagged value for S_p-like semigroups: Compact(q) or Soft(q) (q may be ∞ only
// when soft). Zero is Compact(0).
struct SoftVal {
  bool soft = false;
  bool inf = false;  // only with soft
  Rat q = 0;

  static SoftVal compact(const Rat& v) {
    SoftVal x;
    x.q = v;
    return x;
  }
  static SoftVal soft_of(const Rat& v) {
    SoftVal x;
    x.soft = true;
    x.q = v;
    return x;
  }
  static SoftVal soft_inf() {
    SoftVal x;
    x.soft = true;
    x.inf = true;
    return x;
  }
  bool is_compact_tag() const { return !soft; }
  friend bool operator==(const SoftVal& a, const SoftVal& b) {
    return a.soft == b.soft && a.inf == b.inf && (a.inf || a.q == b.q);
  }
  std::string str() const {
    if (inf) return "Soft(inf)";
    return std::string(soft ? "Soft(" : "Compact(") + rat_str(q) + ")";
  }
};

// S_p order: x ≤ y iff val(x) < val(y), or equal vals and not (x compact, y soft).
bool softval_leq(const SoftVal& a, const SoftVal& b);
// S_p ≪: x ≪ y iff val(x) < val(y), or equal vals and y compact.
bool softval_way_below(const SoftVal& a, const SoftVal& b);
// Compact+Compact = Compact; any soft summand makes the sum soft.
SoftVal softval_add(const SoftVal& a, const SoftVal& b);

// ---------------------------------------------------------------------------
// Piecewise-constant lsc function on [0,1]: rational cuts 0 = t_0 < ... < t_m = 1,
// a value per open cell (t_j, t_{j+1}) and an explicit value per breakpoint.
// Lower semicontinuity: pt[j] ≤ min of adjacent cell values (pt[0] ≤ cell[0],
// pt[m] ≤ cell[m-1]).
struct StepFn {
  std::vector<Rat> cuts;      // size m+1
  std::vector<ExtNat> cell;   // size m
  std::vector<ExtNat> pt;     // size m+1

  static StepFn constant(const ExtNat& v);
  // indicator of the open interval (a,b) ∩ [0,1]; (t,1] is indicator(t, 1) with
  // right endpoint closed via pt value 1 at t=1 (see make below).
  static StepFn indicator(const Rat& a, const Rat& b);
  static StepFn indicator_right(const Rat& t);  // 1_{(t,1]}

  void validate() const;      // throws on malformed / non-lsc data
  StepFn normalized() const;  // merge redundant cuts
  ExtNat at(const Rat& x) const;

  friend bool operator==(const StepFn& a, const StepFn& b);
  std::string str() const;
};

StepFn stepfn_refine(const StepFn& f, const std::vector<Rat>& cuts);
std::vector<Rat> merge_cuts(const std::vector<Rat>& a, const std::vector<Rat>& b);
StepFn stepfn_add(const StepFn& a, const StepFn& b);
bool stepfn_leq(const StepFn& a, const StepFn& b);
// f ≪ g iff f finite everywhere and the usc envelope of f is ≤ g pointwise.
bool stepfn_way_below(const StepFn& a, const StepFn& b);
bool stepfn_finite(const StepFn& a);
// usc envelope evaluated on f's own grid: env cell = cell, env pt = max(pt, adj cells)
ExtNat stepfn_env_pt(const StepFn& f, std::size_t j);

// ---------------------------------------------------------------------------
using Tuple = std::vector<ExtNat>;

using Element = std::variant<ExtNat, Tuple, SoftVal, StepFn>;

bool elem_eq(const Element& a, const Element& b);
// Canonical encoding used for deterministic tie-breaks, dedup and archives.
std::string elem_encode(const Element& e);
bool elem_less(const Element& a, const Element& b);  // lexicographic on encoding

}  // namespace cuf

#endif
