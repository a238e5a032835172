// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/fraisse.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cuf/hom.hpp"
#include "cuf/instances.hpp"
#include "cuf/pl.hpp"

namespace cuf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Cantor unpairing a ↦ (u, v)
std::pair<int, int> unpair(int a) {
  int w = 0;
  while ((w + 1) * (w + 2) / 2 <= a) ++w;
  int v = a - w * (w + 1) / 2;
  return {w - v, v};
}

void sort_by_desc(std::vector<CuMorphism>& hs) {
  std::stable_sort(hs.begin(), hs.end(),
                   [](const CuMorphism& a, const CuMorphism& b) { return a.desc() < b.desc(); });
}

int parse_int(const std::string& s, std::size_t& pos) {
  std::size_t end = pos;
  while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '-'))
    ++end;
  int v = std::stoi(s.substr(pos, end - pos));
  pos = end;
  return v;
}

// id "E_n" / "TwoPoint" → n
int elementary_bound_of(const Sem& S) {
  const std::string& id = S->id();
  if (id == "TwoPoint") return 0;
  if (id.rfind("E_", 0) == 0) return std::stoi(id.substr(2));
  throw std::invalid_argument("not an elementary semigroup: " + id);
}

int simplicial_rank_of(const Sem& S) {
  const std::string& id = S->id();
  if (id.rfind("Nbar^", 0) == 0) return std::stoi(id.substr(5));
  if (id == "Nbar") return 1;
  throw std::invalid_argument("not simplicial: " + id);
}

// exponent k with n^k = m
int exact_log(int n, std::int64_t m) {
  int k = 0;
  std::int64_t v = 1;
  while (v < m) {
    v *= n;
    ++k;
  }
  if (v != m) throw std::invalid_argument("not a power of the base");
  return k;
}

CuMorphism mulpow_morphism(int p, int k) {
  Sem N = make_extnat();
  Int f = ipow(p, k);
  if (f > INT64_MAX / 4) throw std::overflow_error("mulpow");
  ExtNat factor(f.convert_to<std::int64_t>());
  std::ostringstream os;
  os << "mulpow:" << p << "," << k;
  return CuMorphism(N, N, os.str(), [factor](const Element& x) -> Element {
    return ext_mul(factor, std::get<ExtNat>(x));
  });
}

// "mulpow:p,k" → k (throws otherwise)
int mulpow_exp(const CuMorphism& m) {
  const std::string& d = m.desc();
  if (d.rfind("mulpow:", 0) != 0) {
    if (d.rfind("id[", 0) == 0) return 0;
    throw std::invalid_argument("not a mulpow morphism: " + d);
  }
  std::size_t pos = d.find(',') + 1;
  return parse_int(d, pos);
}

// "dual:r,t:[f0 f1 ...]" → (r, t, f)
std::optional<std::tuple<int, int, std::vector<int>>> parse_dual(const std::string& d) {
  if (d.rfind("dual:", 0) != 0) return std::nullopt;
  std::size_t pos = 5;
  int r = parse_int(d, pos);
  ++pos;  // ','
  int t = parse_int(d, pos);
  pos += 2;  // ":["
  std::vector<int> f;
  while (d[pos] != ']') {
    if (d[pos] == ' ') ++pos;
    f.push_back(parse_int(d, pos));
  }
  if (static_cast<int>(f.size()) != t) return std::nullopt;
  return std::make_tuple(r, t, f);
}

bool composites_exact(const CuMorphism& l, const CuMorphism& r, int depth = 3) {
  auto B = l.dom()->basis(depth);
  if (B.size() > 60) B.resize(60);
  for (auto& x : B)
    if (!l.cod()->eq(l(x), r(x))) return false;
  return true;
}

}  // namespace

// ------------------------------------------------------- built-in categories

FraisseCategory cat_sp(int p) {
  if (!is_prime(p)) throw std::invalid_argument("cat_sp: p prime");
  FraisseCategory cat;
  cat.name = "s_" + std::to_string(p);
  Sem N = make_extnat();
  cat.object = [N](int) { return N; };
  cat.homs = [p](const Sem& A, const Sem& B, int bound) {
    std::vector<CuMorphism> hs;
    if (A->id() != "Nbar" || B->id() != "Nbar") return hs;
    for (int k = 0; k <= bound; ++k) hs.push_back(mulpow_morphism(p, k));
    return hs;  // already in enumeration order (k ascending)
  };
  cat.amalgamator = [p](const CuMorphism& a1, const CuMorphism& a2,
                        const FiniteSubset&) -> std::optional<Amalgam> {
    // read the exponents off the value at 1 (the inputs may be composites,
    // whose descriptions do not carry a single exponent)
    auto exp_of = [p](const CuMorphism& m) {
      ExtNat v = std::get<ExtNat>(m(Element(ExtNat(1))));
      if (v.inf) throw std::invalid_argument("cat_sp amalgamator: infinite multiplier");
      return exact_log(p, v.n);
    };
    Amalgam am;
    am.C = a1.cod();
    am.beta1 = mulpow_morphism(p, exp_of(a2));
    am.beta2 = mulpow_morphism(p, exp_of(a1));
    return am;
  };
  return cat;
}

FraisseCategory cat_einf() {
  FraisseCategory cat;
  cat.name = "e_inf";
  auto cache = std::make_shared<std::map<int, Sem>>();
  cat.object = [cache](int i) {
    auto it = cache->find(i);
    if (it != cache->end()) return it->second;
    return (*cache)[i] = make_elementary(i + 1);
  };
  cat.homs = [](const Sem& A, const Sem& B, int) {
    int n = elementary_bound_of(A), m = elementary_bound_of(B);
    std::vector<CuMorphism> hs;
    for (auto& h : elementary_enumerate(n, m, false))
      if (h.desc().find("k=0") == std::string::npos) hs.push_back(h);  // nonzero only
    sort_by_desc(hs);
    return hs;
  };
  cat.amalgamator = [](const CuMorphism& a1, const CuMorphism& a2,
                       const FiniteSubset&) -> std::optional<Amalgam> {
    int m1 = elementary_bound_of(a1.cod()), m2 = elementary_bound_of(a2.cod());
    int m = std::max(m1, m2);
    Amalgam am;
    am.C = make_elementary(m);
    am.beta1 = elementary_morphism(m1, m, ExtNat::infinity());
    am.beta2 = elementary_morphism(m2, m, ExtNat::infinity());
    return am;
  };
  return cat;
}

FraisseCategory cat_en(int n, int max_exp) {
  if (n < 2) throw std::invalid_argument("cat_en: n >= 2");
  FraisseCategory cat;
  cat.name = "e_" + std::to_string(n);
  auto cache = std::make_shared<std::map<int, Sem>>();
  cat.object = [cache, n, max_exp](int i) {
    int k = std::min(i, max_exp);
    auto it = cache->find(k);
    if (it != cache->end()) return it->second;
    return (*cache)[k] = make_elementary(
               static_cast<int>(ipow(n, k).convert_to<std::int64_t>()));
  };
  cat.homs = [n](const Sem& A, const Sem& B, int) {
    std::vector<CuMorphism> hs;
    int a = exact_log(n, elementary_bound_of(A));
    int b = exact_log(n, elementary_bound_of(B));
    if (a <= b) hs.push_back(en_category_embedding(n, a, b));
    return hs;
  };
  cat.amalgamator = [n](const CuMorphism& a1, const CuMorphism& a2,
                        const FiniteSubset&) -> std::optional<Amalgam> {
    int b = exact_log(n, elementary_bound_of(a1.cod()));
    int c = exact_log(n, elementary_bound_of(a2.cod()));
    int top = std::max(b, c);
    Amalgam am;
    am.C = make_elementary(static_cast<int>(ipow(n, top).convert_to<std::int64_t>()));
    am.beta1 = en_category_embedding(n, b, top);
    am.beta2 = en_category_embedding(n, c, top);
    return am;
  };
  return cat;
}

FraisseCategory cat_cantor(int max_rank) {
  FraisseCategory cat;
  cat.name = "K_Cantor";
  auto cache = std::make_shared<std::map<int, Sem>>();
  cat.object = [cache, max_rank](int i) {
    int r = std::min(i + 1, max_rank);
    auto it = cache->find(r);
    if (it != cache->end()) return it->second;
    return (*cache)[r] = make_simplicial(r);
  };
  cat.homs = [](const Sem& A, const Sem& B, int bound) {
    std::vector<CuMorphism> hs;
    int r = simplicial_rank_of(A), t = simplicial_rank_of(B);
    if (t < r) return hs;
    std::vector<int> f(static_cast<std::size_t>(t), 0);
    std::size_t cap = 60 + 30 * static_cast<std::size_t>(bound);
    for (;;) {
      std::vector<char> hit(static_cast<std::size_t>(r), 0);
      for (int y : f) hit[static_cast<std::size_t>(y)] = 1;
      bool onto = true;
      for (int i = 0; i < r; ++i) onto = onto && hit[static_cast<std::size_t>(i)];
      if (onto) hs.push_back(cantor_dual_morphism(r, t, f));
      if (hs.size() >= cap) break;
      int j = t - 1;
      while (j >= 0 && ++f[static_cast<std::size_t>(j)] == r) f[static_cast<std::size_t>(j--)] = 0;
      if (j < 0) break;
    }
    return hs;  // lexicographic in the point map
  };
  cat.amalgamator = [](const CuMorphism& a1, const CuMorphism& a2,
                       const FiniteSubset&) -> std::optional<Amalgam> {
    auto d1 = parse_dual(a1.desc()), d2 = parse_dual(a2.desc());
    if (!d1 || !d2) return std::nullopt;  // fall back to search
    auto [r1, t1, g1] = *d1;
    auto [r2, t2, g2] = *d2;
    if (r1 != r2) throw std::invalid_argument("cantor amalgamator: domain mismatch");
    int r = r1;
    auto section = [r](const std::vector<int>& g) {
      std::vector<int> s(static_cast<std::size_t>(r), -1);
      for (int y = 0; y < static_cast<int>(g.size()); ++y)
        if (s[static_cast<std::size_t>(g[static_cast<std::size_t>(y)])] < 0)
          s[static_cast<std::size_t>(g[static_cast<std::size_t>(y)])] = y;
      return s;
    };
    std::vector<int> s1 = section(g1), s2 = section(g2);
    std::vector<int> nonsec2;  // X_{t2} points outside the section of g2
    for (int y = 0; y < t2; ++y)
      if (s2[static_cast<std::size_t>(g2[static_cast<std::size_t>(y)])] != y)
        nonsec2.push_back(y);
    int tc = t1 + static_cast<int>(nonsec2.size());
    std::vector<int> q1, q2;  // point maps X_C → X_{t1}, X_C → X_{t2}
    for (int c = 0; c < t1; ++c) {
      q1.push_back(c);
      q2.push_back(s2[static_cast<std::size_t>(g1[static_cast<std::size_t>(c)])]);
    }
    for (int y : nonsec2) {
      q1.push_back(s1[static_cast<std::size_t>(g2[static_cast<std::size_t>(y)])]);
      q2.push_back(y);
    }
    Amalgam am;
    am.C = make_simplicial(tc);
    am.beta1 = cantor_dual_morphism(t1, tc, q1);
    am.beta2 = cantor_dual_morphism(t2, tc, q2);
    return am;
  };
  return cat;
}

FraisseCategory cat_kp(int hom_cap) {
  FraisseCategory cat;
  cat.name = "K_P";
  Sem L = make_steplsc_interval();
  cat.object = [L](int) { return L; };
  cat.homs = [hom_cap, L](const Sem& A, const Sem& B, int) {
    std::vector<CuMorphism> hs;
    if (A->id() != L->id() || B->id() != L->id()) return hs;
    std::vector<std::string> seen;
    auto push = [&](const PLSurjection& f) {
      auto key = f.encode();
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
      seen.push_back(key);
      hs.push_back(pl_induced_morphism(f));
    };
    push(PLSurjection::identity());
    // increasing piece count / denominator, values on the d-grid
    for (int pieces = 1; pieces <= 3 && static_cast<int>(hs.size()) < hom_cap; ++pieces)
      for (int d = 1; d <= 3 && static_cast<int>(hs.size()) < hom_cap; ++d) {
        std::vector<std::size_t> ix(static_cast<std::size_t>(pieces) + 1, 0);
        for (;;) {
          bool ok = true;
          bool hit0 = false, hit1 = false;
          for (std::size_t j = 0; j <= static_cast<std::size_t>(pieces); ++j) {
            if (j && ix[j] == ix[j - 1]) ok = false;
            hit0 |= ix[j] == 0;
            hit1 |= ix[j] == static_cast<std::size_t>(d);
          }
          if (ok && hit0 && hit1) {
            PLSurjection f;
            for (int j = 0; j <= pieces; ++j) {
              f.xs.emplace_back(Rat(j, pieces));
              f.ys.emplace_back(Rat(static_cast<std::int64_t>(ix[static_cast<std::size_t>(j)]), d));
            }
            push(f.normalized());
            if (static_cast<int>(hs.size()) >= hom_cap) break;
          }
          std::size_t j = 0;
          while (j < ix.size() && ++ix[j] == static_cast<std::size_t>(d) + 1) ix[j++] = 0;
          if (j == ix.size()) break;
        }
      }
    return hs;
  };
  cat.amalgamator = [](const CuMorphism& a1, const CuMorphism& a2,
                       const FiniteSubset& F) -> std::optional<Amalgam> {
    KPAmalgam k = kp_amalgamate(a1, a2, F);
    Amalgam am;
    am.C = k.beta1.cod();
    am.beta1 = k.beta1;
    am.beta2 = k.beta2;
    return am;
  };
  return cat;
}

FraisseCategory cat_sdim(int max_rank) {
  FraisseCategory cat = cat_cantor(max_rank);
  cat.name = "s_dim";
  return cat;
}

std::optional<CuMorphism> sdim_retraction(const CuMorphism& iota) {
  auto d = parse_dual(iota.desc());
  if (!d) return std::nullopt;
  auto [r, t, f] = *d;
  std::vector<int> s(static_cast<std::size_t>(r), -1);
  for (int y = 0; y < t; ++y)
    if (s[static_cast<std::size_t>(f[static_cast<std::size_t>(y)])] < 0)
      s[static_cast<std::size_t>(f[static_cast<std::size_t>(y)])] = y;
  for (int i = 0; i < r; ++i)
    if (s[static_cast<std::size_t>(i)] < 0) return std::nullopt;  // not surjective
  return cantor_dual_morphism(t, r, s);
}

FormalColimit retid_extend(const FormalColimit& C) {
  std::vector<int> ranks;
  for (auto& S : C.stages) ranks.push_back(simplicial_rank_of(S));
  std::vector<Sem> stages;
  std::vector<CuMorphism> connect;
  int total = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    total += ranks[i];
    stages.push_back(make_simplicial(total));
    if (i + 1 < ranks.size()) {
      CuMorphism sigma = C.connect[i];
      int ri = ranks[i], rn = ranks[i + 1], lo = total - ranks[i];
      connect.push_back(CuMorphism(
          stages.back(), make_simplicial(total + rn),
          "retid:" + std::to_string(i), [sigma, ri, rn, lo](const Element& xE) -> Element {
            const Tuple& x = std::get<Tuple>(xE);
            Tuple last(x.begin() + lo, x.begin() + lo + ri);
            Tuple ext = std::get<Tuple>(sigma(Element(last)));
            Tuple y = x;
            for (int j = 0; j < rn; ++j) y.push_back(ext[static_cast<std::size_t>(j)]);
            return y;
          }));
    }
  }
  return colimit_make(std::move(stages), std::move(connect), C.depth);
}

// ---------------------------------------------------------------- engine ---

JepResult check_jep(const FraisseCategory& cat, const Sem& A1, const Sem& A2, int bound) {
  JepResult res;
  for (int b = 0; b <= bound; ++b) {
    Sem B = cat.object(b);
    auto h1 = cat.homs(A1, B, bound);
    auto h2 = cat.homs(A2, B, bound);
    if (!h1.empty() && !h2.empty()) {
      res.found = true;
      res.object_index = b;
      res.B = B;
      res.into1 = h1.front();
      res.into2 = h2.front();
      return res;
    }
  }
  return res;
}

std::optional<Amalgam> amalgamate(const FraisseCategory& cat, const CuMorphism& alpha1,
                                  const CuMorphism& alpha2, const FiniteSubset& F,
                                  int bound) {
  if (!same_sem(alpha1.dom(), alpha2.dom()) || !same_sem(alpha1.dom(), F.host))
    throw std::invalid_argument("amalgamate: shared domain required");
  auto finish = [&](Amalgam am) -> std::optional<Amalgam> {
    CuMorphism l = compose(am.beta1, alpha1), r = compose(am.beta2, alpha2);
    am.certified = compare_on(l, r, F);
    am.exact = composites_exact(l, r);
    return am;
  };
  if (cat.amalgamator) {
    auto am = cat.amalgamator(alpha1, alpha2, F);
    if (am) return finish(std::move(*am));
  }
  for (int c = 0; c <= bound; ++c) {
    Sem C = cat.object(c);
    auto b1s = cat.homs(alpha1.cod(), C, bound);
    auto b2s = cat.homs(alpha2.cod(), C, bound);
    for (auto& b1 : b1s)
      for (auto& b2 : b2s)
        if (compare_on(compose(b1, alpha1), compose(b2, alpha2), F)) {
          Amalgam am;
          am.C = C;
          am.beta1 = b1;
          am.beta2 = b2;
          return finish(std::move(am));
        }
  }
  return std::nullopt;
}

std::vector<std::tuple<int, int, int>> DemandSchedule::first(int count) const {
  std::vector<std::tuple<int, int, int>> out;
  for (int w = 0; static_cast<int>(out.size()) < count; ++w) {
    std::vector<std::tuple<int, int, int>> block;
    for (int n = 0; n <= w; ++n)
      for (int a = 0; a + n <= w; ++a) block.emplace_back(n, a, w - n - a);
    // Fisher–Yates keyed by (seed, weight)
    std::uint64_t s = splitmix64(seed ^ (0xa5a5ULL + static_cast<std::uint64_t>(w)));
    for (std::size_t i = block.size(); i > 1; --i) {
      s = splitmix64(s);
      std::swap(block[i - 1], block[s % i]);
    }
    for (auto& t : block) {
      out.push_back(t);
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  return out;
}

CuMorphism FraissePrefix::map(int i, int j) const {
  if (i < 0 || j < i || j > last()) throw std::invalid_argument("FraissePrefix::map");
  CuMorphism m = CuMorphism::identity(stages[static_cast<std::size_t>(i)]);
  for (int k = i; k < j; ++k) m = compose(connect[static_cast<std::size_t>(k)], m);
  return m;
}

FraisseCert verify_fraisse_property(const FraissePrefix& P, int i, const CuMorphism& alpha,
                                    const FiniteSubset& F, int bound) {
  FraisseCert cert;
  for (int j = i; j <= P.last(); ++j) {
    CuMorphism sigma = P.map(i, j);
    for (auto& beta : P.cat.homs(alpha.cod(), P.stages[static_cast<std::size_t>(j)], bound))
      if (compare_on(compose(beta, alpha), sigma, F)) {
        cert.ok = true;
        cert.j = j;
        cert.beta = beta;
        return cert;
      }
  }
  cert.note = "prefix too short: no return morphism for (stage " + std::to_string(i) +
              ", " + alpha.desc() + ", |F|=" + std::to_string(F.elements.size()) + ")";
  return cert;
}

FraissePrefix build_fraisse_prefix(const FraisseCategory& cat,
                                   const DemandSchedule& schedule, int steps, int bound) {
  FraissePrefix P;
  P.cat = cat;
  P.stages = {cat.object(0)};
  for (auto [n, a, k] : schedule.first(steps)) {
    if (n > P.last()) continue;  // stage object has not appeared yet
    auto [t_idx, h_idx] = unpair(a);
    Sem T = cat.object(t_idx);
    auto hs = cat.homs(P.stages[static_cast<std::size_t>(n)], T, bound);
    if (h_idx >= static_cast<int>(hs.size())) continue;  // vacuous demand
    const CuMorphism& alpha = hs[static_cast<std::size_t>(h_idx)];
    FiniteSubset F = capped_subset(P.stages[static_cast<std::size_t>(n)], k, 60);

    DemandCert cert;
    cert.stage = n;
    cert.alpha_desc = alpha.desc();
    cert.basis_depth = k;
    bool satisfied = false;
    for (int j = n + 1; j <= P.last() && !satisfied; ++j) {
      CuMorphism sigma = P.map(n, j);
      for (auto& beta : cat.homs(T, P.stages[static_cast<std::size_t>(j)], bound))
        if (compare_on(compose(beta, alpha), sigma, F)) {
          cert.j = j;
          cert.beta_desc = beta.desc();
          satisfied = true;
          break;
        }
    }
    if (!satisfied) {
      CuMorphism tail = P.map(n, P.last());
      auto am = amalgamate(cat, alpha, tail, F, bound);
      if (!am || !am->certified) {
        std::ostringstream os;
        os << "build_fraisse_prefix: amalgamation exhausted for demand (stage " << n
           << ", " << alpha.desc() << ", B_" << k << ")";
        throw std::runtime_error(os.str());
      }
      P.stages.push_back(am->C);
      P.connect.push_back(am->beta2);
      cert.j = P.last();
      cert.beta_desc = am->beta1.desc();
    }
    P.ledger.push_back(std::move(cert));
  }

  // joint-embedding pass: every early enumerated object maps into some stage
  for (int o = 0; o <= 3; ++o) {
    Sem S = cat.object(o);
    bool reachable = false;
    for (int i = 0; i <= P.last() && !reachable; ++i)
      reachable = !cat.homs(S, P.stages[static_cast<std::size_t>(i)], bound).empty();
    if (reachable) continue;
    JepResult j = check_jep(cat, P.stages[static_cast<std::size_t>(P.last())], S, bound);
    if (!j.found) throw std::runtime_error("build_fraisse_prefix: JEP pass stuck at " + S->id());
    P.stages.push_back(j.B);
    P.connect.push_back(j.into1);
  }
  return P;
}

// --------------------------------------------------- identified colimits ---

FormalColimit prefix_colimit(const FraissePrefix& P, int depth) {
  FormalColimit C = colimit_make(P.stages, P.connect, depth);
  const std::string& name = P.cat.name;

  if (name.rfind("s_", 0) == 0 && name != "s_dim") {
    int p = std::stoi(name.substr(2));
    auto cum = std::make_shared<std::vector<int>>();
    cum->push_back(0);
    for (auto& c : P.connect) cum->push_back(cum->back() + mulpow_exp(c));
    C.target = make_softdim(p);
    C.closed_form = [p, cum](int i, const Element& x) {
      return softdim_embed_stage(p, (*cum)[static_cast<std::size_t>(i)], std::get<ExtNat>(x));
    };
    int lastc = cum->back();
    int laststage = C.last();
    C.approx_stages = [p, cum, lastc, laststage](const Element& xE, int len) {
      const SoftVal& x = std::get<SoftVal>(xE);
      std::vector<std::pair<int, Element>> out;
      auto stage_with = [&](int c) {  // first stage with cumulative exponent ≥ c
        for (int i = 0; i <= laststage; ++i)
          if ((*cum)[static_cast<std::size_t>(i)] >= c) return i;
        return -1;
      };
      if (!x.soft) {  // compact a/p^m, p-adic
        Rat q = x.q;
        int m = 0;
        while (denominator(Rat(q * ipow(p, m))) != 1) ++m;
        int i = stage_with(m);
        if (i < 0)
          throw std::runtime_error("approx_stages: prefix resolution too coarse for " +
                                   rat_str(q) + " (needs exponent " + std::to_string(m) +
                                   ", prefix has " + std::to_string(lastc) + ")");
        Int a = Int(q * ipow(p, (*cum)[static_cast<std::size_t>(i)]));
        out.emplace_back(i, ExtNat(a.convert_to<std::int64_t>()));
        return out;
      }
      // soft chains climb toward the end of the prefix so each approximant
      // uses the best resolution available, not the coarse early stages
      auto stage_for = [&](int l) {
        int i = stage_with(l);
        return i < 0 ? laststage : i;
      };
      if (x.inf) {  // Soft(∞): staged values 1, 2, ..., len
        for (int l = 1; l <= len; ++l) {
          int i = stage_for(l);
          Int a = Int(l) * ipow(p, (*cum)[static_cast<std::size_t>(i)]);
          out.emplace_back(i, ExtNat(a.convert_to<std::int64_t>()));
        }
        return out;
      }
      for (int l = 1; l <= len; ++l) {  // Soft(q): strictly-below compacts
        int i = stage_for(l);
        Int den = ipow(p, (*cum)[static_cast<std::size_t>(i)]);
        Rat scaled = x.q * den;
        Int a = numerator(scaled) / denominator(scaled);  // floor
        if (Rat(a, den) == x.q) a -= 1;                   // strictly below
        if (a < 0) a = 0;
        out.emplace_back(i, ExtNat(a.convert_to<std::int64_t>()));
      }
      (void)lastc;
      return out;
    };
  } else if (name == "e_inf") {
    C.target = make_two_point();
    C.closed_form = [](int, const Element& x) -> Element {
      const ExtNat& v = std::get<ExtNat>(x);
      return (v.inf || v.n > 0) ? ExtNat::infinity() : ExtNat(0);
    };
    C.approx_stages = [](const Element& xE, int) {
      const ExtNat& x = std::get<ExtNat>(xE);
      std::vector<std::pair<int, Element>> out;
      out.emplace_back(0, x.inf || x.n > 0 ? Element(ExtNat::infinity()) : Element(ExtNat(0)));
      return out;
    };
  } else if (name.rfind("e_", 0) == 0) {
    int p = std::stoi(name.substr(2));
    auto exps = std::make_shared<std::vector<int>>();
    for (auto& S : P.stages) exps->push_back(exact_log(p, elementary_bound_of(S)));
    C.target = make_truncated_ep(p);
    C.closed_form = [p, exps](int i, const Element& x) {
      return truncated_ep_embed_stage(p, (*exps)[static_cast<std::size_t>(i)],
                                      std::get<ExtNat>(x));
    };
    int laststage = C.last();
    C.approx_stages = [p, exps, laststage](const Element& xE, int len) {
      const SoftVal& x = std::get<SoftVal>(xE);
      std::vector<std::pair<int, Element>> out;
      if (x.inf) {  // ∞ is a stage element everywhere
        out.emplace_back(0, ExtNat::infinity());
        return out;
      }
      if (!x.soft) {
        int m = 0;
        while (denominator(Rat(x.q * ipow(p, m))) != 1) ++m;
        int i = -1;
        for (int s = 0; s <= laststage && i < 0; ++s)
          if ((*exps)[static_cast<std::size_t>(s)] >= m) i = s;
        if (i < 0) throw std::runtime_error("approx_stages: prefix resolution too coarse");
        Int a = Int(x.q * ipow(p, (*exps)[static_cast<std::size_t>(i)]));
        out.emplace_back(i, ExtNat(a.convert_to<std::int64_t>()));
        return out;
      }
      for (int l = 1; l <= len; ++l) {
        int i = laststage;  // earliest stage with exponent ≥ l, else the last
        for (int s = 0; s <= laststage; ++s)
          if ((*exps)[static_cast<std::size_t>(s)] >= l) {
            i = s;
            break;
          }
        Int den = ipow(p, (*exps)[static_cast<std::size_t>(i)]);
        Rat scaled = x.q * den;
        Int a = numerator(scaled) / denominator(scaled);
        if (Rat(a, den) == x.q) a -= 1;
        if (a < 0) a = 0;
        out.emplace_back(i, ExtNat(a.convert_to<std::int64_t>()));
      }
      return out;
    };
  }
  return C;
}

// -------------------------------------------------------- intertwinings ----

namespace {

// Alternating zig-zag continuation from an initial cross map m0: S^1_{a0} → S^2_{b0}.
Intertwining zigzag(const FraissePrefix& P1, const FraissePrefix& P2, int a0, int b0,
                    const CuMorphism& m0, int depth, int bound) {
  struct Cross {
    int from, to;
    CuMorphism m;
  };
  std::vector<Cross> s2t = {{a0, b0, m0}};
  std::vector<Cross> t2s;
  CuMorphism cur = m0;
  int a = a0, b = b0;
  std::vector<std::string> ledger;
  for (int step = 0; step < 2 * depth; ++step) {
    bool zig = step % 2 == 0;  // find T → S next
    const FraissePrefix& P = zig ? P1 : P2;
    int from = zig ? a : b;
    FiniteSubset F = n_refinement(
        capped_subset(P.stages[static_cast<std::size_t>(from)], std::min(depth, 2), 40), 2);
    FraisseCert c = verify_fraisse_property(P, from, cur, F, bound);
    if (c.ok && c.j < P.last()) {
      // push the certificate to the last stage: post-composing both sides of
      // β∘cur ≃_F σ_{from,j} with σ_{j,last} preserves the comparison, and the
      // crosses must walk toward the end of both prefixes or the induced map
      // only sees the early stages
      c.beta = compose(P.map(c.j, P.last()), c.beta);
      c.j = P.last();
    }
    if (!c.ok) {
      // the finite prefixes are exhausted; the crosses found so far keep
      // their certificates, so stop rather than invent a return morphism
      ledger.push_back("stopped after " + std::to_string(step) + " steps: " + c.note);
      break;
    }
    ledger.push_back((zig ? "zig " : "zag ") + cur.desc() + " returned by " +
                     c.beta.desc() + " at stage " + std::to_string(c.j));
    if (zig) {
      t2s.push_back({b, c.j, c.beta});
      a = c.j;
    } else {
      s2t.push_back({a, c.j, c.beta});
      b = c.j;
    }
    cur = c.beta;
  }

  Intertwining I;
  I.S = prefix_colimit(P1, depth);
  I.T = prefix_colimit(P2, depth);
  I.ledger = std::move(ledger);
  // fill per-stage maps: α_s = cross ∘ σ_{s, cross.from} for the next cross map
  auto fill = [](const FraissePrefix& P, const std::vector<Cross>& cs, std::vector<int>& idx,
                 std::vector<CuMorphism>& maps) {
    for (int s = 0; s <= P.last(); ++s) {
      const Cross* pick = nullptr;
      for (auto& c : cs)
        if (c.from >= s) {
          pick = &c;
          break;
        }
      if (!pick) break;
      maps.push_back(compose(pick->m, P.map(s, pick->from)));
      idx.push_back(pick->to);
    }
  };
  fill(P1, s2t, I.phi, I.alpha);
  fill(P2, t2s, I.psi, I.beta);
  return I;
}

}  // namespace

Intertwining uniqueness_intertwine(const FraissePrefix& P1, const FraissePrefix& P2,
                                   int depth) {
  if (P1.cat.name != P2.cat.name)
    throw std::invalid_argument("uniqueness_intertwine: different categories");
  if (!same_sem(P1.stages[0], P2.stages[0]))
    throw std::invalid_argument("uniqueness_intertwine: different initial objects");
  CuMorphism m0(P1.stages[0], P2.stages[0], "id[" + P1.stages[0]->id() + "]",
                [](const Element& x) { return x; });
  return zigzag(P1, P2, 0, 0, m0, depth, 24);
}

Intertwining universality_map(const FraissePrefix& P, const FormalColimit& target,
                              int depth) {
  const int bound = 24;
  // initial map T_0 → S_{φ(0)}: first hom into the earliest admitting stage
  int cur = -1;
  CuMorphism a0;
  for (int j = 0; j <= P.last() && cur < 0; ++j) {
    auto hs = P.cat.homs(target.stages[0], P.stages[static_cast<std::size_t>(j)], bound);
    if (!hs.empty()) {
      cur = j;
      a0 = hs.front();
    }
  }
  if (cur < 0) throw std::runtime_error("universality_map: no map from T_0 into the prefix");

  Intertwining I;
  I.S = target;
  I.T = prefix_colimit(P, depth);
  I.alpha = {a0};
  I.phi = {cur};
  for (int i = 0; i + 1 < static_cast<int>(target.stages.size()); ++i) {
    const CuMorphism& tau = target.connect[static_cast<std::size_t>(i)];
    FiniteSubset F = n_refinement(
        capped_subset(target.stages[static_cast<std::size_t>(i)], std::min(depth, 2), 40), 2);
    auto am = amalgamate(P.cat, tau, I.alpha.back(), F, bound);
    if (!am || !am->certified)
      throw std::runtime_error("universality_map: NAP step exhausted at target stage " +
                               std::to_string(i));
    // am->beta1 = ξᵘ: T_{i+1} → C, am->beta2 = θ: S_cur → C
    FiniteSubset F2 = n_refinement(
        capped_subset(P.stages[static_cast<std::size_t>(cur)], std::min(depth, 2), 40), 2);
    FraisseCert c = verify_fraisse_property(P, cur, am->beta2, F2, bound);
    if (!c.ok) throw std::runtime_error("universality_map: " + c.note);
    I.alpha.push_back(compose(c.beta, am->beta1));
    cur = c.j;
    I.phi.push_back(cur);
    I.ledger.push_back("stage " + std::to_string(i + 1) + " via NAP C=" + am->C->id() +
                       " then return " + c.beta.desc() + " at " + std::to_string(c.j));
  }
  return I;
}

HomogeneityResult homogeneity_iso(const FraissePrefix& P, const CuMorphism& alpha,
                                  const CuMorphism& beta, const FiniteSubset& F,
                                  int depth) {
  const int bound = 24;
  if (!same_sem(alpha.dom(), beta.dom()) || !same_sem(alpha.cod(), beta.cod()))
    throw std::invalid_argument("homogeneity_iso: parallel morphisms required");
  int l = -1;
  for (int i = 0; i <= P.last(); ++i)
    if (same_sem(P.stages[static_cast<std::size_t>(i)], alpha.cod())) {
      l = i;
      break;
    }
  if (l < 0) throw std::invalid_argument("homogeneity_iso: codomain is not a stage");

  FiniteSubset F4 = n_refinement(F, 4);
  auto step = [&](const CuMorphism& a, const CuMorphism& b) {
    auto am = amalgamate(P.cat, a, b, F4, bound);
    if (!am || !am->certified)
      throw std::runtime_error("homogeneity_iso: NAP step exhausted");
    FiniteSubset Fl = n_refinement(
        capped_subset(P.stages[static_cast<std::size_t>(l)], std::min(depth, 2), 40), 2);
    FraisseCert c = verify_fraisse_property(P, l, am->beta1, Fl, bound);
    if (!c.ok) throw std::runtime_error("homogeneity_iso: " + c.note);
    return std::make_pair(compose(c.beta, am->beta2), c.j);  // ν = δ∘γ2 : S_l → S_j
  };
  auto [nu, j1] = step(alpha, beta);
  auto [eta, j2] = step(beta, alpha);

  HomogeneityResult res;
  res.nu = nu;
  res.eta = eta;
  // endpoint certificates: σ_{l,j}∘α ≃_F ν∘β and σ_{l,j'}∘β ≃_F η∘α
  res.cert_alpha = compare_on(compose(P.map(l, j1), alpha), compose(nu, beta), F);
  res.cert_beta = compare_on(compose(P.map(l, j2), beta), compose(eta, alpha), F);
  res.intertwining = zigzag(P, P, l, j1, nu, depth, bound);
  return res;
}

}  // namespace cuf
