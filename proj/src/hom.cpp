// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/hom.hpp"

#include <sstream>

#include "cuf/instances.hpp"

namespace cuf {

namespace {

// saturation into E_m: values above m become ∞
ExtNat sat(const ExtNat& x, int m) {
  if (x.inf || x.n > m) return ExtNat::infinity();
  return x;
}

}  // namespace

HomKind elementary_hom_classify(int n, int m, const ExtNat& k) {
  if (n < 0 || m < 1) throw std::invalid_argument("elementary_hom_classify: bad objects");
  if (!k.inf && k.n > m) throw std::invalid_argument("elementary_hom_classify: k not in E_m");
  if (k.inf || k.n == 0) return HomKind::morphism;
  // finite k >= 1: morphism iff (n+1)k saturates, embedding iff also nk <= m
  if ((n + 1) * k.n <= m) return HomKind::not_morphism;
  return static_cast<std::int64_t>(n) * k.n <= m ? HomKind::order_embedding
                                                 : HomKind::morphism;
}

CuMorphism elementary_morphism(int n, int m, const ExtNat& k) {
  if (elementary_hom_classify(n, m, k) == HomKind::not_morphism)
    throw std::invalid_argument("elementary_morphism: 1 -> " + k.str() +
                                " is not a morphism E_" + std::to_string(n) + " -> E_" +
                                std::to_string(m));
  Sem dom = make_elementary(n), cod = make_elementary(m);
  std::ostringstream os;
  os << "elem:" << n << "," << m << ",k=" << k.str();
  return CuMorphism(dom, cod, os.str(), [n, m, k](const Element& e) -> Element {
    const auto& x = std::get<ExtNat>(e);
    ExtNat j = x.inf ? ExtNat(n + 1) : x;  // ∞ = (n+1)·1 in E_n
    return sat(ext_mul(j, k), m);
  });
}

std::vector<CuMorphism> elementary_enumerate(int n, int m, bool embeddings_only) {
  std::vector<CuMorphism> out;
  for (std::int64_t k = 0; k <= m; ++k) {
    HomKind h = elementary_hom_classify(n, m, ExtNat(k));
    if (h == HomKind::order_embedding || (!embeddings_only && h == HomKind::morphism))
      out.push_back(elementary_morphism(n, m, ExtNat(k)));
  }
  if (!embeddings_only) out.push_back(elementary_morphism(n, m, ExtNat::infinity()));
  return out;
}

CuMorphism en_category_embedding(int n, int k, int s) {
  if (n < 2 || k < 0 || k > s) throw std::invalid_argument("en_category_embedding");
  Int dom = ipow(Int(n), k), cod = ipow(Int(n), s);
  if (cod > INT64_MAX / 2) throw std::overflow_error("en_category_embedding: n^s");
  auto d = static_cast<int>(dom.convert_to<std::int64_t>());
  auto c = static_cast<int>(cod.convert_to<std::int64_t>());
  return elementary_morphism(d, c, ExtNat(c / d));
}

CuMorphism simplicial_hom(int r, int t, const std::vector<std::vector<ExtNat>>& M) {
  if (static_cast<int>(M.size()) != t) throw std::invalid_argument("simplicial_hom: rows");
  for (auto& row : M)
    if (static_cast<int>(row.size()) != r) throw std::invalid_argument("simplicial_hom: cols");
  std::ostringstream os;
  os << "mat:" << r << "," << t << ":[";
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < r; ++j) os << (i + j ? " " : "") << M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].str();
  os << "]";
  return CuMorphism(make_simplicial(r), make_simplicial(t), os.str(),
                    [r, t, M](const Element& e) -> Element {
                      const auto& x = std::get<Tuple>(e);
                      if (static_cast<int>(x.size()) != r)
                        throw std::invalid_argument("simplicial_hom: arity");
                      Tuple y(static_cast<std::size_t>(t), ExtNat(0));
                      for (int i = 0; i < t; ++i)
                        for (int j = 0; j < r; ++j)
                          y[static_cast<std::size_t>(i)] =
                              y[static_cast<std::size_t>(i)] +
                              ext_mul(M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                      x[static_cast<std::size_t>(j)]);
                      return y;
                    });
}

namespace {
// all tuples over {0,...,bound, ∞}^r in odometer order
std::vector<Tuple> tuple_space(int r, int bound) {
  std::vector<ExtNat> vals;
  for (int v = 0; v <= bound; ++v) vals.emplace_back(v);
  vals.push_back(ExtNat::infinity());
  std::vector<Tuple> out;
  Tuple cur(static_cast<std::size_t>(r), ExtNat(0));
  std::vector<std::size_t> ix(static_cast<std::size_t>(r), 0);
  for (;;) {
    for (int j = 0; j < r; ++j) cur[static_cast<std::size_t>(j)] = vals[ix[static_cast<std::size_t>(j)]];
    out.push_back(cur);
    int j = 0;
    while (j < r && ++ix[static_cast<std::size_t>(j)] == vals.size()) ix[static_cast<std::size_t>(j++)] = 0;
    if (j == r) break;
  }
  return out;
}

bool tuple_leq(const Tuple& a, const Tuple& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] <= b[i])) return false;
  return true;
}
}  // namespace

bool simplicial_is_embedding(int r, int t, const std::vector<std::vector<ExtNat>>& M,
                             int bound) {
  auto alpha = simplicial_hom(r, t, M);
  auto xs = tuple_space(r, bound);
  std::vector<Tuple> im;
  im.reserve(xs.size());
  for (auto& x : xs) im.push_back(std::get<Tuple>(alpha(Element(x))));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (tuple_leq(im[i], im[j]) && !tuple_leq(xs[i], xs[j])) return false;
  return true;
}

bool simplicial_maps_one_to_one(int r, int t, const std::vector<std::vector<ExtNat>>& M) {
  auto alpha = simplicial_hom(r, t, M);
  Tuple ones_r(static_cast<std::size_t>(r), ExtNat(1));
  Tuple ones_t(static_cast<std::size_t>(t), ExtNat(1));
  return elem_eq(alpha(Element(ones_r)), Element(ones_t));
}

CuMorphism cantor_dual_morphism(int r, int t, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != t) throw std::invalid_argument("cantor_dual: size");
  std::vector<std::vector<ExtNat>> M(static_cast<std::size_t>(t),
                                     std::vector<ExtNat>(static_cast<std::size_t>(r), ExtNat(0)));
  std::ostringstream os;
  os << "dual:" << r << "," << t << ":[";
  for (int y = 0; y < t; ++y) {
    if (f[static_cast<std::size_t>(y)] < 0 || f[static_cast<std::size_t>(y)] >= r)
      throw std::invalid_argument("cantor_dual: range");
    M[static_cast<std::size_t>(y)][static_cast<std::size_t>(f[static_cast<std::size_t>(y)])] = ExtNat(1);
    os << (y ? " " : "") << f[static_cast<std::size_t>(y)];
  }
  os << "]";
  auto base = simplicial_hom(r, t, M);
  return CuMorphism(base.dom(), base.cod(), os.str(),
                    [base](const Element& x) { return base(x); });
}

DualMapResult lsc_dual_map(const CuMorphism& alpha, int r, int t) {
  DualMapResult res;
  res.f.assign(static_cast<std::size_t>(t), -1);
  for (int i = 0; i < r; ++i) {
    Tuple e(static_cast<std::size_t>(r), ExtNat(0));
    e[static_cast<std::size_t>(i)] = ExtNat(1);
    auto row = std::get<Tuple>(alpha(Element(e)));
    if (static_cast<int>(row.size()) != t) return res;
    for (int y = 0; y < t; ++y) {
      const auto& v = row[static_cast<std::size_t>(y)];
      if (v.inf || (v.n != 0 && v.n != 1)) return res;
      if (v.n == 1) {
        if (res.f[static_cast<std::size_t>(y)] != -1) return res;  // rows overlap
        res.f[static_cast<std::size_t>(y)] = i;
      }
    }
  }
  for (int y = 0; y < t; ++y)
    if (res.f[static_cast<std::size_t>(y)] == -1) return res;  // not a partition
  // confirm α agrees with the recovered dual on a small sample
  auto dual = cantor_dual_morphism(r, t, res.f);
  for (auto& x : tuple_space(r, 2))
    if (!elem_eq(alpha(Element(x)), dual(Element(x)))) return res;
  res.ok = true;
  std::vector<char> hit(static_cast<std::size_t>(r), 0);
  for (int y = 0; y < t; ++y) hit[static_cast<std::size_t>(res.f[static_cast<std::size_t>(y)])] = 1;
  res.surjective = true;
  for (int i = 0; i < r; ++i) res.surjective = res.surjective && hit[static_cast<std::size_t>(i)];
  return res;
}

}  // namespace cuf
