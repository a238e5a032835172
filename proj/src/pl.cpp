// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/pl.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cuf/instances.hpp"

namespace cuf {

PLSurjection PLSurjection::identity() {
  PLSurjection f;
  f.xs = {Rat(0), Rat(1)};
  f.ys = {Rat(0), Rat(1)};
  return f;
}

PLSurjection PLSurjection::from_pairs(std::vector<std::pair<Rat, Rat>> pts) {
  PLSurjection f;
  for (auto& [x, y] : pts) {
    f.xs.push_back(x);
    f.ys.push_back(y);
  }
  f.validate();
  return f;
}

void PLSurjection::validate() const {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("PL: shape");
  if (xs.front() != 0 || xs.back() != 1) throw std::invalid_argument("PL: domain not [0,1]");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i] < xs[i + 1])) throw std::invalid_argument("PL: breakpoints not increasing");
    if (ys[i] == ys[i + 1]) throw std::invalid_argument("PL: flat piece");
  }
  bool hit0 = false, hit1 = false;
  for (auto& y : ys) {
    if (y < 0 || y > 1) throw std::invalid_argument("PL: range leaves [0,1]");
    hit0 |= y == 0;
    hit1 |= y == 1;
  }
  if (!hit0 || !hit1) throw std::invalid_argument("PL: not surjective onto [0,1]");
}

Rat PLSurjection::eval(const Rat& t) const {
  if (t < 0 || t > 1) throw std::invalid_argument("PL eval: t outside [0,1]");
  std::size_t i = 0;
  while (i + 2 < xs.size() && xs[i + 1] <= t) ++i;
  return ys[i] + (ys[i + 1] - ys[i]) * (t - xs[i]) / (xs[i + 1] - xs[i]);
}

PLSurjection PLSurjection::normalized() const {
  PLSurjection f;
  f.xs = {xs.front()};
  f.ys = {ys.front()};
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    // drop xs[i] if collinear with kept predecessor and successor
    const Rat& x0 = f.xs.back();
    const Rat& y0 = f.ys.back();
    Rat s1 = (ys[i] - y0) / (xs[i] - x0);
    Rat s2 = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    if (s1 == s2) continue;
    f.xs.push_back(xs[i]);
    f.ys.push_back(ys[i]);
  }
  f.xs.push_back(xs.back());
  f.ys.push_back(ys.back());
  return f;
}

std::string PLSurjection::encode() const {
  auto n = normalized();
  std::ostringstream os;
  for (std::size_t i = 0; i < n.xs.size(); ++i) {
    if (i) os << ";";
    os << rat_str(n.xs[i]) << "," << rat_str(n.ys[i]);
  }
  return os.str();
}

PLSurjection PLSurjection::decode(const std::string& s) {
  PLSurjection f;
  std::istringstream is(s);
  std::string pair;
  while (std::getline(is, pair, ';')) {
    auto c = pair.find(',');
    if (c == std::string::npos) throw std::invalid_argument("PL decode: " + s);
    f.xs.push_back(parse_rat(pair.substr(0, c)));
    f.ys.push_back(parse_rat(pair.substr(c + 1)));
  }
  f.validate();
  return f;
}

bool pl_equal(const PLSurjection& a, const PLSurjection& b) {
  auto na = a.normalized(), nb = b.normalized();
  return na.xs == nb.xs && na.ys == nb.ys;
}

PLSurjection pl_compose(const PLSurjection& f, const PLSurjection& g) {
  // breakpoints: those of g plus preimages under g of breakpoints of f
  std::set<Rat> ts(g.xs.begin(), g.xs.end());
  for (std::size_t i = 0; i + 1 < g.xs.size(); ++i) {
    Rat lo = std::min(g.ys[i], g.ys[i + 1]), hi = std::max(g.ys[i], g.ys[i + 1]);
    Rat slope = (g.ys[i + 1] - g.ys[i]) / (g.xs[i + 1] - g.xs[i]);
    for (auto& b : f.xs)
      if (lo < b && b < hi) ts.insert(g.xs[i] + (b - g.ys[i]) / slope);
  }
  PLSurjection h;
  for (auto& t : ts) {
    h.xs.push_back(t);
    h.ys.push_back(f.eval(g.eval(t)));
  }
  h = h.normalized();
  h.validate();
  return h;
}

Rat pl_sup_distance(const PLSurjection& a, const PLSurjection& b) {
  std::set<Rat> ts(a.xs.begin(), a.xs.end());
  ts.insert(b.xs.begin(), b.xs.end());
  Rat best = 0;
  for (auto& t : ts) {
    Rat d = a.eval(t) - b.eval(t);
    if (d < 0) d = -d;
    if (d > best) best = d;
  }
  return best;
}

StepFn stepfn_compose_pl(const StepFn& f, const PLSurjection& h) {
  std::set<Rat> ts(h.xs.begin(), h.xs.end());
  for (std::size_t i = 0; i + 1 < h.xs.size(); ++i) {
    Rat lo = std::min(h.ys[i], h.ys[i + 1]), hi = std::max(h.ys[i], h.ys[i + 1]);
    Rat slope = (h.ys[i + 1] - h.ys[i]) / (h.xs[i + 1] - h.xs[i]);
    for (auto& c : f.cuts)
      if (lo < c && c < hi) ts.insert(h.xs[i] + (c - h.ys[i]) / slope);
  }
  StepFn r;
  r.cuts.assign(ts.begin(), ts.end());
  for (std::size_t j = 0; j < r.cuts.size(); ++j) {
    r.pt.push_back(f.at(h.eval(r.cuts[j])));
    if (j + 1 < r.cuts.size()) {
      Rat mid = (r.cuts[j] + r.cuts[j + 1]) / 2;  // h(mid) avoids every cut of f
      r.cell.push_back(f.at(h.eval(mid)));
    }
  }
  r.validate();
  return r.normalized();
}

// ---------------------------------------------------------------------------

int LevelSetGraph::index_of(const Rat& x, const Rat& y) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].first == x && vertices[i].second == y) return static_cast<int>(i);
  return -1;
}

int LevelSetGraph::degree(int v) const {
  auto it = adj.find(v);
  return it == adj.end() ? 0 : static_cast<int>(it->second.size());
}

LevelSetGraph build_level_set_graph(const PLSurjection& f1, const PLSurjection& f2) {
  f1.validate();
  f2.validate();
  std::map<std::pair<Rat, Rat>, int> idx;
  LevelSetGraph G;
  auto vertex = [&](const Rat& x, const Rat& y) {
    auto it = idx.find({x, y});
    if (it != idx.end()) return it->second;
    G.vertices.emplace_back(x, y);
    int v = static_cast<int>(G.vertices.size()) - 1;
    idx.emplace(std::make_pair(x, y), v);
    G.adj[v];  // isolated vertices stay visible
    return v;
  };
  std::set<std::pair<int, int>> edges;
  for (std::size_t i = 0; i + 1 < f1.xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < f2.xs.size(); ++j) {
      const Rat &a0 = f1.ys[i], &a1 = f1.ys[i + 1];
      const Rat &b0 = f2.ys[j], &b1 = f2.ys[j + 1];
      Rat lo = std::max(std::min(a0, a1), std::min(b0, b1));
      Rat hi = std::min(std::max(a0, a1), std::max(b0, b1));
      if (lo > hi) continue;
      Rat s1 = (a1 - a0) / (f1.xs[i + 1] - f1.xs[i]);
      Rat s2 = (b1 - b0) / (f2.xs[j + 1] - f2.xs[j]);
      auto point = [&](const Rat& v) {
        return std::make_pair(f1.xs[i] + (v - a0) / s1, f2.xs[j] + (v - b0) / s2);
      };
      auto [xl, yl] = point(lo);
      int u = vertex(xl, yl);
      if (lo == hi) continue;  // corner touch: vertex only
      auto [xh, yh] = point(hi);
      int w = vertex(xh, yh);
      edges.insert({std::min(u, w), std::max(u, w)});
    }
  for (auto [u, w] : edges) {
    G.adj[u].push_back(w);
    G.adj[w].push_back(u);
  }
  // deterministic neighbor order: by neighbor coordinates
  for (auto& [v, nb] : G.adj) {
    std::sort(nb.begin(), nb.end(), [&](int a, int b) {
      return G.vertices[static_cast<std::size_t>(a)] < G.vertices[static_cast<std::size_t>(b)];
    });
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return G;
}

std::pair<PLSurjection, PLSurjection> mountain_climb(const PLSurjection& f1,
                                                     const PLSurjection& f2) {
  if (f1.ys.front() != 0 || f1.ys.back() != 1 || f2.ys.front() != 0 || f2.ys.back() != 1)
    throw std::invalid_argument("mountain_climb: maps must fix 0->0, 1->1");
  LevelSetGraph G = build_level_set_graph(f1, f2);
  int s = G.index_of(Rat(0), Rat(0));
  int t = G.index_of(Rat(1), Rat(1));
  if (s < 0 || t < 0) throw std::runtime_error("mountain_climb: corner not on level set");

  // depth-first search for a simple path s -> t, lexicographic neighbor order
  std::vector<int> parent(G.vertices.size(), -1);
  std::vector<char> seen(G.vertices.size(), 0);
  std::vector<int> stack = {s};
  seen[static_cast<std::size_t>(s)] = 1;
  while (!stack.empty() && !seen[static_cast<std::size_t>(t)]) {
    int v = stack.back();
    stack.pop_back();
    auto nb = G.adj.at(v);
    for (auto it = nb.rbegin(); it != nb.rend(); ++it)
      if (!seen[static_cast<std::size_t>(*it)]) {
        seen[static_cast<std::size_t>(*it)] = 1;
        parent[static_cast<std::size_t>(*it)] = v;
        stack.push_back(*it);
      }
  }
  if (!seen[static_cast<std::size_t>(t)])
    throw std::runtime_error("mountain_climb: (1,1) unreachable from (0,0)");
  std::vector<int> path;
  for (int v = t; v != -1; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());

  const auto K = static_cast<std::int64_t>(path.size()) - 1;
  PLSurjection g1, g2;
  for (std::int64_t k = 0; k <= K; ++k) {
    auto& [x, y] = G.vertices[static_cast<std::size_t>(path[static_cast<std::size_t>(k)])];
    g1.xs.emplace_back(Rat(k, K));
    g1.ys.push_back(x);
    g2.xs.emplace_back(Rat(k, K));
    g2.ys.push_back(y);
  }
  g1 = g1.normalized();
  g2 = g2.normalized();
  g1.validate();
  g2.validate();
  if (!pl_equal(pl_compose(f1, g1), pl_compose(f2, g2)))
    throw std::runtime_error("mountain_climb: composition mismatch");
  return {g1, g2};
}

NormalizedPL endpoint_normalize(const PLSurjection& f) {
  f.validate();
  NormalizedPL out;
  if (f.ys.front() == 1 && f.ys.back() == 0) {
    out.u = PLSurjection::from_pairs({{Rat(0), Rat(1)}, {Rat(1), Rat(0)}});  // 1 - t
  } else {
    Rat a = 1, b = 0;  // first preimage of 0, last preimage of 1
    for (std::size_t i = 0; i + 1 < f.xs.size(); ++i) {
      Rat lo = std::min(f.ys[i], f.ys[i + 1]), hi = std::max(f.ys[i], f.ys[i + 1]);
      Rat slope = (f.ys[i + 1] - f.ys[i]) / (f.xs[i + 1] - f.xs[i]);
      if (lo <= 0 && 0 <= hi) a = std::min(a, Rat(f.xs[i] - f.ys[i] / slope));
      if (lo <= 1 && 1 <= hi) b = std::max(b, Rat(f.xs[i] + (1 - f.ys[i]) / slope));
    }
    std::vector<Rat> route = {a};
    if (a != 0) route.push_back(Rat(0));
    route.push_back(Rat(1));
    if (b != 1) route.push_back(b);
    std::vector<std::pair<Rat, Rat>> pts;
    auto n = static_cast<std::int64_t>(route.size()) - 1;
    for (std::int64_t k = 0; k <= n; ++k)
      pts.emplace_back(Rat(k, n), route[static_cast<std::size_t>(k)]);
    out.u = n == 1 && a == 0 && b == 1 ? PLSurjection::identity()
                                       : PLSurjection::from_pairs(pts);
  }
  out.result = pl_compose(f, out.u);
  if (out.result.ys.front() != 0 || out.result.ys.back() != 1)
    throw std::runtime_error("endpoint_normalize: postcondition failed");
  return out;
}

PLSurjection rational_peak_approx(const PLSurjection& f, const Rat& eps) {
  if (eps <= 0) throw std::invalid_argument("rational_peak_approx: eps <= 0");
  f.validate();
  return f;
}

CuMorphism pl_induced_morphism(const PLSurjection& h) {
  h.validate();
  Sem L = make_steplsc_interval();
  PLSurjection hn = h.normalized();
  return CuMorphism(L, L, "pl:" + hn.encode(), [hn](const Element& x) -> Element {
    return stepfn_compose_pl(std::get<StepFn>(x), hn);
  });
}

KPAmalgam kp_amalgamate(const CuMorphism& alpha1, const CuMorphism& alpha2,
                        const FiniteSubset& F) {
  auto recover = [](const CuMorphism& a) {
    if (a.desc().rfind("pl:", 0) != 0)
      throw std::invalid_argument("kp_amalgamate: not PL-induced: " + a.desc());
    return PLSurjection::decode(a.desc().substr(3));
  };
  PLSurjection f1 = recover(alpha1), f2 = recover(alpha2);

  // grid bound: F lives on the 1/n grid with n = lcm of cut denominators
  Int n = 1;
  for (auto& e : F.elements)
    for (auto& c : std::get<StepFn>(e).cuts)
      n = boost::multiprecision::lcm(n, Int(boost::multiprecision::denominator(c)));
  KPAmalgam out;
  out.eps_F = Rat(Int(1), 2 * n);

  auto n1 = endpoint_normalize(f1);
  auto n2 = endpoint_normalize(f2);
  auto a1 = rational_peak_approx(n1.result, out.eps_F / 2);
  auto a2 = rational_peak_approx(n2.result, out.eps_F / 2);
  auto [g1, g2] = mountain_climb(a1, a2);
  out.h1 = pl_compose(n1.u, g1);
  out.h2 = pl_compose(n2.u, g2);
  out.beta1 = pl_induced_morphism(out.h1);
  out.beta2 = pl_induced_morphism(out.h2);
  if (!pl_equal(pl_compose(f1, out.h1), pl_compose(f2, out.h2)))
    throw std::runtime_error("kp_amalgamate: square does not commute");
  out.certificate = compare_on(compose(out.beta1, alpha1), compose(out.beta2, alpha2), F);
  return out;
}

}  // namespace cuf
