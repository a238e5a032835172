// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include "cuf/manifest.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cuf/hom.hpp"
#include "cuf/instances.hpp"
#include "cuf/metrics.hpp"
#include "cuf/pl.hpp"

namespace cuf {

using json = nlohmann::json;

int thread_cap() {
  const char* env = std::getenv("CUFRAISSE_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  return std::clamp(v, 1, 64);
}

// -------------------------------------------------------------- manifest ---

RunManifest RunManifest::parse(const std::string& text) {
  RunManifest m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string value;
    std::getline(ls, value);
    auto first = value.find_first_not_of(" \t");
    value = first == std::string::npos ? "" : value.substr(first);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\r')) value.pop_back();
    if (value.empty())
      throw std::invalid_argument("line " + std::to_string(lineno) + ": key '" + key +
                                  "' without a value");
    try {
      if (key == "command") m.command = value;
      else if (key == "depth") m.depth = std::stoi(value);
      else if (key == "bound") m.bound = std::stoi(value);
      else if (key == "seed") m.seed = std::stoull(value);
      else if (key == "out") m.out_dir = value;
      else m.args[key] = value;
    } catch (const std::exception&) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": bad value for '" +
                                  key + "': " + value);
    }
  }
  if (m.command.empty()) throw std::invalid_argument("line 1: missing 'command'");
  return m;
}

RunManifest RunManifest::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open manifest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string RunManifest::get(const std::string& key, const std::string& fallback) const {
  auto it = args.find(key);
  return it == args.end() ? fallback : it->second;
}

// ---------------------------------------------------------- presentations ---

Sem semigroup_from_name(const std::string& name) {
  if (name == "Nbar") return make_extnat();
  if (name == "TwoPoint") return make_two_point();
  if (name == "Ray") return make_soft_ray();
  if (name == "Lsc[0,1]" || name == "Lsc") return make_steplsc_interval();
  if (name == "G") return make_generator_g();
  if (name.rfind("E_", 0) == 0) return make_elementary(std::stoi(name.substr(2)));
  if (name.rfind("Nbar^", 0) == 0) return make_simplicial(std::stoi(name.substr(5)));
  if (name.rfind("S_", 0) == 0) return make_softdim(std::stoi(name.substr(2)));
  if (name.rfind("Ep_", 0) == 0) return make_truncated_ep(std::stoi(name.substr(3)));
  throw std::invalid_argument("unknown semigroup: " + name);
}

namespace {

// elementary objects with order-embeddings only; no closed amalgamator, so
// exhaustion surfaces the arithmetic obstruction
FraisseCategory cat_e_emb() {
  FraisseCategory cat;
  cat.name = "e_emb";
  cat.object = [](int i) { return make_elementary(i + 1); };
  cat.homs = [](const Sem& A, const Sem& B, int) {
    int n = std::stoi(A->id().substr(2)), m = std::stoi(B->id().substr(2));
    return elementary_enumerate(n, m, true);
  };
  return cat;
}

std::pair<std::string, int> split_param(const std::string& s, int fallback) {
  auto colon = s.find(':');
  if (colon == std::string::npos) return {s, fallback};
  return {s.substr(0, colon), std::stoi(s.substr(colon + 1))};
}

}  // namespace

FraisseCategory category_from_name(const std::string& name) {
  auto [base, param] = split_param(name, 4);
  if (base == "e_inf") return cat_einf();
  if (base == "e_emb") return cat_e_emb();
  if (base == "K_P") return cat_kp();
  if (base == "K_Cantor") return cat_cantor(param);
  if (base == "s_dim") return cat_sdim(param);
  if (base.rfind("s_", 0) == 0) return cat_sp(std::stoi(base.substr(2)));
  if (base.rfind("e_", 0) == 0) return cat_en(std::stoi(base.substr(2)));
  throw std::invalid_argument("unknown category: " + name);
}

// ------------------------------------------------------------ desc codec ---

namespace {

ExtNat parse_extnat(const std::string& s) {
  if (s == "inf") return ExtNat::infinity();
  return ExtNat(std::stoll(s));
}

CuMorphism soft_scale(const Rat& c) {
  Sem R = make_soft_ray();
  return CuMorphism(R, R, "softscale:" + rat_str(c), [c, R](const Element& e) -> Element {
    const auto& x = std::get<SoftVal>(e);
    if (!x.soft || x.inf || c == 0) return c == 0 ? R->zero() : Element(x);
    return SoftVal::soft_of(Rat(x.q * c));
  });
}

CuMorphism atom_from_desc(const std::string& d) {
  if (d.rfind("id[", 0) == 0 && d.back() == ']')
    return CuMorphism::identity(semigroup_from_name(d.substr(3, d.size() - 4)));
  if (d.rfind("elem:", 0) == 0) {
    std::size_t c1 = d.find(',', 5), c2 = d.find(",k=", c1 + 1);
    int n = std::stoi(d.substr(5, c1 - 5));
    int m = std::stoi(d.substr(c1 + 1, c2 - c1 - 1));
    return elementary_morphism(n, m, parse_extnat(d.substr(c2 + 3)));
  }
  if (d.rfind("mulpow:", 0) == 0) {
    std::size_t c = d.find(',', 7);
    int p = std::stoi(d.substr(7, c - 7));
    int k = std::stoi(d.substr(c + 1));
    Int f = ipow(p, k);
    ExtNat factor(f.convert_to<std::int64_t>());
    Sem N = make_extnat();
    return CuMorphism(N, N, d, [factor](const Element& x) -> Element {
      return ext_mul(factor, std::get<ExtNat>(x));
    });
  }
  if (d.rfind("mat:", 0) == 0 || d.rfind("dual:", 0) == 0) {
    bool dual = d[0] == 'd';
    std::size_t start = dual ? 5 : 4;
    std::size_t c = d.find(',', start), colon = d.find(':', c);
    int r = std::stoi(d.substr(start, c - start));
    int t = std::stoi(d.substr(c + 1, colon - c - 1));
    std::istringstream body(d.substr(colon + 2, d.size() - colon - 3));  // inside [...]
    if (dual) {
      std::vector<int> f;
      int v = 0;
      while (body >> v) f.push_back(v);
      return cantor_dual_morphism(r, t, f);
    }
    std::vector<std::vector<ExtNat>> M(static_cast<std::size_t>(t));
    std::string tok;
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < r; ++j) {
        if (!(body >> tok)) throw std::invalid_argument("mat: body too short: " + d);
        M[static_cast<std::size_t>(i)].push_back(parse_extnat(tok));
      }
    return simplicial_hom(r, t, M);
  }
  if (d.rfind("pl:", 0) == 0) return pl_induced_morphism(PLSurjection::decode(d.substr(3)));
  if (d.rfind("shift:", 0) == 0)
    return shift_morphism(make_steplsc_interval(), parse_rat(d.substr(6)));
  if (d.rfind("softscale:", 0) == 0) return soft_scale(parse_rat(d.substr(10)));
  throw std::invalid_argument("unknown morphism description: " + d);
}

}  // namespace

CuMorphism morphism_from_desc(const std::string& desc) {
  // composites are written f*g (apply g first); descriptions contain no other '*'
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t star = desc.find('*', pos);
    parts.push_back(desc.substr(pos, star - pos));
    if (star == std::string::npos) break;
    pos = star + 1;
  }
  CuMorphism m = atom_from_desc(parts.back());
  for (std::size_t i = parts.size() - 1; i-- > 0;) m = compose(atom_from_desc(parts[i]), m);
  return m;
}

// --------------------------------------------------------------- commands ---

namespace {

json rat_json(const Rat& q) {
  return json::array({numerator(q).str(), denominator(q).str()});
}

RunReport cmd_check(const RunManifest& m) {
  Sem S = semigroup_from_name(m.get("semigroup"));
  AxiomReport rep = check_axioms(S, m.depth);
  RunReport out;
  std::ostringstream os;
  os << "check " << S->id() << "\ndepth " << m.depth << "\nelements "
     << rep.elements_checked << "\nviolations " << rep.violations.size() << "\n";
  for (auto& v : rep.violations) os << "  " << v << "\n";
  out.text = os.str();
  json j{{"command", "check"},
         {"semigroup", S->id()},
         {"depth", m.depth},
         {"elements", rep.elements_checked},
         {"violations", rep.violations}};
  out.sidecar = j.dump(2);
  out.exit_code = rep.pass() ? kExitPass : kExitVerifyFail;
  return out;
}

RunReport cmd_enumerate(const RunManifest& m) {
  RunReport out;
  std::ostringstream os;
  json list = json::array();
  if (m.args.count("category")) {
    FraisseCategory cat = category_from_name(m.get("category"));
    Sem A = cat.object(std::stoi(m.get("a", "0")));
    Sem B = cat.object(std::stoi(m.get("b", "0")));
    os << "enumerate " << cat.name << " " << A->id() << " -> " << B->id() << "\n";
    for (auto& h : cat.homs(A, B, m.bound)) {
      os << "  " << h.desc() << "\n";
      list.push_back(h.desc());
    }
  } else {
    int n = std::stoi(m.get("from")), t = std::stoi(m.get("to"));
    bool emb = m.get("embeddings", "0") == "1";
    os << "enumerate E_" << n << " -> E_" << t << (emb ? " embeddings" : " morphisms")
       << "\n";
    for (auto& h : elementary_enumerate(n, t, emb)) {
      os << "  " << h.desc() << "\n";
      list.push_back(h.desc());
    }
  }
  out.text = os.str();
  out.sidecar = json{{"command", "enumerate"}, {"morphisms", list}}.dump(2);
  return out;
}

RunReport cmd_amalgamate(const RunManifest& m) {
  FraisseCategory cat = category_from_name(m.get("category"));
  CuMorphism a1 = morphism_from_desc(m.get("alpha"));
  CuMorphism a2 = morphism_from_desc(m.get("beta"));
  FiniteSubset F = capped_subset(a1.dom(), m.depth, 60);
  auto am = amalgamate(cat, a1, a2, F, m.bound);
  RunReport out;
  std::ostringstream os;
  json j{{"command", "amalgamate"}, {"category", cat.name},
         {"alpha", a1.desc()},      {"beta", a2.desc()},
         {"depth", m.depth},        {"bound", m.bound}};
  if (am) {
    os << "amalgam " << am->C->id() << "\nbeta1 " << am->beta1.desc() << "\nbeta2 "
       << am->beta2.desc() << "\ncertified " << (am->certified ? 1 : 0) << "\nexact "
       << (am->exact ? 1 : 0) << "\n";
    j["C"] = am->C->id();
    j["beta1"] = am->beta1.desc();
    j["beta2"] = am->beta2.desc();
    j["certified"] = am->certified;
    out.exit_code = am->certified ? kExitPass : kExitVerifyFail;
  } else {
    os << "exhausted bound " << m.bound << "\n";
    j["exhausted"] = true;
    // arithmetic interval certificate for elementary codomains: an embedding
    // beta_i : E_{n_i} -> E_m multiplies by k_i in (m/(n_i+1), m/n_i], so the
    // composite beta_i o alpha_i sends 1 to u_i*k_i in (u_i*m/(n_i+1), u_i*m/n_i]
    // with u_i = alpha_i(1); agreement on the generator forces a common value
    auto eb = [](const Sem& S) { return std::stoi(S->id().substr(2)); };
    if (a1.cod()->id().rfind("E_", 0) == 0 && a2.cod()->id().rfind("E_", 0) == 0) {
      int n1 = eb(a1.cod()), n2 = eb(a2.cod());
      ExtNat u1 = std::get<ExtNat>(a1(Element(ExtNat(1))));
      ExtNat u2 = std::get<ExtNat>(a2(Element(ExtNat(1))));
      if (!u1.inf && !u2.inf && u1.n > 0 && u2.n > 0) {
        Int a = u1.n, b = u2.n;
        // disjoint for every m iff u1/n1 <= u2/(n2+1) or u2/n2 <= u1/(n1+1)
        bool always = Rat(a, n1) <= Rat(b, n2 + 1) || Rat(b, n2) <= Rat(a, n1 + 1);
        os << "composite intervals (" << a << "*m/" << (n1 + 1) << ", " << a << "*m/"
           << n1 << "] and (" << b << "*m/" << (n2 + 1) << ", " << b << "*m/" << n2
           << "]\n";
        if (always)
          os << "disjoint for every m: " << rat_str(std::min(Rat(a, n1), Rat(b, n2)))
             << " <= " << rat_str(std::max(Rat(a, n1 + 1), Rat(b, n2 + 1))) << "\n";
        json iv = json::array();
        for (int c = 0; c <= m.bound; ++c) {
          int mm = eb(cat.object(c));
          Rat lo = std::max(Rat(a * mm, n1 + 1), Rat(b * mm, n2 + 1));
          Rat hi = std::min(Rat(a * mm, n1), Rat(b * mm, n2));
          bool nonempty = hi > lo;
          iv.push_back({{"m", mm},
                        {"lo", rat_json(lo)},
                        {"hi", rat_json(hi)},
                        {"common_value", nonempty}});
        }
        j["intervals"] = iv;
        j["disjoint_for_every_m"] = always;
      }
    }
    out.exit_code = kExitBudget;
  }
  out.text = os.str();
  out.sidecar = j.dump(2);
  return out;
}

json archive_json(const FraissePrefix& P, const RunManifest& m) {
  json stages = json::array(), connect = json::array(), ledger = json::array();
  for (auto& s : P.stages) stages.push_back(s->id());
  for (auto& c : P.connect) connect.push_back(c.desc());
  for (auto& c : P.ledger)
    ledger.push_back({{"stage", c.stage},
                      {"alpha", c.alpha_desc},
                      {"beta", c.beta_desc},
                      {"j", c.j},
                      {"basis_depth", c.basis_depth}});
  return json{{"command", "fraisse"}, {"category", P.cat.name},
              {"seed", m.seed},       {"bound", m.bound},
              {"depth", m.depth},     {"stages", stages},
              {"connect", connect},   {"ledger", ledger}};
}

RunReport cmd_fraisse(const RunManifest& m) {
  FraisseCategory cat = category_from_name(m.get("category"));
  DemandSchedule sched{m.seed};
  int steps = std::stoi(m.get("steps", "10"));
  FraissePrefix P = build_fraisse_prefix(cat, sched, steps, m.bound);
  RunReport out;
  std::ostringstream os;
  os << "fraisse " << cat.name << "\nsteps " << steps << "\nseed " << m.seed
     << "\nstages " << P.stages.size() << "\ndemands " << P.ledger.size() << "\n";
  for (auto& c : P.ledger)
    os << "  stage " << c.stage << " alpha " << c.alpha_desc << " beta " << c.beta_desc
       << " j " << c.j << " B_" << c.basis_depth << "\n";
  out.text = os.str();
  json arch = archive_json(P, m);
  out.sidecar = arch.dump(2);
  if (!m.out_dir.empty()) {
    std::ofstream f(m.out_dir + "/archive.json");
    if (!f) throw std::invalid_argument("cannot write archive in " + m.out_dir);
    f << out.sidecar << "\n";
  }
  return out;
}

RunReport cmd_limit(const RunManifest& m) {
  std::string preset = m.get("sequence");
  MorphismSequence seq;
  CuMorphism closed;
  if (preset == "softray_halving") {
    Sem R = make_soft_ray();
    seq = {R, R, [](int i) {
             Rat c = 2 - Rat(1, Int(1) << std::min(i, 40));
             return soft_scale(c);
           }, nullptr};
    closed = soft_scale(Rat(2));
  } else if (preset == "shift_tau") {
    // pullback shifts flatten only [0, 1/(i+2)] to the value at 0, so the
    // sequence converges to the identity in the comparison sense
    Sem S = make_generator_g();
    seq = {S, S, [S](int i) { return shift_morphism(S, Rat(1, i + 2)); }, nullptr};
    closed = CuMorphism::identity(S);
  } else {
    throw std::invalid_argument("unknown limit sequence: " + preset);
  }
  CauchyLimitResult lim = cauchy_limit(seq, m.depth);
  LawReport cert = verify_limit(seq, closed, m.depth);
  RunReport out;
  std::ostringstream os;
  os << "limit " << preset << "\nphi";
  for (int p : lim.phi) os << " " << p;
  os << "\nstabilized " << lim.stabilized << "\nchain_independent " << lim.chain_independent
     << "\nclosed_form " << closed.desc() << "\nclosed_form_certified " << cert.pass()
     << "\n";
  out.text = os.str();
  out.sidecar = json{{"command", "limit"},
                     {"sequence", preset},
                     {"phi", lim.phi},
                     {"stabilized", lim.stabilized},
                     {"chain_independent", lim.chain_independent},
                     {"closed_form", closed.desc()},
                     {"closed_form_certified", cert.pass()}}
                    .dump(2);
  out.exit_code = cert.pass() ? kExitPass : kExitVerifyFail;
  return out;
}

RunReport cmd_metric(const RunManifest& m) {
  std::string preset = m.get("preset", "counterexample");
  RunReport out;
  std::ostringstream os;
  if (preset == "counterexample") {
    int n_max = std::stoi(m.get("n_max", "8"));
    Sem S = make_steplsc_interval();
    CuMorphism id = CuMorphism::identity(S);
    std::vector<Rat> vals(static_cast<std::size_t>(n_max - 1));
    int threads = std::min(thread_cap(), n_max - 1);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w]() {
        for (int n = 2 + w; n <= n_max; n += threads) {
          // row n probes tau_n against the matched family {id, lambda_n}; the
          // sup over the whole ladder {lambda_m} strictly exceeds 1/2 once
          // m > n, so the constant-1/2 table is a matched-family statement
          GeneratingFamily full = lambda_counterexample(S, std::max(n, 2));
          GeneratingFamily Ln{S, {full.paths.front(), full.paths.back()}, 0};
          vals[static_cast<std::size_t>(n - 2)] =
              d_lambda(counterexample_tau(S, n), id, Ln).value;
        }
      });
    for (auto& th : pool) th.join();
    os << "metric counterexample n_max " << n_max << "\n";
    json rows = json::array();
    bool all_half = true;
    for (int n = 2; n <= n_max; ++n) {
      const Rat& v = vals[static_cast<std::size_t>(n - 2)];
      os << "  n " << n << " d_lambda " << rat_str(v) << "\n";
      rows.push_back({{"n", n}, {"d", rat_json(v)}});
      all_half = all_half && v == Rat(1, 2);
    }
    os << "constant_half " << all_half << "\n";
    out.text = os.str();
    out.sidecar = json{{"command", "metric"},
                       {"preset", preset},
                       {"rows", rows},
                       {"constant_half", all_half}}
                      .dump(2);
    out.exit_code = all_half ? kExitPass : kExitVerifyFail;
  } else if (preset == "lsc_shift") {
    Sem S = make_steplsc_interval();
    Rat s = parse_rat(m.get("shift", "1/4"));
    int grid = std::stoi(m.get("grid", "4"));
    Rat v = lsc_metric(shift_morphism(S, s), CuMorphism::identity(S), grid);
    os << "metric lsc_shift shift " << rat_str(s) << " grid " << grid << " value "
       << rat_str(v) << "\n";
    out.text = os.str();
    out.sidecar = json{{"command", "metric"},
                       {"preset", preset},
                       {"value", rat_json(v)}}
                      .dump(2);
  } else {
    throw std::invalid_argument("unknown metric preset: " + preset);
  }
  return out;
}

}  // namespace

RunReport replay_archive(const std::string& archive_text) {
  RunReport out;
  json arch;
  try {
    arch = json::parse(archive_text);
  } catch (const std::exception& e) {
    out.exit_code = kExitInput;
    out.text = std::string("replay: bad archive: ") + e.what() + "\n";
    return out;
  }
  std::ostringstream os;
  std::vector<std::string> failures;
  try {
    std::vector<Sem> stages;
    for (auto& s : arch.at("stages")) stages.push_back(semigroup_from_name(s));
    std::vector<CuMorphism> connect;
    for (auto& c : arch.at("connect")) connect.push_back(morphism_from_desc(c));
    for (std::size_t i = 0; i < connect.size(); ++i)
      if (!same_sem(connect[i].dom(), stages[i]) ||
          !same_sem(connect[i].cod(), stages[i + 1]))
        failures.push_back("connecting map " + std::to_string(i) + " object mismatch");
    int idx = 0;
    for (auto& c : arch.at("ledger")) {
      int stage = c.at("stage"), j = c.at("j"), bd = c.at("basis_depth");
      CuMorphism alpha = morphism_from_desc(c.at("alpha"));
      CuMorphism beta = morphism_from_desc(c.at("beta"));
      CuMorphism sigma = CuMorphism::identity(stages[static_cast<std::size_t>(stage)]);
      for (int k = stage; k < j; ++k) sigma = compose(connect[static_cast<std::size_t>(k)], sigma);
      FiniteSubset F = capped_subset(stages[static_cast<std::size_t>(stage)], bd, 60);
      if (!compare_on(compose(beta, alpha), sigma, F))
        failures.push_back("certificate " + std::to_string(idx) + " fails compare_on");
      ++idx;
    }
    os << "replay " << arch.at("category").get<std::string>() << "\ncertificates " << idx
       << "\nfailures " << failures.size() << "\n";
  } catch (const std::exception& e) {
    out.exit_code = kExitInput;
    out.text = std::string("replay: malformed archive field: ") + e.what() + "\n";
    return out;
  }
  for (auto& f : failures) os << "  " << f << "\n";
  out.text = os.str();
  out.sidecar = json{{"command", "replay"}, {"failures", failures}}.dump(2);
  out.exit_code = failures.empty() ? kExitPass : kExitVerifyFail;
  return out;
}

RunReport run_manifest(const RunManifest& m) {
  try {
    if (m.command == "check") return cmd_check(m);
    if (m.command == "enumerate") return cmd_enumerate(m);
    if (m.command == "amalgamate") return cmd_amalgamate(m);
    if (m.command == "fraisse") return cmd_fraisse(m);
    if (m.command == "limit") return cmd_limit(m);
    if (m.command == "metric") return cmd_metric(m);
    if (m.command == "replay") {
      std::ifstream in(m.get("archive"));
      if (!in) throw std::invalid_argument("cannot open archive: " + m.get("archive"));
      std::ostringstream buf;
      buf << in.rdbuf();
      return replay_archive(buf.str());
    }
    throw std::invalid_argument("unknown command: " + m.command);
  } catch (const std::invalid_argument& e) {
    return RunReport{kExitInput, std::string("input error: ") + e.what() + "\n", "{}"};
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    int code = msg.find("exhausted") != std::string::npos ? kExitBudget : kExitVerifyFail;
    return RunReport{code, "diagnostic: " + msg + "\n", "{}"};
  }
}

}  // namespace cuf
