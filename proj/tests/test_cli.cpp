// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cuf/instances.hpp"
#include "cuf/manifest.hpp"
#include "cuf/metrics.hpp"

using namespace cuf;
using json = nlohmann::json;

namespace {

RunReport run_text(const std::string& manifest_text) {
  return run_manifest(RunManifest::parse(manifest_text));
}

std::string line_of_error(const std::string& text) {
  try {
    RunManifest::parse(text);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("manifest parsing: comments, overrides, and line-numbered errors") {
  RunManifest m = RunManifest::parse(
      "# a comment line\n"
      "command check   # trailing comment\n"
      "semigroup Nbar\n"
      "depth 3\n"
      "bound 12\n"
      "seed 7\n");
  CHECK(m.command == "check");
  CHECK(m.get("semigroup") == "Nbar");
  CHECK(m.depth == 3);
  CHECK(m.bound == 12);
  CHECK(m.seed == 7);
  CHECK(m.get("missing", "fallback") == "fallback");

  // the error message names the offending line
  CHECK(line_of_error("command check\ndepth\n").rfind("line 2:", 0) == 0);
  CHECK(line_of_error("command check\n\n\ndepth x\n").rfind("line 4:", 0) == 0);
  CHECK(line_of_error("depth 3\n").rfind("line 1: missing 'command'", 0) == 0);
}

TEST_CASE("identical manifests produce byte-identical reports") {
  const std::string text =
      "command fraisse\ncategory e_inf\nsteps 8\nseed 3\ndepth 2\nbound 16\n";
  RunReport a = run_text(text), b = run_text(text);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.text == b.text);
  CHECK(a.sidecar == b.sidecar);
}

TEST_CASE("morphism descriptions round-trip through their canonical encodings") {
  for (const std::string d : {"elem:2,6,k=2", "elem:1,4,k=inf", "mulpow:2,3",
                              "shift:1/4", "softscale:3/2", "id[Nbar]",
                              "elem:2,6,k=3*elem:1,2,k=2"}) {
    CuMorphism f = morphism_from_desc(d);
    CHECK(f.desc() == d);
    CuMorphism g = morphism_from_desc(f.desc());
    for (auto& x : f.dom()->basis(2)) CHECK(f.cod()->eq(f(x), g(x)));
  }
  CHECK_THROWS_AS((void)morphism_from_desc("mystery:1"), std::invalid_argument);
  // builtin presentation names resolve; unknown ones are input errors
  CHECK(semigroup_from_name("S_2")->id() == "S_2");
  CHECK(semigroup_from_name("Lsc")->id() == "Lsc[0,1]");
  CHECK_THROWS_AS((void)semigroup_from_name("Zorro"), std::invalid_argument);
  CHECK(category_from_name("K_Cantor:3").name.rfind("K_Cantor", 0) == 0);
  CHECK_THROWS_AS((void)category_from_name("q_9"), std::invalid_argument);
}

TEST_CASE("exit codes: pass, verification failure, budget exhaustion, input error") {
  // 0: a clean axiom check
  CHECK(run_text("command check\nsemigroup Nbar\ndepth 3\n").exit_code == kExitPass);
  // 2: the arithmetic amalgamation obstruction, with the interval certificate
  RunReport obs = run_text(
      "command amalgamate\ncategory e_emb\nalpha elem:1,6,k=4\nbeta elem:1,6,k=5\n"
      "depth 1\nbound 24\n");
  CHECK(obs.exit_code == kExitBudget);
  CHECK(obs.text.find("exhausted bound 24") != std::string::npos);
  CHECK(obs.text.find("disjoint for every m") != std::string::npos);
  json side = json::parse(obs.sidecar);
  CHECK(side.at("disjoint_for_every_m") == true);
  CHECK(side.at("intervals").size() == 25);
  for (auto& row : side.at("intervals")) CHECK(row.at("common_value") == false);
  // 0 again: a solvable square in the same pipeline
  RunReport am = run_text(
      "command amalgamate\ncategory s_2\nalpha mulpow:2,1\nbeta mulpow:2,2\n"
      "depth 2\nbound 8\n");
  CHECK(am.exit_code == kExitPass);
  CHECK(am.text.find("certified 1") != std::string::npos);
  // 3: malformed inputs of several kinds
  CHECK(run_text("command warble\n").exit_code == kExitInput);
  CHECK(run_text("command check\nsemigroup Zorro\n").exit_code == kExitInput);
  CHECK(run_text("command metric\npreset nope\n").exit_code == kExitInput);
  CHECK(replay_archive("{ not json").exit_code == kExitInput);
  CHECK(replay_archive("{\"stages\": []}").exit_code == kExitInput);
}

TEST_CASE("fraisse archives replay bit-exact and tampering is detected") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "cuf_cli_test_archive";
  fs::create_directories(dir);
  RunManifest m = RunManifest::parse(
      "command fraisse\ncategory e_inf\nsteps 10\nseed 1\ndepth 2\nbound 16\n");
  m.out_dir = dir.string();
  RunReport rep = run_manifest(m);
  REQUIRE(rep.exit_code == kExitPass);

  std::ifstream in(dir / "archive.json");
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string archived = buf.str();
  CHECK(json::parse(archived) == json::parse(rep.sidecar));

  RunReport ok = replay_archive(archived);
  CHECK(ok.exit_code == kExitPass);
  CHECK(ok.text.find("failures 0") != std::string::npos);

  // corrupt one certificate: the saturating map cannot equal the archived cone
  json arch = json::parse(archived);
  REQUIRE(!arch.at("ledger").empty());
  std::string beta = arch["ledger"][0]["beta"];
  REQUIRE(beta.rfind("elem:", 0) == 0);
  arch["ledger"][0]["beta"] = beta.substr(0, beta.find("k=") + 2) + "inf";
  RunReport bad = replay_archive(arch.dump());
  CHECK(bad.exit_code == kExitVerifyFail);
  CHECK(bad.text.find("fails compare_on") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("limit presets certify their closed forms") {
  RunReport soft = run_text("command limit\nsequence softray_halving\ndepth 3\n");
  CHECK(soft.exit_code == kExitPass);
  CHECK(soft.text.find("closed_form softscale:2") != std::string::npos);
  CHECK(soft.text.find("closed_form_certified 1") != std::string::npos);

  RunReport tau = run_text("command limit\nsequence shift_tau\ndepth 2\n");
  CHECK(tau.exit_code == kExitPass);
  CHECK(json::parse(tau.sidecar).at("closed_form_certified") == true);

  CHECK(run_text("command limit\nsequence warp\n").exit_code == kExitInput);
}

TEST_CASE("metric presets: matched-family table and the lsc shift value") {
  RunReport tab = run_text("command metric\npreset counterexample\nn_max 8\n");
  CHECK(tab.exit_code == kExitPass);
  json side = json::parse(tab.sidecar);
  CHECK(side.at("constant_half") == true);
  REQUIRE(side.at("rows").size() == 7);
  for (auto& row : side.at("rows")) {
    CHECK(row.at("d")[0] == "1");
    CHECK(row.at("d")[1] == "2");
  }

  RunReport shift = run_text("command metric\npreset lsc_shift\nshift 1/4\ngrid 4\n");
  CHECK(shift.exit_code == kExitPass);
  json v = json::parse(shift.sidecar).at("value");
  CHECK(v[0] == "1");
  CHECK(v[1] == "4");
}

TEST_CASE("thread cap obeys and clamps CUFRAISSE_THREADS; reports stay identical") {
  unsetenv("CUFRAISSE_THREADS");
  CHECK(thread_cap() == 1);
  setenv("CUFRAISSE_THREADS", "4", 1);
  CHECK(thread_cap() == 4);
  setenv("CUFRAISSE_THREADS", "9999", 1);
  CHECK(thread_cap() == 64);
  setenv("CUFRAISSE_THREADS", "-2", 1);
  CHECK(thread_cap() == 1);

  // the parallel metric table merges deterministically
  const std::string text = "command metric\npreset counterexample\nn_max 6\n";
  setenv("CUFRAISSE_THREADS", "1", 1);
  RunReport serial = run_text(text);
  setenv("CUFRAISSE_THREADS", "4", 1);
  RunReport parallel = run_text(text);
  CHECK(serial.text == parallel.text);
  CHECK(serial.sidecar == parallel.sidecar);
  unsetenv("CUFRAISSE_THREADS");
}

TEST_CASE("enumerate lists hom sets for tables and categories") {
  RunReport tab = run_text("command enumerate\nfrom 2\nto 6\nembeddings 1\n");
  CHECK(tab.exit_code == kExitPass);
  // embeddings E_2 -> E_6 multiply by k in (2, 3]: exactly k = 3
  json side = json::parse(tab.sidecar);
  REQUIRE(side.at("morphisms").size() == 1);
  CHECK(side.at("morphisms")[0] == "elem:2,6,k=3");

  RunReport cat = run_text("command enumerate\ncategory s_2\na 0\nb 1\nbound 4\n");
  CHECK(cat.exit_code == kExitPass);
  CHECK_FALSE(json::parse(cat.sidecar).at("morphisms").empty());
}
