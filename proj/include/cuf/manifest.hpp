// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#ifndef CUF_MANIFEST_HPP
#define CUF_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>

#include "cuf/fraisse.hpp"

namespace cuf {

// Exit-code contract shared by the library runner and the CLI.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitInput = 3;

// Line-oriented manifest: one `key value` pair per line, '#' comments. The
// manifest fully determines a run; identical manifests give identical reports.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> args;
  int depth = 4;
  int bound = 24;
  std::uint64_t seed = 0;
  std::string out_dir;

  // throws std::invalid_argument with "line N: ..." on malformed input
  static RunManifest parse(const std::string& text);
  static RunManifest parse_file(const std::string& path);
  std::string get(const std::string& key, const std::string& fallback = "") const;
};

struct RunReport {
  int exit_code = kExitPass;
  std::string text;     // human-readable, byte-deterministic
  std::string sidecar;  // machine-readable JSON (certificates, exact rationals)
};

// Dispatches check / enumerate / amalgamate / fraisse / limit / metric /
// replay. Never throws for run-level failures — they land in exit_code.
RunReport run_manifest(const RunManifest& m);

// Re-verifies every certificate of a cmd_fraisse archive (JSON text).
RunReport replay_archive(const std::string& archive_json);

// Resolve a builtin semigroup or category by presentation name.
Sem semigroup_from_name(const std::string& name);
FraisseCategory category_from_name(const std::string& name);

// Rebuild a morphism from its canonical description ("elem:", "mulpow:",
// "mat:", "dual:", "pl:", "shift:", "id[...]"); throws on unknown forms.
CuMorphism morphism_from_desc(const std::string& desc);

// CUFRAISSE_THREADS cap (≥ 1); parallel sections use it with deterministic
// ordered merges.
int thread_cap();

}  // namespace cuf

#endif
