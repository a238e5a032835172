// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at http://boost.org/LICENSE_1_0.txt)

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cuf/manifest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cufraisse: batch runner for the Cu-semigroup engine"};
  std::string manifest_path, replay_path, out_dir;
  int depth = -1, bound = -1;
  std::int64_t seed = -1;
  app.add_option("--manifest", manifest_path, "manifest file to run");
  app.add_option("--replay", replay_path, "archive to re-verify");
  app.add_option("--depth", depth, "override manifest depth");
  app.add_option("--bound", bound, "override manifest bound");
  app.add_option("--seed", seed, "override manifest seed");
  app.add_option("--out", out_dir, "output directory for reports and archives");
  CLI11_PARSE(app, argc, argv);

  cuf::RunReport rep;
  try {
    if (!replay_path.empty()) {
      std::ifstream in(replay_path);
      if (!in) {
        std::cerr << "input error: cannot open archive: " << replay_path << "\n";
        return cuf::kExitInput;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      rep = cuf::replay_archive(buf.str());
    } else if (!manifest_path.empty()) {
      cuf::RunManifest m = cuf::RunManifest::parse_file(manifest_path);
      if (depth >= 0) m.depth = depth;
      if (bound >= 0) m.bound = bound;
      if (seed >= 0) m.seed = static_cast<std::uint64_t>(seed);
      if (!out_dir.empty()) m.out_dir = out_dir;
      if (!m.out_dir.empty()) std::filesystem::create_directories(m.out_dir);
      rep = cuf::run_manifest(m);
    } else {
      std::cerr << "input error: --manifest or --replay required\n";
      return cuf::kExitInput;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return cuf::kExitInput;
  }

  std::cout << rep.text;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream rf(out_dir + "/report.txt"), sf(out_dir + "/report.json");
    rf << rep.text;
    sf << rep.sidecar << "\n";
  }
  return rep.exit_code;
}
