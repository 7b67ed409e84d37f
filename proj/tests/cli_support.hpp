#pragma once

// Runs the poswise-bench executable and reads back what it wrote.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace poswise::testing {

struct CliRun {
  int exit_code = -1;
  std::filesystem::path out;

  std::string csv() const { return slurp(out / "losses.csv"); }
  std::string svg() const { return slurp(out / "losses.svg"); }
  nlohmann::json json() const { return nlohmann::json::parse(slurp(out / "report.json")); }

  static std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

/// Runs `exe args --out <out>` with stdout and stderr sent to <out>.log.
inline CliRun run_cli(const std::string& exe, const std::string& args,
                      const std::filesystem::path& out) {
  std::filesystem::remove_all(out);
  std::filesystem::create_directories(out.parent_path());
  const std::string log = out.string() + ".log";
  const std::string cmd =
      "'" + exe + "' " + args + " --out '" + out.string() + "' > '" + log + "' 2>&1";
  const int status = std::system(cmd.c_str());
  CliRun run;
  run.out = out;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

/// The report with every timing field removed.
inline nlohmann::json without_timings(nlohmann::json j) {
  for (auto& [name, opt] : j["optimizers"].items()) opt.erase("wall_seconds");
  return j;
}

}  // namespace poswise::testing
