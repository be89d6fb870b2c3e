#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hodgekit {

enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailed = 1,
  kExitInput = 2,
  kExitRefused = 3,
};

/// Runs the command line. Summaries go to `out`, diagnostics to `err`;
/// machine-readable results are written to files only.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Record of one invocation, embedded in every file the tool writes.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string started;
  std::string finished;
  std::string outcome;

  nlohmann::ordered_json to_json() const;
};

/// UTC timestamp, or the value of HODGEKIT_FIXED_TIME when set.
std::string timestamp_now();
std::string tool_version();

}  // namespace hodgekit
