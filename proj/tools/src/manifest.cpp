#include <chrono>
#include <cstdlib>
#include <ctime>

#include "hodgekit/cli.hpp"

#ifndef HODGEKIT_VERSION
#define HODGEKIT_VERSION "0.0.0"
#endif

namespace hodgekit {

std::string tool_version() { return HODGEKIT_VERSION; }

std::string timestamp_now() {
  if (const char* fixed = std::getenv("HODGEKIT_FIXED_TIME"); fixed && *fixed) return fixed;
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json RunManifest::to_json() const {
  return {{"command", command},   {"config", config},     {"seed", seed},      {"tool_version", tool_version},
          {"started", started},   {"finished", finished}, {"outcome", outcome}};
}

}  // namespace hodgekit
