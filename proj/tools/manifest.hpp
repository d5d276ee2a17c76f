// Run manifests: every invocation records its command line, parameters,
// seeds, version, wall time, and output digests next to its artifacts.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hc2::cli {

inline constexpr const char* kToolVersion = "hc2 0.1.0";

std::uint64_t fnv1a64_file(const std::string& path);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::string parameters_json;  // full resolved parameter set
  std::optional<std::uint64_t> seed;
  double wall_ms = 0;
  std::vector<std::string> outputs;

  // Writes <primary_output>.manifest.json.
  void write(const std::string& primary_output) const;
};

}  // namespace hc2::cli
