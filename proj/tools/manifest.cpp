#include "manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hc2::cli {

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot digest " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

void RunManifest::write(const std::string& primary_output) const {
  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["command"] = command;
  j["argv"] = argv;
  j["parameters"] = nlohmann::json::parse(parameters_json);
  if (seed) j["seed"] = *seed;
  j["wall_ms"] = wall_ms;
  nlohmann::json outs = nlohmann::json::array();
  for (const std::string& path : outputs) {
    std::ostringstream hex;
    hex << std::hex << fnv1a64_file(path);
    outs.push_back({{"path", path}, {"fnv1a64", hex.str()}});
  }
  j["outputs"] = outs;
  std::ofstream out(primary_output + ".manifest.json");
  out << j.dump(2) << '\n';
}

}  // namespace hc2::cli
