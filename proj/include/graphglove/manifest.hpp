#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphglove/common.hpp"

namespace graphglove {

// FNV-1a 64-bit digest of a file, as 16 hex chars. Fast, deterministic, and
// plenty for "did the input change" provenance checks.
inline std::string file_digest(const std::string& path) {
  auto in = open_input(path);
  uint64_t h = 1469598103934665603ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

inline std::string iso8601_utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Every artifact-producing CLI run writes `<primary output>.manifest.json`
// recording the command, its configuration, seeds, input digests, and output
// paths. This is the only place a timestamp appears; artifacts themselves
// stay byte-reproducible.
inline void write_manifest(const std::string& primary_output, const std::string& command,
                           const std::map<std::string, std::string>& config, uint64_t seed,
                           const std::vector<std::string>& inputs,
                           const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed;
  j["created"] = iso8601_utc_now();
  nlohmann::json ins = nlohmann::json::object();
  for (const auto& path : inputs) ins[path] = file_digest(path);
  j["inputs"] = ins;
  j["outputs"] = outputs;
  auto out = open_output(primary_output + ".manifest.json");
  out << j.dump(2) << "\n";
}

}  // namespace graphglove
