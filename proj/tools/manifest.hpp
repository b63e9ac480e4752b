#pragma once

// Run manifests: effective configuration, seeds, timing and SHA-256 digests of
// every artifact, written next to the outputs.

#include "config.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tdefl::cli {

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& data);

struct RunManifest {
  std::string command;
  Config config;
  std::string version;
  std::vector<std::uint64_t> seeds;
  double wall_clock_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> outputs;  // file name, digest

  std::string to_json() const;
  void write(const std::filesystem::path& dir) const;
};

/// Reads the "config" object (and "command") of a manifest back into a Config.
Config config_from_manifest(const std::string& json_text, std::string* command = nullptr);

}  // namespace tdefl::cli
