#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace careertrace::cli {

std::string tool_version();

/// Run record written next to every output. Only `timestamp` and `stages`
/// vary between reruns with identical inputs.
struct Manifest {
  std::string subcommand;
  std::string corpus_sha256;
  std::string scheme_sha256;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::map<std::string, std::string> outputs;  // file name -> SHA-256
  std::vector<std::pair<std::string, std::string>> stages;  // stage -> "built" | "cache"

  nlohmann::ordered_json to_json(const std::string& timestamp) const;
  /// Hashes `files` (relative to `dir`) and writes dir/manifest.json.
  void write(const std::filesystem::path& dir, const std::vector<std::string>& files);
};

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace careertrace::cli
