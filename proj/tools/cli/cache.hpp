#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace careertrace::cli {

/// Content-addressed store for intermediate tables. Every entry is a pair
/// of files: the table and a sidecar holding its SHA-256. Entries whose
/// sidecar is missing or does not match are discarded with a warning.
class Cache {
 public:
  /// A disabled cache never returns or stores anything.
  Cache(std::filesystem::path dir, bool enabled, std::ostream& warnings);

  bool enabled() const noexcept { return enabled_; }
  std::optional<std::string> load(const std::string& key, const std::string& name);
  void store(const std::string& key, const std::string& name, const std::string& content);
  /// Drops an entry that passed its checksum but could not be used.
  void discard(const std::string& key, const std::string& name, const std::string& reason);

 private:
  std::filesystem::path table_path(const std::string& key, const std::string& name) const;
  std::filesystem::path sum_path(const std::string& key, const std::string& name) const;

  std::filesystem::path dir_;
  bool enabled_;
  std::ostream& warnings_;
};

}  // namespace careertrace::cli
