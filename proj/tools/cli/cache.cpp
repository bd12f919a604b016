#include "cli/cache.hpp"

#include <fstream>
#include <sstream>

#include "careertrace/error.hpp"
#include "cli/hash.hpp"

namespace careertrace::cli {

namespace {

std::optional<std::string> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error(Errc::Io, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

Cache::Cache(std::filesystem::path dir, bool enabled, std::ostream& warnings)
    : dir_(std::move(dir)), enabled_(enabled), warnings_(warnings) {}

std::filesystem::path Cache::table_path(const std::string& key, const std::string& name) const {
  return dir_ / (key + "." + name + ".csv");
}

std::filesystem::path Cache::sum_path(const std::string& key, const std::string& name) const {
  return dir_ / (key + "." + name + ".sha256");
}

std::optional<std::string> Cache::load(const std::string& key, const std::string& name) {
  if (!enabled_) return std::nullopt;
  auto table = slurp(table_path(key, name));
  auto sum = slurp(sum_path(key, name));
  if (!table && !sum) return std::nullopt;
  if (!table || !sum || sha256_hex(*table) + "\n" != *sum) {
    discard(key, name, "checksum mismatch");
    return std::nullopt;
  }
  return table;
}

void Cache::store(const std::string& key, const std::string& name, const std::string& content) {
  if (!enabled_) return;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  try {
    write_atomically(table_path(key, name), content);
    write_atomically(sum_path(key, name), sha256_hex(content) + "\n");
  } catch (const std::exception& e) {
    warnings_ << "warning: cache write failed: " << e.what() << '\n';
  }
}

void Cache::discard(const std::string& key, const std::string& name, const std::string& reason) {
  warnings_ << "warning: discarding corrupted cache entry " << table_path(key, name).string() << " (" << reason
            << ")\n";
  std::error_code ec;
  std::filesystem::remove(table_path(key, name), ec);
  std::filesystem::remove(sum_path(key, name), ec);
}

}  // namespace careertrace::cli
