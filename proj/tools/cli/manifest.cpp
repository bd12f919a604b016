#include "cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "careertrace/error.hpp"
#include "cli/hash.hpp"

namespace careertrace::cli {

std::string tool_version() { return CAREERTRACE_VERSION; }

nlohmann::ordered_json Manifest::to_json(const std::string& timestamp) const {
  nlohmann::ordered_json out;
  out["tool"] = "careertrace";
  out["version"] = tool_version();
  out["subcommand"] = subcommand;
  out["corpus_sha256"] = corpus_sha256;
  out["scheme_sha256"] = scheme_sha256;
  out["config"] = config;
  out["outputs"] = nlohmann::ordered_json::object();
  for (const auto& [name, sha] : outputs) out["outputs"][name] = sha;
  out["stages"] = nlohmann::ordered_json::array();
  for (const auto& [stage, source] : stages) out["stages"].push_back({{"stage", stage}, {"source", source}});
  out["timestamp"] = timestamp;
  return out;
}

void Manifest::write(const std::filesystem::path& dir, const std::vector<std::string>& files) {
  for (const auto& name : files) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read back " + (dir / name).string());
    std::ostringstream text;
    text << in.rdbuf();
    outputs[name] = sha256_hex(text.str());
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  out << to_json(utc_timestamp()).dump(2) << '\n';
  if (!out) throw Error(Errc::Io, "cannot write " + (dir / "manifest.json").string());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace careertrace::cli
