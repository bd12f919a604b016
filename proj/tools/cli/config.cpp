#include "cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "careertrace/error.hpp"

namespace careertrace::cli {

using nlohmann::json;

TieRule parse_tie_rule(std::string_view text) {
  if (text == "hysteresis") return TieRule::Hysteresis;
  if (text == "label_order") return TieRule::LabelOrder;
  throw Error(Errc::InvalidConfig, "tie_rule must be hysteresis or label_order, got '" + std::string(text) + "'");
}

HostAttribution parse_host_attribution(std::string_view text) {
  if (text == "latest") return HostAttribution::Latest;
  if (text == "first") return HostAttribution::First;
  throw Error(Errc::InvalidConfig, "host_attribution must be first or latest, got '" + std::string(text) + "'");
}

std::string_view to_string(TieRule rule) noexcept {
  return rule == TieRule::Hysteresis ? "hysteresis" : "label_order";
}

std::string_view to_string(HostAttribution attribution) noexcept {
  return attribution == HostAttribution::Latest ? "latest" : "first";
}

std::vector<std::string> parse_metrics(std::string_view text) {
  std::vector<std::string> metrics;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string name(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (name.empty()) continue;
    if (std::find(std::begin(kMetricNames), std::end(kMetricNames), name) == std::end(kMetricNames))
      throw Error(Errc::InvalidConfig, "unknown metric family '" + name + "'");
    if (std::find(metrics.begin(), metrics.end(), name) == metrics.end()) metrics.push_back(name);
  }
  if (metrics.empty()) throw Error(Errc::InvalidConfig, "no metric families selected");
  return metrics;
}

void apply_config_json(PipelineConfig& config, std::string_view text) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(Errc::InvalidConfig, "config is not a JSON object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "home") config.home = value.get<std::string>();
      else if (key == "end_year") config.end_year = value.get<int>();
      else if (key == "grace_years") config.grace_years = value.get<int>();
      else if (key == "tie_rule") config.tie_rule = parse_tie_rule(value.get<std::string>());
      else if (key == "host_attribution") config.host_attribution = parse_host_attribution(value.get<std::string>());
      else if (key == "intl_requires_distinct_authors") config.intl_requires_distinct_authors = value.get<bool>();
      else if (key == "exclude_ambiguous_origin") config.exclude_ambiguous_origin = value.get<bool>();
      else if (key == "year_min") config.window.min = value.get<int>();
      else if (key == "year_max") config.window.max = value.get<int>();
      else if (key == "threads") config.threads = value.get<unsigned>();
      else if (key == "metrics") {
        std::string joined;
        for (const auto& m : value) joined += m.get<std::string>() + ",";
        config.metrics = parse_metrics(joined);
      } else {
        throw Error(Errc::InvalidConfig, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, std::string("bad config value: ") + e.what());
  }
  if (config.grace_years < 0) throw Error(Errc::InvalidConfig, "grace_years must be non-negative");
}

void apply_config_file(PipelineConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidConfig, "cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_json(config, text.str());
}

nlohmann::ordered_json to_json(const PipelineConfig& config) {
  nlohmann::ordered_json out;
  out["home"] = config.home;
  out["end_year"] = config.end_year ? json(*config.end_year) : json(nullptr);
  out["grace_years"] = config.grace_years;
  out["tie_rule"] = to_string(config.tie_rule);
  out["host_attribution"] = to_string(config.host_attribution);
  out["intl_requires_distinct_authors"] = config.intl_requires_distinct_authors;
  out["exclude_ambiguous_origin"] = config.exclude_ambiguous_origin;
  out["metrics"] = config.metrics;
  out["year_min"] = config.window.min;
  out["year_max"] = config.window.max;
  return out;
}

}  // namespace careertrace::cli
