#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "careertrace/corpus.hpp"
#include "careertrace/mobility.hpp"
#include "careertrace/timeline.hpp"

namespace careertrace::cli {

/// Effective settings of a pipeline run. Sources, lowest precedence first:
/// built-in defaults, the --config file, command-line flags.
struct PipelineConfig {
  std::string home = "CHN";
  std::optional<int> end_year;  // default: latest record year
  int grace_years = 2;
  TieRule tie_rule = TieRule::Hysteresis;
  HostAttribution host_attribution = HostAttribution::Latest;
  bool intl_requires_distinct_authors = false;
  bool exclude_ambiguous_origin = false;
  std::vector<std::string> metrics{"pp10", "shares", "direction", "copub"};
  YearWindow window;
  unsigned threads = 0;  // 0: hardware concurrency
};

inline constexpr std::string_view kMetricNames[] = {"pp10", "shares", "direction", "copub", "stocks"};

TieRule parse_tie_rule(std::string_view text);
HostAttribution parse_host_attribution(std::string_view text);
std::string_view to_string(TieRule rule) noexcept;
std::string_view to_string(HostAttribution attribution) noexcept;
/// Comma-separated metric families, validated and deduplicated in input order.
std::vector<std::string> parse_metrics(std::string_view text);

/// Applies the keys of a JSON config object; unknown keys and bad values
/// throw Error(InvalidConfig).
void apply_config_json(PipelineConfig& config, std::string_view text);
void apply_config_file(PipelineConfig& config, const std::string& path);

nlohmann::ordered_json to_json(const PipelineConfig& config);

}  // namespace careertrace::cli
