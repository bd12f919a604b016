#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "careertrace/corpus.hpp"
#include "careertrace/indicators.hpp"
#include "careertrace/mobility.hpp"
#include "careertrace/stocks.hpp"
#include "careertrace/timeline.hpp"
#include "cli/cache.hpp"
#include "cli/config.hpp"
#include "cli/manifest.hpp"

namespace careertrace::cli {

/// Thrown after the corpus diagnostics have been reported.
struct InvalidCorpus {};

/// Reads a whole file; throws Error(Io).
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Lazily runs the pipeline stages for one corpus, reusing cached tables.
class Session {
 public:
  Session(const std::string& corpus_path, const std::string& scheme_path, PipelineConfig config, Cache& cache,
          std::ostream& err);

  const PipelineConfig& config() const noexcept { return config_; }
  const Corpus& corpus() const noexcept { return *corpus_; }
  RegionId home() const noexcept { return home_; }
  int end_year() const;
  YearRange stock_years() const;

  const std::vector<CareerTimeline>& timelines();
  const std::vector<AuthorMobility>& mobility();
  const std::vector<StockCell>& stocks();
  const IndicatorEngine& engine();

  /// Manifest skeleton with hashes, effective config and the stage log.
  Manifest manifest(const std::string& subcommand) const;

 private:
  std::string key(std::string_view stage) const;

  PipelineConfig config_;
  Cache& cache_;
  std::ostream& err_;
  std::string corpus_sha_;
  std::string scheme_sha_;
  std::optional<Corpus> corpus_;
  RegionId home_ = 0;
  std::optional<std::vector<CareerTimeline>> timelines_;
  std::optional<std::vector<AuthorMobility>> mobility_;
  std::optional<std::vector<StockCell>> stocks_;
  std::optional<IndicatorEngine> engine_;
  std::vector<std::pair<std::string, std::string>> stages_;
};

}  // namespace careertrace::cli
