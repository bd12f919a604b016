#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "careertrace/corpus.hpp"
#include "careertrace/mobility.hpp"

namespace careertrace {

struct FieldModel {
  std::string code;
  double weight = 1.0;
  double citation_mean = 10.0;
  double citation_dispersion = 1.0;  // gamma shape of the Poisson rate; <= 0 means plain Poisson
};

/// Parameters of the latent career process. Region-keyed maps use the
/// scheme's labels.
struct ScenarioConfig {
  std::uint64_t seed = 1;
  std::size_t n_authors = 1000;
  int year_min = 2000;
  int year_max = 2019;
  std::optional<RegionScheme> scheme;
  std::string home = "CHN";

  std::map<std::string, double> origin_weights;
  double pub_probability = 0.8;   // chance of leading a record in an active year
  double exit_hazard = 0.03;      // yearly chance the career ends
  std::map<std::string, std::map<std::string, double>> move_hazard;  // from -> to -> yearly probability
  double return_hazard = 0.1;     // yearly chance of moving back to the origin while abroad
  double multi_affiliation_probability = 0.0;

  std::vector<FieldModel> fields;
  double second_field_probability = 0.0;
  std::map<std::string, double> doc_types{{"ar", 1.0}};
  std::vector<double> team_size_weights{1.0};  // weight of team sizes 1, 2, ...
  double same_region_preference = 0.7;
  double returnee_host_boost = 3.0;  // coauthor-region weight multiplier toward a returnee's former host
};

/// Throws Error(InvalidConfig) listing every offending field.
void validate(const ScenarioConfig& config);

/// JSON config. `scheme_file` is resolved against `base_dir`; an inline
/// `scheme` object is also accepted.
ScenarioConfig parse_scenario_config(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

struct TrueMove {
  RegionId from = 0;
  RegionId to = 0;
  int year = 0;

  friend bool operator==(const TrueMove&, const TrueMove&) = default;
};

struct TruthAuthor {
  std::string id;
  RegionId origin = 0;
  int start_year = 0;
  std::optional<int> retirement_year;  // last active year, if the career ended inside the window
  std::vector<TrueMove> moves;
  std::vector<std::pair<int, MobilityClass>> classes;  // one per active year
};

struct GroundTruth {
  RegionId home = 0;
  std::vector<TruthAuthor> authors;  // sorted by id
};

struct SynthResult {
  Corpus corpus;
  GroundTruth truth;
};

/// Deterministic for a fixed config (including seed).
SynthResult generate(const ScenarioConfig& config);

/// One JSON object per author.
void write_truth(std::ostream& out, const GroundTruth& truth, const RegionScheme& scheme);

struct NoiseConfig {
  double gap_probability = 0.0;                // chance of dropping an author-year
  double dual_affiliation_probability = 0.0;   // chance of adding the author's guest affiliation
  std::uint64_t seed = 0;
};

/// Removes author-years and injects a persistent per-author guest
/// affiliation (from a region other than the author's origin). Records left
/// without authors are dropped. Zero noise returns an identical corpus.
Corpus degrade(const Corpus& corpus, const GroundTruth& truth, const NoiseConfig& noise);

}  // namespace careertrace
