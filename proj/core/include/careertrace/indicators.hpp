#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "careertrace/corpus.hpp"
#include "careertrace/mobility.hpp"

namespace careertrace {

// ---------------------------------------------------------------------------
// Citation impact

struct CohortKey {
  FieldId field = 0;
  int year = 0;
  DocTypeId doc_type = 0;

  friend auto operator<=>(const CohortKey&, const CohortKey&) = default;
};

struct CohortStats {
  std::int64_t citation_sum = 0;
  std::int64_t size = 0;

  double expected() const noexcept { return static_cast<double>(citation_sum) / static_cast<double>(size); }
};

/// Expected citations per (field, year, doc_type) cohort. Records with
/// several fields join every one of their field cohorts.
class CitationBaselines {
 public:
  void add(const CohortKey& key, std::int64_t citations);
  const CohortStats* find(const CohortKey& key) const noexcept;
  const std::map<CohortKey, CohortStats>& cohorts() const noexcept { return cohorts_; }

 private:
  std::map<CohortKey, CohortStats> cohorts_;
};

CitationBaselines citation_baselines(const Corpus& corpus);

struct FwciValue {
  double value = 0.0;          // +inf when zero_baseline
  bool zero_baseline = false;  // cited record whose cohorts expect zero citations
};

/// citations / arithmetic mean of the record's field-cohort expectations.
/// The quotient is formed from the reduced exact fraction, so scaling every
/// citation count by a constant leaves it bit-identical.
/// Throws Error(MissingCohort) if a field cohort is absent from `baselines`.
FwciValue fwci(const PublicationRecord& record, const CitationBaselines& baselines);

struct PubScore {
  double fwci = 0.0;
  bool zero_baseline = false;
  bool top10_fwci = false;
  bool top10_cits = false;
};

/// Nearest-rank 90th percentile of an ascending sequence (rank ceil(0.9 n)).
template <class T>
const T& nearest_rank_p90(std::span<const T> sorted) {
  const std::size_t rank = (9 * sorted.size() + 9) / 10;
  return sorted[rank - 1];
}

/// Scores indexed like Corpus::records(). A record is top-10% when its
/// value strictly exceeds the nearest-rank 90th percentile of its
/// publication-year cohort: FWCI pooled over fields (zero-baseline records
/// are left out of the ranking) and raw citations.
std::vector<PubScore> top10_flags(const Corpus& corpus, const CitationBaselines& baselines);

// ---------------------------------------------------------------------------
// Collaboration

using RegionPair = std::pair<RegionId, RegionId>;  // first <= second

inline RegionPair make_region_pair(RegionId a, RegionId b) noexcept { return a <= b ? RegionPair{a, b} : RegionPair{b, a}; }

struct IntlCopub {
  bool international = false;
  std::vector<RegionPair> region_pairs;  // sorted, unique
};

/// International iff the record's affiliation countries include at least
/// two distinct countries. With `require_distinct_authors`, the two
/// countries must come from different authorships.
IntlCopub intl_copub(const PublicationRecord& record, const RegionScheme& scheme,
                     bool require_distinct_authors = false);

// ---------------------------------------------------------------------------
// Populations and shares

enum class Counting { Full, Fractional };
enum class Selection { All, Top10Fwci, Top10Cits };

std::string_view to_string(Counting counting) noexcept;

/// Matches attribution classes; unset regions are wildcards.
struct ClassFilter {
  ClassKind kind = ClassKind::Domestic;
  std::optional<RegionId> first;
  std::optional<RegionId> second;

  static ClassFilter exact(const MobilityClass& cls) { return {cls.kind, cls.first, cls.second}; }
  bool matches(const MobilityClass& cls) const noexcept {
    return cls.kind == kind && (!first || *first == cls.first) && (!second || *second == cls.second);
  }
  friend auto operator<=>(const ClassFilter&, const ClassFilter&) = default;
};

/// A weighted selection of authorships. An authorship qualifies with the
/// fraction of its affiliations located in `regions` (all of them when
/// empty, or in its class's own location when `at_class_location`), and
/// only if its attribution class matches `cls`. Record-level filters
/// restrict to international records or records linking `region_pair`.
struct Population {
  std::vector<RegionId> regions;
  bool at_class_location = false;
  std::optional<ClassFilter> cls;
  bool international_only = false;
  std::optional<RegionPair> region_pair;

  friend auto operator<=>(const Population&, const Population&) = default;
};

struct Measure {
  double full = 0.0;  // records with at least one qualifying authorship
  double frac = 0.0;  // sum over records of qualifying fraction / authorship count

  double get(Counting counting) const noexcept { return counting == Counting::Full ? full : frac; }
};

struct IndicatorOptions {
  RegionId home = 0;
  bool intl_requires_distinct_authors = false;
  unsigned threads = 1;
};

/// Precomputed scores, collaboration flags and per-authorship attribution
/// classes over one corpus; answers population queries.
class IndicatorEngine {
 public:
  IndicatorEngine(const Corpus& corpus, std::span<const AuthorMobility> mobility, const IndicatorOptions& options);

  const Corpus& corpus() const noexcept { return corpus_; }
  const IndicatorOptions& options() const noexcept { return options_; }
  const CitationBaselines& baselines() const noexcept { return baselines_; }
  const std::vector<PubScore>& scores() const noexcept { return scores_; }
  const std::vector<IntlCopub>& collaboration() const noexcept { return intl_; }
  /// Attribution class of authorship `index` of record `record`.
  const MobilityClass& authorship_class(std::size_t record, std::size_t index) const {
    return classes_[offsets_[record] + index];
  }
  /// Attribution classes occurring in the corpus, sorted.
  std::vector<MobilityClass> classes() const;

  /// `year` nullopt means every year.
  Measure measure(const Population& population, std::optional<int> year, Selection selection = Selection::All) const;
  /// One pass over the records for several populations; result[i][s] is
  /// population i under Selection s.
  std::vector<std::array<Measure, 3>> measure_many(std::span<const Population> populations,
                                                   std::optional<int> year) const;

  /// population ÷ reference; throws Error(EmptyReference) on a zero reference.
  double output_share(const Population& population, const Population& reference, std::optional<int> year,
                      Counting counting) const;
  /// Share of the population's output that is top-10%.
  double pp10(const Population& population, std::optional<int> year, Counting counting, Selection top10) const;
  /// Home-located weight of `cls` on international records over all
  /// home-located international weight.
  double class_intl_share(const ClassFilter& cls, std::optional<int> year, Counting counting) const;
  /// Home-located weight of `cls` on records linking home and `partner`
  /// over all home-located weight on those records.
  double copub_direction(const ClassFilter& cls, RegionId partner, std::optional<int> year,
                         Counting counting = Counting::Fractional) const;

 private:
  const Corpus& corpus_;
  IndicatorOptions options_;
  CitationBaselines baselines_;
  std::vector<PubScore> scores_;
  std::vector<IntlCopub> intl_;
  std::vector<std::size_t> offsets_;
  std::vector<MobilityClass> classes_;
};

/// Fraction of an authorship's affiliations located in `region`.
double location_fraction(const Authorship& authorship, RegionId region, const RegionScheme& scheme) noexcept;

// ---------------------------------------------------------------------------
// Report tables

/// One indicator value together with its definition:
///   value = measure(numerator, year, selection) / measure(denominator, year)
/// under `counting` (no denominator: the raw measure).
struct IndicatorRow {
  std::string family;
  std::string population;
  std::optional<int> year;  // nullopt: all years pooled
  std::string metric;
  Counting counting = Counting::Full;
  double value = 0.0;

  Population numerator;
  Selection selection = Selection::All;
  std::optional<Population> denominator;
};

inline constexpr std::string_view kIndicatorFamilies[] = {"pp10", "shares", "direction", "copub"};

/// Rows of the requested families, in a stable order. Ratios whose
/// denominator is zero are omitted.
std::vector<IndicatorRow> indicator_table(const IndicatorEngine& engine, std::span<const std::string> families);

}  // namespace careertrace
