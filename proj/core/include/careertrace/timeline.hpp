#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "careertrace/corpus.hpp"
#include "careertrace/region.hpp"

namespace careertrace {

/// How exact ties in a fractional position pick the dominant region.
enum class TieRule {
  Hysteresis,  // keep last year's dominant if tied, else earliest label
  LabelOrder,  // always earliest label
};

struct YearPosition {
  int year = 0;
  std::uint32_t source = 0;  // index of the year's first record in Corpus::records()
  RegionId dominant = 0;
  RegionWeights weights;
};

struct CareerTimeline {
  AuthorId author = 0;
  std::vector<YearPosition> positions;  // strictly increasing years, never empty
  RegionId origin = 0;
  bool origin_ambiguous = false;

  int first_year() const { return positions.front().year; }
  int last_year() const { return positions.back().year; }
  /// Position for `year`, or nullptr when the author did not publish then.
  const YearPosition* at(int year) const noexcept;
};

/// Argmax region. Exact ties go to `previous` when it is among the tied
/// regions (Hysteresis only), otherwise to the lowest region id.
RegionId dominant_region(const RegionWeights& weights, std::optional<RegionId> previous,
                         TieRule rule = TieRule::Hysteresis);

/// True when more than one region shares the maximal weight.
bool has_tied_maximum(const RegionWeights& weights) noexcept;

struct TimelineOptions {
  TieRule tie_rule = TieRule::Hysteresis;
  unsigned threads = 1;
};

/// One timeline per author, indexed by AuthorId. Each active year is located
/// by the author's affiliations on the first record of that year in
/// canonical (year, seq, pub_id) order.
std::vector<CareerTimeline> build_timelines(const Corpus& corpus, const TimelineOptions& options = {});

/// Recomputes dominants and origin flags from stored weights.
void assign_dominants(CareerTimeline& timeline, TieRule rule);

}  // namespace careertrace
