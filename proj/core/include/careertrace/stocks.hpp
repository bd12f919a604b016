#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "careertrace/mobility.hpp"
#include "careertrace/timeline.hpp"

namespace careertrace {

enum class Activity { Active, GapFilled, Retired };

std::string_view to_string(Activity activity) noexcept;

/// Publication-silence status of an author in `year`:
///  - Active: the author has a position that year
///  - GapFilled: between two positions, or at most `grace_years` after the
///    last position up to `dataset_end`
///  - Retired: later than that
/// Positions after `dataset_end` are outside the observation horizon.
/// Throws Error(BeforeCareer) for years before the first position and
/// Error(AfterHorizon) for years past `dataset_end`.
Activity activity_status(const CareerTimeline& timeline, int year, int dataset_end, int grace_years = 2);

/// State in force at `year`: the one of the latest position at or before it.
/// Gap-filled years therefore carry the last known class.
const MobilityState* state_at(std::span<const MobilityState> states, int year) noexcept;

struct StockCell {
  MobilityClass cls;
  int year = 0;
  std::int64_t preceding = 0;     // entered the class before `year`, still counted
  std::int64_t new_movement = 0;  // entered the class in `year`

  std::int64_t total() const noexcept { return preceding + new_movement; }
  friend bool operator==(const StockCell&, const StockCell&) = default;
};

struct YearRange {
  int first = 0;
  int last = -1;
};

struct StockOptions {
  int dataset_end = 0;
  int grace_years = 2;
  bool exclude_ambiguous_origin = false;
  unsigned threads = 1;
};

/// Non-empty (class, year) cells sorted by class then year. Every author
/// that is not Retired counts in exactly one class per year.
std::vector<StockCell> stock_table(std::span<const CareerTimeline> timelines,
                                   std::span<const AuthorMobility> mobility, YearRange years,
                                   const StockOptions& options);

struct ReturnRatio {
  double value = 0.0;
  bool infinite = false;
};

/// Overseas(home, host) total over ReturneeResident(home, host) total at
/// `year`. Infinite when only the denominator is zero; throws
/// Error(UndefinedRatio) when both are.
ReturnRatio return_ratio(std::span<const StockCell> stocks, RegionId home, RegionId host, int year);

}  // namespace careertrace
