#include "careertrace/stocks.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "careertrace/error.hpp"
#include "careertrace/parallel.hpp"

namespace careertrace {

std::string_view to_string(Activity activity) noexcept {
  switch (activity) {
    case Activity::Active: return "Active";
    case Activity::GapFilled: return "GapFilled";
    case Activity::Retired: return "Retired";
  }
  return "?";
}

Activity activity_status(const CareerTimeline& timeline, int year, int dataset_end, int grace_years) {
  if (timeline.positions.empty() || year < timeline.first_year())
    throw Error(Errc::BeforeCareer, "year " + std::to_string(year) + " precedes the first publication");
  if (year > dataset_end)
    throw Error(Errc::AfterHorizon, "year " + std::to_string(year) + " is after the dataset end " +
                                        std::to_string(dataset_end));
  if (timeline.at(year)) return Activity::Active;

  auto last = std::upper_bound(timeline.positions.begin(), timeline.positions.end(), dataset_end,
                               [](int y, const YearPosition& p) { return y < p.year; });
  const int last_year = std::prev(last)->year;
  if (year < last_year) return Activity::GapFilled;
  if (year <= last_year + grace_years) return Activity::GapFilled;
  return Activity::Retired;
}

const MobilityState* state_at(std::span<const MobilityState> states, int year) noexcept {
  auto it = std::upper_bound(states.begin(), states.end(), year,
                             [](int y, const MobilityState& s) { return y < s.year; });
  return it == states.begin() ? nullptr : &*std::prev(it);
}

std::vector<StockCell> stock_table(std::span<const CareerTimeline> timelines,
                                   std::span<const AuthorMobility> mobility, YearRange years,
                                   const StockOptions& options) {
  using Key = std::pair<MobilityClass, int>;
  using Counts = std::map<Key, std::pair<std::int64_t, std::int64_t>>;

  const unsigned threads = resolve_threads(options.threads);
  std::vector<Counts> partial(threads);
  const std::size_t step = (timelines.size() + threads - 1) / std::max(1u, threads);
  parallel_chunks(threads, threads, [&](std::size_t tb, std::size_t te) {
    for (std::size_t t = tb; t < te; ++t) {
      const std::size_t begin = std::min(timelines.size(), t * step);
      const std::size_t end = std::min(timelines.size(), begin + step);
      for (std::size_t a = begin; a < end; ++a) {
        const auto& timeline = timelines[a];
        if (timeline.positions.empty()) continue;
        if (options.exclude_ambiguous_origin && timeline.origin_ambiguous) continue;
        const auto& states = mobility[a].states;
        const int from = std::max(years.first, timeline.first_year());
        const int to = std::min(years.last, options.dataset_end);
        for (int year = from; year <= to; ++year) {
          if (activity_status(timeline, year, options.dataset_end, options.grace_years) == Activity::Retired)
            break;
          const MobilityState* state = state_at(states, year);
          auto& cell = partial[t][{state->cls, year}];
          if (state->since_year == year) {
            ++cell.second;
          } else {
            ++cell.first;
          }
        }
      }
    }
  });

  Counts merged;
  for (const auto& counts : partial) {
    for (const auto& [key, value] : counts) {
      auto& cell = merged[key];
      cell.first += value.first;
      cell.second += value.second;
    }
  }
  std::vector<StockCell> cells;
  cells.reserve(merged.size());
  for (const auto& [key, value] : merged) cells.push_back({key.first, key.second, value.first, value.second});
  return cells;
}

ReturnRatio return_ratio(std::span<const StockCell> stocks, RegionId home, RegionId host, int year) {
  std::int64_t overseas = 0;
  std::int64_t returnees = 0;
  for (const auto& cell : stocks) {
    if (cell.year != year) continue;
    if (cell.cls == MobilityClass::overseas(home, host)) overseas += cell.total();
    if (cell.cls == MobilityClass::returnee(home, host)) returnees += cell.total();
  }
  if (overseas == 0 && returnees == 0)
    throw Error(Errc::UndefinedRatio, "no overseas or returnee stock in " + std::to_string(year));
  if (returnees == 0) return {std::numeric_limits<double>::infinity(), true};
  return {static_cast<double>(overseas) / static_cast<double>(returnees), false};
}

}  // namespace careertrace
