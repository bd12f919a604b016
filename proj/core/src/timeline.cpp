#include "careertrace/timeline.hpp"

#include <algorithm>

#include "careertrace/parallel.hpp"

namespace careertrace {

const YearPosition* CareerTimeline::at(int year) const noexcept {
  auto it = std::lower_bound(positions.begin(), positions.end(), year,
                             [](const YearPosition& p, int y) { return p.year < y; });
  return it != positions.end() && it->year == year ? &*it : nullptr;
}

RegionId dominant_region(const RegionWeights& weights, std::optional<RegionId> previous, TieRule rule) {
  double best = -1.0;
  for (const auto& share : weights) best = std::max(best, share.weight);
  std::optional<RegionId> first_tied;
  for (const auto& share : weights) {
    if (share.weight != best) continue;
    if (rule == TieRule::Hysteresis && previous && share.region == *previous) return share.region;
    if (!first_tied) first_tied = share.region;
  }
  // weights are sorted by region id, so the first maximal entry is the
  // earliest in label order
  return first_tied.value_or(0);
}

bool has_tied_maximum(const RegionWeights& weights) noexcept {
  double best = -1.0;
  int count = 0;
  for (const auto& share : weights) {
    if (share.weight > best) {
      best = share.weight;
      count = 1;
    } else if (share.weight == best) {
      ++count;
    }
  }
  return count > 1;
}

void assign_dominants(CareerTimeline& timeline, TieRule rule) {
  std::optional<RegionId> previous;
  for (auto& position : timeline.positions) {
    position.dominant = dominant_region(position.weights, previous, rule);
    previous = position.dominant;
  }
  if (!timeline.positions.empty()) {
    timeline.origin = timeline.positions.front().dominant;
    timeline.origin_ambiguous = has_tied_maximum(timeline.positions.front().weights);
  }
}

std::vector<CareerTimeline> build_timelines(const Corpus& corpus, const TimelineOptions& options) {
  std::vector<CareerTimeline> timelines(corpus.author_count());
  for (std::size_t i = 0; i < timelines.size(); ++i) timelines[i].author = static_cast<AuthorId>(i);

  const auto& records = corpus.records();
  parallel_chunks(timelines.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = 0; r < records.size(); ++r) {
      const auto& record = records[r];
      for (const auto& authorship : record.authorships) {
        if (authorship.author < begin || authorship.author >= end) continue;
        auto& positions = timelines[authorship.author].positions;
        // canonical order visits each year's earliest record first
        if (!positions.empty() && positions.back().year == record.year) continue;
        positions.push_back({record.year, static_cast<std::uint32_t>(r), 0,
                             regionalize(authorship.countries, corpus.scheme())});
      }
    }
    for (std::size_t a = begin; a < end; ++a) assign_dominants(timelines[a], options.tie_rule);
  });
  return timelines;
}

}  // namespace careertrace
