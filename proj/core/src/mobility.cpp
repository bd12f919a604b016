#include "careertrace/mobility.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "careertrace/error.hpp"
#include "careertrace/parallel.hpp"

namespace careertrace {

namespace {

std::string_view kind_name(ClassKind kind) {
  switch (kind) {
    case ClassKind::Domestic: return "Domestic";
    case ClassKind::Overseas: return "Overseas";
    case ClassKind::ReturneeResident: return "ReturneeResident";
    case ClassKind::ReturneeAbroad: return "ReturneeAbroad";
  }
  return "?";
}

}  // namespace

std::string format_class(const MobilityClass& cls, const RegionScheme& scheme) {
  std::string out(kind_name(cls.kind));
  out += '(';
  out += scheme.label(cls.first);
  if (cls.kind != ClassKind::Domestic) {
    out += ',';
    out += scheme.label(cls.second);
  }
  out += ')';
  return out;
}

MobilityClass parse_class(std::string_view text, const RegionScheme& scheme) {
  auto fail = [&] { return Error(Errc::MalformedLine, "invalid class '" + std::string(text) + "'"); };
  auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')') throw fail();
  auto name = text.substr(0, open);
  auto args = text.substr(open + 1, text.size() - open - 2);

  std::optional<ClassKind> kind;
  for (auto k : {ClassKind::Domestic, ClassKind::Overseas, ClassKind::ReturneeResident, ClassKind::ReturneeAbroad}) {
    if (kind_name(k) == name) kind = k;
  }
  if (!kind) throw fail();

  auto region = [&](std::string_view label) {
    auto id = scheme.find(label);
    if (!id) throw fail();
    return *id;
  };
  auto comma = args.find(',');
  if (*kind == ClassKind::Domestic) {
    if (comma != std::string_view::npos) throw fail();
    return MobilityClass::domestic(region(args));
  }
  if (comma == std::string_view::npos) throw fail();
  return {*kind, region(args.substr(0, comma)), region(args.substr(comma + 1))};
}

std::vector<MoveEvent> detect_moves(const CareerTimeline& timeline) {
  std::vector<MoveEvent> moves;
  for (std::size_t i = 1; i < timeline.positions.size(); ++i) {
    const auto& prev = timeline.positions[i - 1];
    const auto& cur = timeline.positions[i];
    if (prev.dominant != cur.dominant) moves.push_back({timeline.author, prev.dominant, cur.dominant, cur.year});
  }
  return moves;
}

std::vector<MobilityState> classify(const CareerTimeline& timeline, std::span<const MoveEvent> moves,
                                    RegionId home, const RegionScheme& scheme,
                                    HostAttribution host_attribution) {
  if (home >= scheme.size()) throw Error(Errc::HomeMismatch, "home region id out of range");

  std::vector<MobilityState> states;
  states.reserve(timeline.positions.size());
  const RegionId origin = timeline.origin;
  std::optional<RegionId> first_host, latest_host;
  std::size_t next_move = 0;

  for (const auto& position : timeline.positions) {
    while (next_move < moves.size() && moves[next_move].year <= position.year) {
      const auto& move = moves[next_move++];
      if (move.to == home && move.from != home) {
        if (!first_host) first_host = move.from;
        latest_host = move.from;
      }
    }

    MobilityClass cls;
    if (first_host) {
      const RegionId host = host_attribution == HostAttribution::First ? *first_host : *latest_host;
      cls = position.dominant == home ? MobilityClass::returnee(home, host)
                                      : MobilityClass::returnee_abroad(home, position.dominant);
    } else if (position.dominant == origin) {
      cls = MobilityClass::domestic(origin);
    } else {
      cls = MobilityClass::overseas(origin, position.dominant);
    }

    const int since = !states.empty() && states.back().cls == cls ? states.back().since_year : position.year;
    states.push_back({timeline.author, position.year, cls, since});
  }
  return states;
}

MobilityClass attribution_class(const MobilityClass& state_class) noexcept {
  if (state_class.kind == ClassKind::ReturneeAbroad)
    return MobilityClass::overseas(state_class.first, state_class.second);
  return state_class;
}

MobilityClass class_of_publication(const PublicationRecord& record, AuthorId author,
                                   std::span<const MobilityState> states) {
  auto it = std::lower_bound(states.begin(), states.end(), record.year,
                             [](const MobilityState& s, int y) { return s.year < y; });
  if (it == states.end() || it->year != record.year || it->author != author) {
    throw Error(Errc::NoStateForYear, "no mobility state for author in " + std::to_string(record.year) +
                                          " (record " + record.pub_id + ")");
  }
  return attribution_class(it->cls);
}

std::vector<AuthorMobility> analyze_mobility(std::span<const CareerTimeline> timelines,
                                             const RegionScheme& scheme, const MobilityOptions& options) {
  if (options.home >= scheme.size()) throw Error(Errc::HomeMismatch, "home region id out of range");
  std::vector<AuthorMobility> result(timelines.size());
  parallel_chunks(timelines.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      result[i].moves = detect_moves(timelines[i]);
      result[i].states = classify(timelines[i], result[i].moves, options.home, scheme, options.host_attribution);
    }
  });
  return result;
}

std::vector<OriginCount> returnee_origins(std::span<const AuthorMobility> mobility) {
  std::map<std::pair<RegionId, MobilityClass>, std::int64_t> counts;
  for (const auto& author : mobility) {
    const MobilityClass* latest = nullptr;
    for (const auto& s : author.states) {
      if (s.cls.kind == ClassKind::ReturneeResident) latest = &s.cls;
    }
    if (latest) ++counts[{author.states.front().cls.first, *latest}];
  }
  std::vector<OriginCount> out;
  out.reserve(counts.size());
  for (const auto& [key, n] : counts) out.push_back({key.first, key.second, n});
  return out;
}

}  // namespace careertrace
