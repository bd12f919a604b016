#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "careertrace/corpus.hpp"
#include "careertrace/region.hpp"
#include "careertrace/timeline.hpp"

namespace careertrace {

enum class ClassKind : std::uint8_t {
  Domestic,          // (origin, origin)
  Overseas,          // (origin, current host)
  ReturneeResident,  // (home, attributed former host)
  ReturneeAbroad,    // (home, current host)
};

struct MobilityClass {
  ClassKind kind = ClassKind::Domestic;
  RegionId first = 0;
  RegionId second = 0;

  static MobilityClass domestic(RegionId origin) { return {ClassKind::Domestic, origin, origin}; }
  static MobilityClass overseas(RegionId origin, RegionId host) { return {ClassKind::Overseas, origin, host}; }
  static MobilityClass returnee(RegionId home, RegionId host) { return {ClassKind::ReturneeResident, home, host}; }
  static MobilityClass returnee_abroad(RegionId home, RegionId host) { return {ClassKind::ReturneeAbroad, home, host}; }

  /// Region where publications of this class are located.
  RegionId location() const noexcept { return kind == ClassKind::ReturneeResident ? first : second; }

  friend auto operator<=>(const MobilityClass&, const MobilityClass&) = default;
};

/// "Domestic(CHN)", "Overseas(CHN,USA)", "ReturneeResident(CHN,USA)", ...
std::string format_class(const MobilityClass& cls, const RegionScheme& scheme);
/// Inverse of format_class; throws Error(MalformedLine).
MobilityClass parse_class(std::string_view text, const RegionScheme& scheme);

struct MoveEvent {
  AuthorId author = 0;
  RegionId from = 0;
  RegionId to = 0;
  int year = 0;  // year of the first publication at the destination

  friend bool operator==(const MoveEvent&, const MoveEvent&) = default;
};

struct MobilityState {
  AuthorId author = 0;
  int year = 0;
  MobilityClass cls;
  int since_year = 0;

  friend bool operator==(const MobilityState&, const MobilityState&) = default;
};

/// Which inbound move names the former host of a returnee. The attribution
/// window always opens at the first inbound move.
enum class HostAttribution { First, Latest };

/// One event per change of dominant region between consecutive positions.
/// Only adjacent transitions are registered (A->B->C never yields A->C).
std::vector<MoveEvent> detect_moves(const CareerTimeline& timeline);

/// One state per position year.
///  - before leaving the origin: Domestic(origin)
///  - abroad, never having moved into `home`: Overseas(origin, host)
///  - from the first move into `home` onward: ReturneeResident(home, host)
///    while located in home, ReturneeAbroad(home, current) elsewhere
/// Throws Error(HomeMismatch) if `home` is not a region of `scheme`.
std::vector<MobilityState> classify(const CareerTimeline& timeline, std::span<const MoveEvent> moves,
                                    RegionId home, const RegionScheme& scheme,
                                    HostAttribution host_attribution = HostAttribution::Latest);

/// Class under which a publication's output is counted. Years spent abroad
/// after returning count as Overseas(home, current host), never as returnee
/// output.
MobilityClass attribution_class(const MobilityClass& state_class) noexcept;

/// Attribution class of `author` for a record of that author; throws
/// Error(NoStateForYear) if `states` has no entry for the record year.
MobilityClass class_of_publication(const PublicationRecord& record, AuthorId author,
                                   std::span<const MobilityState> states);

struct AuthorMobility {
  std::vector<MoveEvent> moves;
  std::vector<MobilityState> states;
};

struct MobilityOptions {
  RegionId home = 0;
  HostAttribution host_attribution = HostAttribution::Latest;
  unsigned threads = 1;
};

/// detect_moves + classify for every timeline; result indexed like `timelines`.
std::vector<AuthorMobility> analyze_mobility(std::span<const CareerTimeline> timelines,
                                             const RegionScheme& scheme, const MobilityOptions& options);

struct OriginCount {
  RegionId origin = 0;
  MobilityClass cls;
  std::int64_t authors = 0;

  friend bool operator==(const OriginCount&, const OriginCount&) = default;
};

/// Returnee authors by origin region (the region of their first state),
/// each counted once under the ReturneeResident class of their latest
/// returnee year. Sorted by origin, then class.
std::vector<OriginCount> returnee_origins(std::span<const AuthorMobility> mobility);

}  // namespace careertrace
