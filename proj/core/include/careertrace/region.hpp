#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace careertrace {

/// Three-letter uppercase country identifier (ISO-3166-1 alpha-3 shape).
class CountryCode {
 public:
  /// Returns nullopt unless `text` is exactly three characters in A-Z.
  static std::optional<CountryCode> parse(std::string_view text) noexcept;

  /// Throws Error(MalformedLine) on an invalid code.
  explicit CountryCode(std::string_view text);

  std::string_view view() const noexcept { return {chars_.data(), chars_.size()}; }
  std::string str() const { return std::string(view()); }

  /// Dense index in [0, 26^3), used for table lookups.
  std::uint32_t index() const noexcept {
    return static_cast<std::uint32_t>((chars_[0] - 'A') * 676 + (chars_[1] - 'A') * 26 +
                                      (chars_[2] - 'A'));
  }

  friend auto operator<=>(const CountryCode&, const CountryCode&) = default;

 private:
  CountryCode() = default;
  std::array<char, 3> chars_{};
};

/// Position of a region in its scheme's label order. Lower ids win ties.
using RegionId = std::uint16_t;

inline constexpr std::string_view kOtherRegion = "OTHER";

/// Maps countries onto reporting regions. Region ids follow label order, so
/// comparing ids compares label-order rank.
class RegionScheme {
 public:
  struct Region {
    std::string label;
    std::vector<CountryCode> countries;
  };

  /// `regions` must be listed in label order. An OTHER region is appended
  /// when absent; every unmapped country falls into it.
  explicit RegionScheme(std::vector<Region> regions);

  /// Parses the scheme file format:
  ///   {"regions": {"CHN": ["CHN"], ...}, "label_order": ["CHN", ...]}
  static RegionScheme from_json(std::string_view text);
  static RegionScheme load(const std::filesystem::path& path);

  std::size_t size() const noexcept { return regions_.size(); }
  std::string_view label(RegionId id) const { return regions_.at(id).label; }
  std::optional<RegionId> find(std::string_view label) const noexcept;
  /// Like find() but throws Error(HomeMismatch) for unknown labels.
  RegionId require(std::string_view label) const;
  RegionId region_of(CountryCode code) const noexcept { return lookup_[code.index()]; }
  RegionId other() const noexcept { return other_; }
  std::span<const CountryCode> countries(RegionId id) const { return regions_.at(id).countries; }
  const std::vector<Region>& regions() const noexcept { return regions_; }

  /// Canonical serialization (label order, sorted country lists).
  std::string to_json() const;

 private:
  std::vector<Region> regions_;
  std::vector<RegionId> lookup_;
  RegionId other_ = 0;
};

struct RegionShare {
  RegionId region;
  double weight;

  friend bool operator==(const RegionShare&, const RegionShare&) = default;
};

/// Fractional location: strictly positive weights sorted by region id.
using RegionWeights = std::vector<RegionShare>;

/// Splits one unit equally over the listed affiliations (duplicates count
/// separately) and groups the parts by region.
RegionWeights regionalize(std::span<const CountryCode> countries, const RegionScheme& scheme);

double weight_of(const RegionWeights& weights, RegionId region) noexcept;

}  // namespace careertrace
