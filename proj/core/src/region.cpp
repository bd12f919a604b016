#include "careertrace/region.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "careertrace/error.hpp"

namespace careertrace {

using nlohmann::json;

std::optional<CountryCode> CountryCode::parse(std::string_view text) noexcept {
  if (text.size() != 3) return std::nullopt;
  CountryCode code;
  for (std::size_t i = 0; i < 3; ++i) {
    if (text[i] < 'A' || text[i] > 'Z') return std::nullopt;
    code.chars_[i] = text[i];
  }
  return code;
}

CountryCode::CountryCode(std::string_view text) {
  auto parsed = parse(text);
  if (!parsed) throw Error(Errc::MalformedLine, "invalid country code '" + std::string(text) + "'");
  *this = *parsed;
}

RegionScheme::RegionScheme(std::vector<Region> regions) : regions_(std::move(regions)) {
  std::set<std::string> labels;
  for (const auto& region : regions_) {
    if (region.label.empty()) throw Error(Errc::InvalidScheme, "empty region label");
    if (!labels.insert(region.label).second)
      throw Error(Errc::InvalidScheme, "duplicate region label '" + region.label + "'");
  }
  if (!labels.contains(std::string(kOtherRegion))) regions_.push_back({std::string(kOtherRegion), {}});
  if (regions_.size() > 0xFFFF) throw Error(Errc::InvalidScheme, "too many regions");

  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].label == kOtherRegion) other_ = static_cast<RegionId>(i);
    auto& countries = regions_[i].countries;
    std::sort(countries.begin(), countries.end());
    countries.erase(std::unique(countries.begin(), countries.end()), countries.end());
  }

  constexpr RegionId kUnset = 0xFFFF;
  lookup_.assign(26 * 26 * 26, kUnset);
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    for (const auto& code : regions_[i].countries) {
      auto& slot = lookup_[code.index()];
      if (slot != kUnset) {
        throw Error(Errc::InvalidScheme, "country " + code.str() + " listed in regions '" +
                                             regions_[slot].label + "' and '" + regions_[i].label +
                                             "'");
      }
      slot = static_cast<RegionId>(i);
    }
  }
  std::replace(lookup_.begin(), lookup_.end(), kUnset, other_);
}

RegionScheme RegionScheme::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidScheme, std::string("scheme is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("regions") || !doc["regions"].is_object())
    throw Error(Errc::InvalidScheme, "scheme needs a 'regions' object");

  std::vector<std::string> order;
  if (doc.contains("label_order")) {
    if (!doc["label_order"].is_array()) throw Error(Errc::InvalidScheme, "'label_order' must be an array");
    for (const auto& label : doc["label_order"]) {
      if (!label.is_string()) throw Error(Errc::InvalidScheme, "'label_order' entries must be strings");
      order.push_back(label.get<std::string>());
    }
  } else {
    throw Error(Errc::InvalidScheme, "scheme needs a 'label_order' array");
  }

  const auto& regions = doc["regions"];
  std::set<std::string> seen;
  for (const auto& label : order) {
    if (!seen.insert(label).second) throw Error(Errc::InvalidScheme, "label '" + label + "' repeated in label_order");
    if (!regions.contains(label) && label != kOtherRegion)
      throw Error(Errc::InvalidScheme, "label_order names unknown region '" + label + "'");
  }
  for (const auto& [label, _] : regions.items()) {
    if (!seen.contains(label)) throw Error(Errc::InvalidScheme, "region '" + label + "' missing from label_order");
  }

  std::vector<Region> parsed;
  for (const auto& label : order) {
    Region region{label, {}};
    if (regions.contains(label)) {
      const auto& list = regions[label];
      if (!list.is_array()) throw Error(Errc::InvalidScheme, "region '" + label + "' must map to an array");
      for (const auto& code : list) {
        auto cc = code.is_string() ? CountryCode::parse(code.get<std::string>()) : std::nullopt;
        if (!cc) throw Error(Errc::InvalidScheme, "region '" + label + "' has an invalid country code");
        region.countries.push_back(*cc);
      }
    }
    parsed.push_back(std::move(region));
  }
  return RegionScheme(std::move(parsed));
}

RegionScheme RegionScheme::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open scheme file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::optional<RegionId> RegionScheme::find(std::string_view label) const noexcept {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].label == label) return static_cast<RegionId>(i);
  }
  return std::nullopt;
}

RegionId RegionScheme::require(std::string_view label) const {
  auto id = find(label);
  if (!id) throw Error(Errc::HomeMismatch, "region '" + std::string(label) + "' is not in the scheme");
  return *id;
}

std::string RegionScheme::to_json() const {
  json doc;
  doc["regions"] = json::object();
  doc["label_order"] = json::array();
  for (const auto& region : regions_) {
    json codes = json::array();
    for (const auto& code : region.countries) codes.push_back(code.str());
    doc["regions"][region.label] = std::move(codes);
    doc["label_order"].push_back(region.label);
  }
  return doc.dump();
}

RegionWeights regionalize(std::span<const CountryCode> countries, const RegionScheme& scheme) {
  RegionWeights weights;
  if (countries.empty()) return weights;
  std::vector<std::uint32_t> counts(scheme.size(), 0);
  for (const auto& code : countries) ++counts[scheme.region_of(code)];
  const double n = static_cast<double>(countries.size());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (counts[r] == 0) continue;
    weights.push_back({static_cast<RegionId>(r), counts[r] == countries.size() ? 1.0 : counts[r] / n});
  }
  return weights;
}

double weight_of(const RegionWeights& weights, RegionId region) noexcept {
  for (const auto& share : weights) {
    if (share.region == region) return share.weight;
  }
  return 0.0;
}

}  // namespace careertrace
