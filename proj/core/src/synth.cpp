#include "careertrace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "careertrace/error.hpp"

namespace careertrace {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t pick_weighted(const std::vector<double>& weights, Rng& rng) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = uniform(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // rounding at the top end: last positive weight
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return i;
  }
  return 0;
}

std::string padded(char prefix, std::size_t value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

struct Stint {
  int year;
  RegionId region;
  CountryCode country;
};

struct Career {
  RegionId origin = 0;
  int start = 0;
  std::optional<int> retired;
  std::vector<Stint> years;  // one per active year
  std::vector<MobilityClass> classes;
};

/// Class sequence of a fully observed location history.
std::vector<MobilityClass> true_classes(const std::vector<Stint>& years, RegionId origin, RegionId home) {
  std::vector<MobilityClass> classes;
  std::optional<RegionId> latest_host;
  for (std::size_t i = 0; i < years.size(); ++i) {
    const RegionId loc = years[i].region;
    if (i > 0 && loc == home && years[i - 1].region != home) latest_host = years[i - 1].region;
    if (latest_host) {
      classes.push_back(loc == home ? MobilityClass::returnee(home, *latest_host)
                                    : MobilityClass::returnee_abroad(home, loc));
    } else {
      classes.push_back(loc == origin ? MobilityClass::domestic(origin) : MobilityClass::overseas(origin, loc));
    }
  }
  return classes;
}

std::int64_t draw_citations(const FieldModel& model, Rng& rng) {
  if (model.citation_mean <= 0.0) return 0;
  double rate = model.citation_mean;
  if (model.citation_dispersion > 0.0) {
    std::gamma_distribution<double> gamma(model.citation_dispersion, model.citation_mean / model.citation_dispersion);
    rate = gamma(rng);
  }
  if (rate <= 0.0) return 0;
  return std::poisson_distribution<std::int64_t>(rate)(rng);
}

}  // namespace

void validate(const ScenarioConfig& config) {
  std::vector<std::string> problems;
  auto check_probability = [&](std::string_view name, double value) {
    if (!(value >= 0.0 && value <= 1.0)) problems.push_back(std::string(name) + " must lie in [0, 1]");
  };
  if (!config.scheme) {
    problems.push_back("scheme: missing");
  }
  if (config.year_min > config.year_max) problems.push_back("year_range: year_min exceeds year_max");
  check_probability("pub_probability", config.pub_probability);
  check_probability("exit_hazard", config.exit_hazard);
  check_probability("return_hazard", config.return_hazard);
  check_probability("multi_affiliation_probability", config.multi_affiliation_probability);
  check_probability("second_field_probability", config.second_field_probability);
  check_probability("same_region_preference", config.same_region_preference);
  if (!(config.returnee_host_boost >= 0.0)) problems.push_back("returnee_host_boost must be non-negative");

  auto check_weights = [&](std::string_view name, auto begin, auto end, auto value_of) {
    double total = 0.0;
    for (auto it = begin; it != end; ++it) {
      const double w = value_of(*it);
      if (!(w >= 0.0)) problems.push_back(std::string(name) + ": negative weight");
      total += w;
    }
    if (!(total > 0.0)) problems.push_back(std::string(name) + ": weights must have a positive sum");
  };
  if (config.n_authors > 0) {
    check_weights("origin_weights", config.origin_weights.begin(), config.origin_weights.end(),
                  [](const auto& kv) { return kv.second; });
    check_weights("fields", config.fields.begin(), config.fields.end(), [](const FieldModel& f) { return f.weight; });
    check_weights("doc_types", config.doc_types.begin(), config.doc_types.end(),
                  [](const auto& kv) { return kv.second; });
    check_weights("team_size_weights", config.team_size_weights.begin(), config.team_size_weights.end(),
                  [](double w) { return w; });
  }
  std::set<std::string> field_codes;
  for (const auto& field : config.fields) {
    if (field.code.empty()) problems.push_back("fields: empty code");
    if (!field_codes.insert(field.code).second) problems.push_back("fields: duplicate code '" + field.code + "'");
    if (!(field.citation_mean >= 0.0)) problems.push_back("fields." + field.code + ": citation_mean must be >= 0");
  }
  if (config.second_field_probability > 0.0 && config.fields.size() < 2)
    problems.push_back("second_field_probability: needs at least two fields");

  if (config.scheme) {
    const auto& scheme = *config.scheme;
    if (!scheme.find(config.home)) problems.push_back("home: '" + config.home + "' is not a scheme region");
    auto region_ok = [&](std::string_view where, const std::string& label) {
      auto id = scheme.find(label);
      if (!id) {
        problems.push_back(std::string(where) + ": unknown region '" + label + "'");
      } else if (scheme.countries(*id).empty()) {
        problems.push_back(std::string(where) + ": region '" + label + "' lists no countries to sample");
      }
    };
    for (const auto& [label, w] : config.origin_weights) {
      if (w > 0.0) region_ok("origin_weights", label);
    }
    for (const auto& [from, row] : config.move_hazard) {
      region_ok("move_hazard", from);
      double total = 0.0;
      for (const auto& [to, p] : row) {
        region_ok("move_hazard." + from, to);
        if (to == from) problems.push_back("move_hazard." + from + ": self-move listed");
        if (!(p >= 0.0)) problems.push_back("move_hazard." + from + "." + to + ": negative probability");
        total += p;
      }
      if (total > 1.0 + 1e-12)
        problems.push_back("move_hazard." + from + ": leaving probabilities sum to more than 1");
    }
  }

  if (!problems.empty()) {
    std::string message;
    for (const auto& p : problems) message += (message.empty() ? "" : "; ") + p;
    throw Error(Errc::InvalidConfig, message);
  }
}

ScenarioConfig parse_scenario_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(Errc::InvalidConfig, "config is not a JSON object");

  ScenarioConfig config;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "n_authors") config.n_authors = value.get<std::size_t>();
      else if (key == "year_min") config.year_min = value.get<int>();
      else if (key == "year_max") config.year_max = value.get<int>();
      else if (key == "home") config.home = value.get<std::string>();
      else if (key == "scheme") config.scheme = RegionScheme::from_json(value.dump());
      else if (key == "scheme_file") config.scheme = RegionScheme::load(base_dir / value.get<std::string>());
      else if (key == "origin_weights") config.origin_weights = value.get<std::map<std::string, double>>();
      else if (key == "pub_probability") config.pub_probability = value.get<double>();
      else if (key == "exit_hazard") config.exit_hazard = value.get<double>();
      else if (key == "move_hazard") config.move_hazard = value.get<std::map<std::string, std::map<std::string, double>>>();
      else if (key == "return_hazard") config.return_hazard = value.get<double>();
      else if (key == "multi_affiliation_probability") config.multi_affiliation_probability = value.get<double>();
      else if (key == "second_field_probability") config.second_field_probability = value.get<double>();
      else if (key == "doc_types") config.doc_types = value.get<std::map<std::string, double>>();
      else if (key == "team_size_weights") config.team_size_weights = value.get<std::vector<double>>();
      else if (key == "same_region_preference") config.same_region_preference = value.get<double>();
      else if (key == "returnee_host_boost") config.returnee_host_boost = value.get<double>();
      else if (key == "fields") {
        config.fields.clear();
        for (const auto& f : value) {
          FieldModel model;
          model.code = f.at("code").get<std::string>();
          model.weight = f.value("weight", 1.0);
          model.citation_mean = f.value("citation_mean", 10.0);
          model.citation_dispersion = f.value("citation_dispersion", 1.0);
          config.fields.push_back(std::move(model));
        }
      } else {
        throw Error(Errc::InvalidConfig, "unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, std::string("bad value: ") + e.what());
  }
  validate(config);
  return config;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_config(buffer.str(), path.parent_path());
}

SynthResult generate(const ScenarioConfig& config) {
  validate(config);
  const RegionScheme& scheme = *config.scheme;
  const RegionId home = scheme.require(config.home);
  const std::size_t n_regions = scheme.size();
  Rng rng(config.seed);

  std::vector<double> origin_w(n_regions, 0.0);
  for (const auto& [label, w] : config.origin_weights) origin_w[*scheme.find(label)] = w;
  std::vector<std::vector<double>> hazard(n_regions, std::vector<double>(n_regions, 0.0));
  for (const auto& [from, row] : config.move_hazard) {
    for (const auto& [to, p] : row) hazard[*scheme.find(from)][*scheme.find(to)] = p;
  }
  auto pick_country = [&](RegionId region) {
    auto countries = scheme.countries(region);
    return countries[std::uniform_int_distribution<std::size_t>(0, countries.size() - 1)(rng)];
  };

  // latent careers
  const int width = std::max<int>(6, static_cast<int>(std::to_string(config.n_authors).size()));
  std::vector<Career> careers(config.n_authors);
  for (auto& career : careers) {
    career.origin = static_cast<RegionId>(pick_weighted(origin_w, rng));
    career.start = std::uniform_int_distribution<int>(config.year_min, config.year_max)(rng);
    RegionId loc = career.origin;
    CountryCode origin_country = pick_country(loc);
    CountryCode country = origin_country;
    for (int year = career.start; year <= config.year_max; ++year) {
      if (year > career.start) {
        if (uniform(rng) < config.exit_hazard) {
          career.retired = year - 1;
          break;
        }
        RegionId next = loc;
        if (loc != career.origin && uniform(rng) < config.return_hazard) {
          next = career.origin;
        } else {
          double u = uniform(rng);
          for (RegionId to = 0; to < n_regions; ++to) {
            if (u < hazard[loc][to]) {
              next = to;
              break;
            }
            u -= hazard[loc][to];
          }
        }
        if (next != loc) {
          loc = next;
          country = loc == career.origin ? origin_country : pick_country(loc);
        }
      }
      career.years.push_back({year, loc, country});
    }
    career.classes = true_classes(career.years, career.origin, home);
  }

  // records, year by year
  std::vector<double> field_w, doc_w;
  std::vector<std::string> doc_names;
  for (const auto& f : config.fields) field_w.push_back(f.weight);
  for (const auto& [name, w] : config.doc_types) {
    doc_names.push_back(name);
    doc_w.push_back(w);
  }

  CorpusBuilder builder(scheme, {config.year_min, config.year_max});
  std::size_t pub_counter = 0;
  struct Active {
    std::size_t author;
    const Stint* stint;
    const MobilityClass* cls;
  };
  std::vector<std::size_t> cursor(careers.size(), 0);
  for (int year = config.year_min; year <= config.year_max; ++year) {
    std::vector<Active> active;
    std::vector<std::vector<std::size_t>> by_region(n_regions);
    for (std::size_t a = 0; a < careers.size(); ++a) {
      auto& c = cursor[a];
      const auto& career = careers[a];
      if (c < career.years.size() && career.years[c].year == year) {
        by_region[career.years[c].region].push_back(active.size());
        active.push_back({a, &career.years[c], &career.classes[c]});
        ++c;
      }
    }

    int seq = 0;
    for (std::size_t lead = 0; lead < active.size(); ++lead) {
      if (uniform(rng) >= config.pub_probability) continue;
      const Active& head = active[lead];
      const std::size_t team = pick_weighted(config.team_size_weights, rng) + 1;

      std::vector<double> region_w(n_regions, 0.0);
      const RegionId own = head.stint->region;
      for (RegionId r = 0; r < n_regions; ++r) {
        if (by_region[r].empty()) continue;
        if (r == own) {
          region_w[r] = config.same_region_preference;
        } else {
          region_w[r] = (1.0 - config.same_region_preference) / static_cast<double>(n_regions - 1);
          if (head.cls->kind == ClassKind::ReturneeResident && head.cls->second == r)
            region_w[r] *= config.returnee_host_boost;
        }
      }

      std::vector<std::size_t> members{lead};
      const bool can_pick = std::accumulate(region_w.begin(), region_w.end(), 0.0) > 0.0;
      for (std::size_t k = 1; k < team && can_pick; ++k) {
        const auto& pool = by_region[pick_weighted(region_w, rng)];
        for (int attempt = 0; attempt < 8; ++attempt) {
          const std::size_t pick = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
          if (std::find(members.begin(), members.end(), pick) == members.end()) {
            members.push_back(pick);
            break;
          }
        }
      }

      RawRecord record;
      record.pub_id = padded('P', ++pub_counter, 9);
      record.year = year;
      record.seq = seq++;
      const std::size_t field = pick_weighted(field_w, rng);
      record.fields.push_back(config.fields[field].code);
      if (uniform(rng) < config.second_field_probability) {
        std::vector<double> others = field_w;
        others[field] = 0.0;
        if (std::accumulate(others.begin(), others.end(), 0.0) > 0.0)
          record.fields.push_back(config.fields[pick_weighted(others, rng)].code);
      }
      record.doc_type = doc_names[pick_weighted(doc_w, rng)];
      record.citations = draw_citations(config.fields[field], rng);
      for (std::size_t m : members) {
        const Active& who = active[m];
        RawRecord::Author author{padded('A', who.author + 1, width), {who.stint->country}};
        if (uniform(rng) < config.multi_affiliation_probability) {
          std::vector<double> guest_w(n_regions, 0.0);
          for (RegionId r = 0; r < n_regions; ++r) {
            if (r != who.stint->region && !scheme.countries(r).empty()) guest_w[r] = 1.0;
          }
          if (std::accumulate(guest_w.begin(), guest_w.end(), 0.0) > 0.0)
            author.countries.push_back(pick_country(static_cast<RegionId>(pick_weighted(guest_w, rng))));
        }
        record.authors.push_back(std::move(author));
      }
      builder.add(std::move(record));
    }
  }

  GroundTruth truth;
  truth.home = home;
  truth.authors.reserve(careers.size());
  for (std::size_t a = 0; a < careers.size(); ++a) {
    const auto& career = careers[a];
    TruthAuthor author;
    author.id = padded('A', a + 1, width);
    author.origin = career.origin;
    author.start_year = career.start;
    author.retirement_year = career.retired;
    for (std::size_t i = 0; i < career.years.size(); ++i) {
      if (i > 0 && career.years[i].region != career.years[i - 1].region)
        author.moves.push_back({career.years[i - 1].region, career.years[i].region, career.years[i].year});
      author.classes.emplace_back(career.years[i].year, career.classes[i]);
    }
    truth.authors.push_back(std::move(author));
  }
  return {std::move(builder).build(), std::move(truth)};
}

void write_truth(std::ostream& out, const GroundTruth& truth, const RegionScheme& scheme) {
  for (const auto& author : truth.authors) {
    ordered_json doc;
    doc["id"] = author.id;
    doc["origin"] = scheme.label(author.origin);
    doc["start_year"] = author.start_year;
    doc["retirement_year"] = author.retirement_year ? json(*author.retirement_year) : json(nullptr);
    doc["moves"] = ordered_json::array();
    for (const auto& move : author.moves)
      doc["moves"].push_back({{"from", scheme.label(move.from)}, {"to", scheme.label(move.to)}, {"year", move.year}});
    doc["classes"] = ordered_json::array();
    for (const auto& [year, cls] : author.classes)
      doc["classes"].push_back({{"year", year}, {"class", format_class(cls, scheme)}});
    out << doc.dump() << '\n';
  }
}

Corpus degrade(const Corpus& corpus, const GroundTruth& truth, const NoiseConfig& noise) {
  const auto& scheme = corpus.scheme();
  Rng rng(noise.seed);

  // persistent guest affiliation per author, away from the origin region
  std::vector<std::optional<CountryCode>> guest(corpus.author_count());
  for (AuthorId a = 0; a < corpus.author_count(); ++a) {
    auto it = std::lower_bound(truth.authors.begin(), truth.authors.end(), corpus.author_name(a),
                               [](const TruthAuthor& t, std::string_view id) { return t.id < id; });
    std::optional<RegionId> origin;
    if (it != truth.authors.end() && it->id == corpus.author_name(a)) origin = it->origin;
    std::vector<double> w(scheme.size(), 0.0);
    for (RegionId r = 0; r < scheme.size(); ++r) {
      if (r != origin && !scheme.countries(r).empty()) w[r] = 1.0;
    }
    if (std::accumulate(w.begin(), w.end(), 0.0) == 0.0) continue;
    auto countries = scheme.countries(static_cast<RegionId>(pick_weighted(w, rng)));
    guest[a] = countries[std::uniform_int_distribution<std::size_t>(0, countries.size() - 1)(rng)];
  }

  CorpusBuilder builder(scheme, corpus.window());
  std::vector<int> decided_year(corpus.author_count(), std::numeric_limits<int>::min());
  std::vector<bool> dropped(corpus.author_count(), false);
  for (const auto& record : corpus.records()) {
    RawRecord raw = to_raw(corpus, record);
    raw.authors.clear();
    for (const auto& authorship : record.authorships) {
      const AuthorId a = authorship.author;
      if (decided_year[a] != record.year) {
        decided_year[a] = record.year;
        dropped[a] = noise.gap_probability > 0.0 && uniform(rng) < noise.gap_probability;
      }
      if (dropped[a]) continue;
      RawRecord::Author author{std::string(corpus.author_name(a)), authorship.countries};
      if (noise.dual_affiliation_probability > 0.0 && author.countries.size() == 1 && guest[a] &&
          scheme.region_of(*guest[a]) != scheme.region_of(author.countries.front()) &&
          uniform(rng) < noise.dual_affiliation_probability) {
        author.countries.push_back(*guest[a]);
      }
      raw.authors.push_back(std::move(author));
    }
    if (!raw.authors.empty()) builder.add(std::move(raw));
  }
  return std::move(builder).build();
}

}  // namespace careertrace
