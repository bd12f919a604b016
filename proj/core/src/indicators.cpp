#include "careertrace/indicators.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "careertrace/error.hpp"
#include "careertrace/parallel.hpp"

namespace careertrace {

namespace {

__extension__ typedef __int128 i128;

bool mul_ok(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }
bool add_ok(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }

i128 gcd128(i128 a, i128 b) {
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

double to_double_ratio(i128 num, i128 den) {
  constexpr i128 kExact = i128{1} << 53;
  if (num < kExact && den < kExact) return static_cast<double>(num) / static_cast<double>(den);
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

std::string region_list(const std::vector<RegionId>& regions, const RegionScheme& scheme) {
  std::string out;
  for (RegionId r : regions) {
    if (!out.empty()) out += '+';
    out += scheme.label(r);
  }
  return out;
}

std::string filter_key(const ClassFilter& filter, const RegionScheme& scheme) {
  static constexpr std::string_view kNames[] = {"Domestic", "Overseas", "ReturneeResident", "ReturneeAbroad"};
  std::string out(kNames[static_cast<int>(filter.kind)]);
  auto part = [&](const std::optional<RegionId>& r) { return r ? std::string(scheme.label(*r)) : std::string("*"); };
  out += '(' + part(filter.first);
  if (filter.kind != ClassKind::Domestic) out += ',' + part(filter.second);
  out += ')';
  return out;
}

}  // namespace

std::string_view to_string(Counting counting) noexcept { return counting == Counting::Full ? "full" : "frac"; }

void CitationBaselines::add(const CohortKey& key, std::int64_t citations) {
  auto& stats = cohorts_[key];
  stats.citation_sum += citations;
  stats.size += 1;
}

const CohortStats* CitationBaselines::find(const CohortKey& key) const noexcept {
  auto it = cohorts_.find(key);
  return it == cohorts_.end() ? nullptr : &it->second;
}

CitationBaselines citation_baselines(const Corpus& corpus) {
  CitationBaselines baselines;
  for (const auto& record : corpus.records()) {
    for (FieldId field : record.fields) baselines.add({field, record.year, record.doc_type}, record.citations);
  }
  return baselines;
}

FwciValue fwci(const PublicationRecord& record, const CitationBaselines& baselines) {
  std::vector<const CohortStats*> cohorts;
  for (FieldId field : record.fields) {
    const auto* stats = baselines.find({field, record.year, record.doc_type});
    if (!stats) throw Error(Errc::MissingCohort, "no baseline cohort for record " + record.pub_id);
    cohorts.push_back(stats);
  }
  const std::int64_t m = static_cast<std::int64_t>(cohorts.size());
  if (record.citations == 0) return {0.0, false};

  // fwci = c * m / sum_f(sum_f / size_f) = c * m * L / sum_f(sum_f * L / size_f)
  i128 lcm = 1;
  bool exact = true;
  for (const auto* stats : cohorts) {
    i128 g = gcd128(lcm, stats->size);
    exact = exact && mul_ok(lcm / g, stats->size, lcm);
  }
  i128 den = 0;
  i128 num = 0;
  for (const auto* stats : cohorts) {
    i128 term;
    exact = exact && mul_ok(stats->citation_sum, lcm / stats->size, term) && add_ok(den, term, den);
  }
  exact = exact && mul_ok(record.citations, m, num) && mul_ok(num, lcm, num);

  if (exact) {
    if (den == 0) return {std::numeric_limits<double>::infinity(), true};
    const i128 g = gcd128(num, den);
    return {to_double_ratio(num / g, den / g), false};
  }
  long double mean = 0.0L;
  for (const auto* stats : cohorts)
    mean += static_cast<long double>(stats->citation_sum) / static_cast<long double>(stats->size);
  mean /= static_cast<long double>(m);
  if (mean == 0.0L) return {std::numeric_limits<double>::infinity(), true};
  return {static_cast<double>(static_cast<long double>(record.citations) / mean), false};
}

std::vector<PubScore> top10_flags(const Corpus& corpus, const CitationBaselines& baselines) {
  const auto& records = corpus.records();
  std::vector<PubScore> scores(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto value = fwci(records[i], baselines);
    scores[i].fwci = value.value;
    scores[i].zero_baseline = value.zero_baseline;
  }

  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() && records[end].year == records[begin].year) ++end;

    std::vector<double> fwcis;
    std::vector<std::int64_t> cites;
    for (std::size_t i = begin; i < end; ++i) {
      if (!scores[i].zero_baseline) fwcis.push_back(scores[i].fwci);
      cites.push_back(records[i].citations);
    }
    std::sort(fwcis.begin(), fwcis.end());
    std::sort(cites.begin(), cites.end());
    const double fwci_threshold = fwcis.empty() ? std::numeric_limits<double>::infinity()
                                                : nearest_rank_p90(std::span<const double>(fwcis));
    const std::int64_t cites_threshold = nearest_rank_p90(std::span<const std::int64_t>(cites));
    for (std::size_t i = begin; i < end; ++i) {
      scores[i].top10_fwci = !scores[i].zero_baseline && scores[i].fwci > fwci_threshold;
      scores[i].top10_cits = records[i].citations > cites_threshold;
    }
    begin = end;
  }
  return scores;
}

IntlCopub intl_copub(const PublicationRecord& record, const RegionScheme& scheme, bool require_distinct_authors) {
  IntlCopub result;
  std::vector<std::pair<CountryCode, std::size_t>> located;  // (country, authorship)
  for (std::size_t i = 0; i < record.authorships.size(); ++i) {
    for (const auto& code : record.authorships[i].countries) located.emplace_back(code, i);
  }
  std::set<RegionPair> pairs;
  for (std::size_t a = 0; a < located.size(); ++a) {
    for (std::size_t b = a + 1; b < located.size(); ++b) {
      if (located[a].first == located[b].first) continue;
      if (require_distinct_authors && located[a].second == located[b].second) continue;
      result.international = true;
      pairs.insert(make_region_pair(scheme.region_of(located[a].first), scheme.region_of(located[b].first)));
    }
  }
  result.region_pairs.assign(pairs.begin(), pairs.end());
  return result;
}

double location_fraction(const Authorship& authorship, RegionId region, const RegionScheme& scheme) noexcept {
  std::size_t hits = 0;
  for (const auto& code : authorship.countries) hits += scheme.region_of(code) == region;
  if (hits == authorship.countries.size()) return 1.0;
  return static_cast<double>(hits) / static_cast<double>(authorship.countries.size());
}

IndicatorEngine::IndicatorEngine(const Corpus& corpus, std::span<const AuthorMobility> mobility,
                                 const IndicatorOptions& options)
    : corpus_(corpus), options_(options) {
  if (options.home >= corpus.scheme().size()) throw Error(Errc::HomeMismatch, "home region id out of range");
  const auto& records = corpus.records();
  baselines_ = citation_baselines(corpus);
  scores_ = top10_flags(corpus, baselines_);

  offsets_.resize(records.size() + 1, 0);
  for (std::size_t i = 0; i < records.size(); ++i) offsets_[i + 1] = offsets_[i] + records[i].authorships.size();
  classes_.resize(offsets_.back());
  intl_.resize(records.size());
  parallel_chunks(records.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& record = records[i];
      intl_[i] = intl_copub(record, corpus.scheme(), options.intl_requires_distinct_authors);
      for (std::size_t j = 0; j < record.authorships.size(); ++j) {
        const AuthorId author = record.authorships[j].author;
        classes_[offsets_[i] + j] = class_of_publication(record, author, mobility[author].states);
      }
    }
  });
}

std::vector<MobilityClass> IndicatorEngine::classes() const {
  std::vector<MobilityClass> out(classes_.begin(), classes_.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::array<Measure, 3>> IndicatorEngine::measure_many(std::span<const Population> populations,
                                                                  std::optional<int> year) const {
  std::vector<std::array<Measure, 3>> result(populations.size());
  const auto& all = corpus_.records();
  auto records = year ? corpus_.year_records(*year) : std::span<const PublicationRecord>(all);
  const std::size_t base = records.empty() ? 0 : static_cast<std::size_t>(records.data() - all.data());
  const auto& scheme = corpus_.scheme();

  for (std::size_t r = 0; r < records.size(); ++r) {
    const std::size_t index = base + r;
    const auto& record = records[r];
    const auto& intl = intl_[index];
    const auto& score = scores_[index];
    const double n = static_cast<double>(record.authorships.size());

    for (std::size_t p = 0; p < populations.size(); ++p) {
      const auto& pop = populations[p];
      if (pop.international_only && !intl.international) continue;
      if (pop.region_pair &&
          !std::binary_search(intl.region_pairs.begin(), intl.region_pairs.end(), *pop.region_pair))
        continue;
      double qualifying = 0.0;
      bool any = false;
      for (std::size_t j = 0; j < record.authorships.size(); ++j) {
        const auto& authorship = record.authorships[j];
        const auto& cls = classes_[offsets_[index] + j];
        if (pop.cls && !pop.cls->matches(cls)) continue;
        double fraction = 0.0;
        if (pop.at_class_location) {
          fraction = location_fraction(authorship, cls.location(), scheme);
        } else if (pop.regions.empty()) {
          fraction = 1.0;
        } else {
          for (RegionId region : pop.regions) fraction += location_fraction(authorship, region, scheme);
        }
        if (fraction > 0.0) {
          any = true;
          qualifying += fraction;
        }
      }
      if (!any) continue;
      const double weight = qualifying / n;
      auto add = [&](Selection s) {
        result[p][static_cast<int>(s)].full += 1.0;
        result[p][static_cast<int>(s)].frac += weight;
      };
      add(Selection::All);
      if (score.top10_fwci) add(Selection::Top10Fwci);
      if (score.top10_cits) add(Selection::Top10Cits);
    }
  }
  return result;
}

Measure IndicatorEngine::measure(const Population& population, std::optional<int> year, Selection selection) const {
  return measure_many(std::span<const Population>(&population, 1), year)[0][static_cast<int>(selection)];
}

double IndicatorEngine::output_share(const Population& population, const Population& reference,
                                     std::optional<int> year, Counting counting) const {
  const Population both[] = {population, reference};
  auto m = measure_many(both, year);
  const double ref = m[1][0].get(counting);
  if (ref == 0.0) throw Error(Errc::EmptyReference, "reference population has no output");
  return m[0][0].get(counting) / ref;
}

double IndicatorEngine::pp10(const Population& population, std::optional<int> year, Counting counting,
                             Selection top10) const {
  auto m = measure_many(std::span<const Population>(&population, 1), year)[0];
  const double total = m[0].get(counting);
  if (total == 0.0) throw Error(Errc::EmptyReference, "population has no output");
  return m[static_cast<int>(top10)].get(counting) / total;
}

double IndicatorEngine::class_intl_share(const ClassFilter& cls, std::optional<int> year, Counting counting) const {
  Population reference{{options_.home}, false, std::nullopt, true, std::nullopt};
  Population population = reference;
  population.cls = cls;
  return output_share(population, reference, year, counting);
}

double IndicatorEngine::copub_direction(const ClassFilter& cls, RegionId partner, std::optional<int> year,
                                        Counting counting) const {
  Population reference{{options_.home}, false, std::nullopt, false, make_region_pair(options_.home, partner)};
  Population population = reference;
  population.cls = cls;
  return output_share(population, reference, year, counting);
}

// ---------------------------------------------------------------------------

namespace {

struct RowSpec {
  std::string family;
  std::string population;
  std::string metric;
  Population numerator;
  Selection selection = Selection::All;
  std::optional<Population> denominator;
};

std::vector<RowSpec> row_specs(const IndicatorEngine& engine, std::span<const std::string> families) {
  const auto& scheme = engine.corpus().scheme();
  const RegionId home = engine.options().home;
  auto wants = [&](std::string_view family) { return std::find(families.begin(), families.end(), family) != families.end(); };

  const Population world{};
  auto region_pop = [](RegionId r) { return Population{{r}, false, std::nullopt, false, std::nullopt}; };

  struct ClassEntry {
    std::string key;
    ClassFilter filter;
    std::optional<RegionId> location;  // set when every matching class shares it
  };
  std::vector<ClassEntry> classes;
  for (const auto& cls : engine.classes())
    classes.push_back({"CLASS:" + format_class(cls, scheme), ClassFilter::exact(cls), cls.location()});
  const ClassFilter all_returnees{ClassKind::ReturneeResident, home, std::nullopt};
  const ClassFilter all_overseas{ClassKind::Overseas, home, std::nullopt};
  classes.push_back({"CLASS:" + filter_key(all_returnees, scheme), all_returnees, home});
  classes.push_back({"CLASS:" + filter_key(all_overseas, scheme), all_overseas, std::nullopt});

  std::vector<RegionPair> partner_pairs;
  for (RegionId r = 0; r < scheme.size(); ++r) {
    if (r != home) partner_pairs.push_back(make_region_pair(home, r));
  }
  auto pair_label = [&](const RegionPair& pair) {
    return std::string(scheme.label(pair.first)) + "-" + std::string(scheme.label(pair.second));
  };

  std::vector<RowSpec> specs;
  if (wants("pp10")) {
    std::vector<std::pair<std::string, Population>> pops;
    pops.emplace_back("WORLD", world);
    for (RegionId r = 0; r < scheme.size(); ++r) pops.emplace_back("REGION:" + std::string(scheme.label(r)), region_pop(r));
    for (const auto& entry : classes) {
      Population pop;
      pop.cls = entry.filter;
      pop.at_class_location = true;
      pops.emplace_back(entry.key, pop);
    }
    for (const auto& pair : partner_pairs) {
      Population pop;
      pop.region_pair = pair;
      pops.emplace_back("PAIR:" + pair_label(pair), pop);
    }
    for (const auto& [key, pop] : pops) {
      specs.push_back({"pp10", key, "pp10_fwci", pop, Selection::Top10Fwci, pop});
      specs.push_back({"pp10", key, "pp10_cits", pop, Selection::Top10Cits, pop});
      specs.push_back({"pp10", key, "output", pop, Selection::All, std::nullopt});
    }
  }
  if (wants("shares")) {
    for (RegionId r = 0; r < scheme.size(); ++r) {
      const std::string key = "REGION:" + std::string(scheme.label(r));
      specs.push_back({"shares", key, "world_share", region_pop(r), Selection::All, world});
      Population intl = region_pop(r);
      intl.international_only = true;
      specs.push_back({"shares", key, "intl_share", intl, Selection::All, region_pop(r)});
    }
    Population home_intl = region_pop(home);
    home_intl.international_only = true;
    for (const auto& entry : classes) {
      Population at_home = region_pop(home);
      at_home.cls = entry.filter;
      specs.push_back({"shares", entry.key, "home_share", at_home, Selection::All, region_pop(home)});
      Population intl = home_intl;
      intl.cls = entry.filter;
      specs.push_back({"shares", entry.key, "intl_class_share", intl, Selection::All, home_intl});
      if (entry.location) {
        Population located;
        located.cls = entry.filter;
        located.at_class_location = true;
        specs.push_back({"shares", entry.key, "location_share", located, Selection::All, region_pop(*entry.location)});
      }
    }
  }
  if (wants("direction")) {
    for (const auto& entry : classes) {
      if (entry.filter.kind != ClassKind::ReturneeResident) continue;
      for (const auto& pair : partner_pairs) {
        const RegionId partner = pair.first == home ? pair.second : pair.first;
        Population reference = region_pop(home);
        reference.region_pair = pair;
        Population pop = reference;
        pop.cls = entry.filter;
        specs.push_back({"direction", entry.key, "direction_" + std::string(scheme.label(partner)), pop,
                         Selection::All, reference});
      }
    }
  }
  if (wants("copub")) {
    for (RegionId a = 0; a < scheme.size(); ++a) {
      for (RegionId b = a + 1; b < scheme.size(); ++b) {
        if (a == scheme.other() || b == scheme.other()) continue;
        Population pop{{a, b}, false, std::nullopt, false, make_region_pair(a, b)};
        specs.push_back({"copub", "PAIR:" + region_list({a, b}, scheme), "copub_output", pop, Selection::All,
                         std::nullopt});
      }
    }
  }
  return specs;
}

}  // namespace

std::vector<IndicatorRow> indicator_table(const IndicatorEngine& engine, std::span<const std::string> families) {
  const auto specs = row_specs(engine, families);

  // distinct populations, measured once per year
  std::vector<Population> pops;
  auto index_of = [&](const Population& pop) {
    auto it = std::find(pops.begin(), pops.end(), pop);
    if (it != pops.end()) return static_cast<std::size_t>(it - pops.begin());
    pops.push_back(pop);
    return pops.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::optional<std::size_t>>> spec_index;
  for (const auto& spec : specs) {
    std::optional<std::size_t> den;
    if (spec.denominator) den = index_of(*spec.denominator);
    spec_index.emplace_back(index_of(spec.numerator), den);
  }

  std::vector<std::optional<int>> years;
  for (int y : engine.corpus().years()) years.emplace_back(y);
  std::vector<std::vector<std::array<Measure, 3>>> measured(years.size());
  parallel_chunks(years.size(), engine.options().threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) measured[i] = engine.measure_many(pops, years[i]);
  });
  // pooled: sum of the per-year measures
  std::vector<std::array<Measure, 3>> pooled(pops.size());
  for (const auto& per_year : measured) {
    for (std::size_t p = 0; p < pops.size(); ++p) {
      for (int s = 0; s < 3; ++s) {
        pooled[p][s].full += per_year[p][s].full;
        pooled[p][s].frac += per_year[p][s].frac;
      }
    }
  }
  years.emplace_back(std::nullopt);
  measured.push_back(std::move(pooled));

  std::vector<IndicatorRow> rows;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const auto& spec = specs[s];
    for (std::size_t y = 0; y < years.size(); ++y) {
      for (Counting counting : {Counting::Full, Counting::Fractional}) {
        const auto& m = measured[y];
        double value = m[spec_index[s].first][static_cast<int>(spec.selection)].get(counting);
        if (spec_index[s].second) {
          const double den = m[*spec_index[s].second][0].get(counting);
          if (den == 0.0) continue;
          value /= den;
        }
        rows.push_back({spec.family, spec.population, years[y], spec.metric, counting, value, spec.numerator,
                        spec.selection, spec.denominator});
      }
    }
  }
  return rows;
}

}  // namespace careertrace
