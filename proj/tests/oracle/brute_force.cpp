#include "brute_force.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace oracle {

namespace {

bool earlier(const PublicationRecord& a, const PublicationRecord& b) {
  if (a.year != b.year) return a.year < b.year;
  if (a.seq != b.seq) return a.seq < b.seq;
  return a.pub_id < b.pub_id;
}

RegionId pick_dominant(const std::map<RegionId, double>& weights, std::optional<RegionId> previous, TieRule rule) {
  double best = 0.0;
  for (const auto& [r, w] : weights) best = std::max(best, w);
  std::vector<RegionId> tied;
  for (const auto& [r, w] : weights) {
    if (w == best) tied.push_back(r);
  }
  if (rule == TieRule::Hysteresis && previous &&
      std::find(tied.begin(), tied.end(), *previous) != tied.end())
    return *previous;
  return *std::min_element(tied.begin(), tied.end());
}

// exact rational for FWCI comparisons
struct Fraction {
  __extension__ __int128 num = 0;
  __extension__ __int128 den = 1;
};

__extension__ typedef __int128 wide;

wide wide_gcd(wide a, wide b) {
  if (a < 0) a = -a;
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

Fraction reduce(Fraction f) {
  wide g = wide_gcd(f.num, f.den);
  return {f.num / g, f.den / g};
}

Fraction add(Fraction a, Fraction b) { return reduce({a.num * b.den + b.num * a.den, a.den * b.den}); }

bool less(const Fraction& a, const Fraction& b) { return a.num * b.den < b.num * a.den; }

}  // namespace

std::vector<Timeline> timelines(const Corpus& corpus, TieRule rule) {
  const auto& records = corpus.records();
  std::vector<Timeline> result(corpus.author_count());
  for (AuthorId author = 0; author < corpus.author_count(); ++author) {
    std::set<int> years;
    for (const auto& r : records) {
      for (const auto& a : r.authorships) {
        if (a.author == author) years.insert(r.year);
      }
    }
    std::optional<RegionId> previous;
    for (int year : years) {
      std::optional<std::size_t> first;
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].year != year) continue;
        bool has = false;
        for (const auto& a : records[i].authorships) has = has || a.author == author;
        if (has && (!first || earlier(records[i], records[*first]))) first = i;
      }
      const Authorship* mine = nullptr;
      for (const auto& a : records[*first].authorships) {
        if (a.author == author) mine = &a;
      }
      Position position{year, *first, {}, 0};
      std::map<RegionId, int> counts;
      for (const auto& code : mine->countries) counts[corpus.scheme().region_of(code)]++;
      for (const auto& [r, c] : counts) position.weights[r] = static_cast<double>(c) / mine->countries.size();
      position.dominant = pick_dominant(position.weights, previous, rule);
      previous = position.dominant;
      result[author].positions.push_back(position);
    }
  }
  return result;
}

std::vector<MoveEvent> moves(AuthorId author, const Timeline& timeline) {
  std::vector<MoveEvent> out;
  for (std::size_t i = 0; i + 1 < timeline.positions.size(); ++i) {
    const auto& a = timeline.positions[i];
    const auto& b = timeline.positions[i + 1];
    if (a.dominant != b.dominant) out.push_back({author, a.dominant, b.dominant, b.year});
  }
  return out;
}

std::vector<MobilityState> states(AuthorId author, const Timeline& timeline, RegionId home,
                                  HostAttribution attribution) {
  // each year's class is recomputed from the full history up to that year
  auto class_at = [&](std::size_t i) {
    const RegionId origin = timeline.positions[0].dominant;
    std::vector<RegionId> inbound_hosts;
    for (std::size_t k = 1; k <= i; ++k) {
      const RegionId from = timeline.positions[k - 1].dominant;
      const RegionId to = timeline.positions[k].dominant;
      if (from != to && to == home) inbound_hosts.push_back(from);
    }
    const RegionId here = timeline.positions[i].dominant;
    if (!inbound_hosts.empty()) {
      const RegionId host = attribution == HostAttribution::First ? inbound_hosts.front() : inbound_hosts.back();
      if (here == home) return MobilityClass{ClassKind::ReturneeResident, home, host};
      return MobilityClass{ClassKind::ReturneeAbroad, home, here};
    }
    if (here == origin) return MobilityClass{ClassKind::Domestic, origin, origin};
    return MobilityClass{ClassKind::Overseas, origin, here};
  };
  std::vector<MobilityState> out;
  for (std::size_t i = 0; i < timeline.positions.size(); ++i) {
    const MobilityClass cls = class_at(i);
    std::size_t start = i;
    while (start > 0 && class_at(start - 1) == cls) --start;
    out.push_back({author, timeline.positions[i].year, cls, timeline.positions[start].year});
  }
  return out;
}

std::map<StockKey, std::pair<long long, long long>> stocks(const std::vector<Timeline>& timelines,
                                                           const std::vector<std::vector<MobilityState>>& states,
                                                           int first_year, int last_year, int dataset_end,
                                                           int grace) {
  std::map<StockKey, std::pair<long long, long long>> out;
  for (std::size_t a = 0; a < timelines.size(); ++a) {
    const auto& positions = timelines[a].positions;
    for (int year = first_year; year <= std::min(last_year, dataset_end); ++year) {
      bool before = false, at = false, after = false;
      int last_seen = -1000000;
      for (const auto& p : positions) {
        if (p.year > dataset_end) continue;
        before = before || p.year < year;
        at = at || p.year == year;
        after = after || p.year > year;
        last_seen = std::max(last_seen, p.year);
      }
      if (!before && !at) continue;                   // career not started
      if (!at && !after && year - last_seen > grace) continue;  // retired
      const MobilityState* state = nullptr;
      for (const auto& s : states[a]) {
        if (s.year <= year) state = &s;
      }
      auto& cell = out[{state->cls, year}];
      if (state->since_year == year) {
        cell.second++;
      } else {
        cell.first++;
      }
    }
  }
  return out;
}

Scores scores(const Corpus& corpus) {
  const auto& records = corpus.records();
  const std::size_t n = records.size();
  std::vector<Fraction> value(n);
  Scores out;
  out.fwci.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    // mean over fields of the cohort mean citations
    Fraction mean_sum{0, 1};
    for (FieldId field : r.fields) {
      wide sum = 0, size = 0;
      for (const auto& other : records) {
        if (other.year != r.year || other.doc_type != r.doc_type) continue;
        if (std::find(other.fields.begin(), other.fields.end(), field) == other.fields.end()) continue;
        sum += other.citations;
        size += 1;
      }
      mean_sum = add(mean_sum, reduce({sum, size}));
    }
    const wide m = static_cast<wide>(r.fields.size());
    // fwci = c / (mean_sum / m) = c * m * mean_sum.den / mean_sum.num
    if (r.citations == 0) {
      value[i] = {0, 1};
    } else {
      value[i] = reduce({static_cast<wide>(r.citations) * m * mean_sum.den, mean_sum.num});
    }
    out.fwci[i] = static_cast<double>(static_cast<long double>(value[i].num) / static_cast<long double>(value[i].den));
  }
  out.top10_fwci.assign(n, false);
  out.top10_cits.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Fraction> cohort;
    std::vector<long long> cites;
    for (std::size_t j = 0; j < n; ++j) {
      if (records[j].year != records[i].year) continue;
      cohort.push_back(value[j]);
      cites.push_back(records[j].citations);
    }
    std::sort(cohort.begin(), cohort.end(), less);
    std::sort(cites.begin(), cites.end());
    // nearest rank: smallest k with k >= 0.9 * size
    std::size_t k = 1;
    while (10 * k < 9 * cohort.size()) ++k;
    out.top10_fwci[i] = less(cohort[k - 1], value[i]);
    out.top10_cits[i] = records[i].citations > cites[k - 1];
  }
  return out;
}

bool international(const PublicationRecord& record, bool distinct_authors) {
  for (std::size_t i = 0; i < record.authorships.size(); ++i) {
    for (std::size_t j = 0; j < record.authorships.size(); ++j) {
      if (distinct_authors && i == j) continue;
      for (const auto& a : record.authorships[i].countries) {
        for (const auto& b : record.authorships[j].countries) {
          if (a != b) return true;
        }
      }
    }
  }
  return false;
}

namespace {

bool links(const PublicationRecord& record, const RegionScheme& scheme, RegionPair pair, bool distinct_authors) {
  for (std::size_t i = 0; i < record.authorships.size(); ++i) {
    for (std::size_t j = 0; j < record.authorships.size(); ++j) {
      if (distinct_authors && i == j) continue;
      for (const auto& a : record.authorships[i].countries) {
        for (const auto& b : record.authorships[j].countries) {
          if (a == b) continue;
          if (scheme.region_of(a) == pair.first && scheme.region_of(b) == pair.second) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

Measure measure(const Corpus& corpus, const std::vector<std::vector<MobilityState>>& states, const Scores& scores,
                const Population& population, std::optional<int> year, Selection selection, bool distinct_authors) {
  const auto& scheme = corpus.scheme();
  Measure out;
  for (std::size_t i = 0; i < corpus.records().size(); ++i) {
    const auto& r = corpus.records()[i];
    if (year && r.year != *year) continue;
    if (selection == Selection::Top10Fwci && !scores.top10_fwci[i]) continue;
    if (selection == Selection::Top10Cits && !scores.top10_cits[i]) continue;
    if (population.international_only && !international(r, distinct_authors)) continue;
    if (population.region_pair && !links(r, scheme, *population.region_pair, distinct_authors)) continue;
    double total = 0.0;
    bool any = false;
    for (const auto& a : r.authorships) {
      MobilityClass cls{};
      bool found = false;
      for (const auto& s : states[a.author]) {
        if (s.year == r.year) {
          cls = s.cls;
          found = true;
        }
      }
      if (!found) throw std::logic_error("oracle: no state for authorship");
      if (cls.kind == ClassKind::ReturneeAbroad) cls = {ClassKind::Overseas, cls.first, cls.second};
      if (population.cls && !population.cls->matches(cls)) continue;
      std::vector<RegionId> where = population.regions;
      if (population.at_class_location)
        where = {cls.kind == ClassKind::ReturneeResident ? cls.first : cls.second};
      int hits = 0;
      for (const auto& code : a.countries) {
        if (where.empty() || std::find(where.begin(), where.end(), scheme.region_of(code)) != where.end()) ++hits;
      }
      if (hits > 0) {
        any = true;
        total += static_cast<double>(hits) / a.countries.size();
      }
    }
    if (any) {
      out.full += 1;
      out.frac += total / r.authorships.size();
    }
  }
  return out;
}

}  // namespace oracle
