#include "careertrace/tables.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "careertrace/error.hpp"

namespace careertrace {

namespace {

Error malformed(const std::string& what) { return Error(Errc::MalformedLine, what); }

int parse_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw malformed("bad integer '" + std::string(text) + "'");
  return value;
}

std::int64_t parse_int64(std::string_view text) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw malformed("bad integer '" + std::string(text) + "'");
  return value;
}

double parse_double(std::string_view text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw malformed("bad number '" + std::string(text) + "'");
  return value;
}

std::vector<std::vector<std::string>> table_rows(std::string_view text, std::span<const std::string_view> header) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows.front().size() != header.size() ||
      !std::equal(header.begin(), header.end(), rows.front().begin()))
    throw malformed("unexpected table header");
  rows.erase(rows.begin());
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw malformed("row has the wrong number of columns");
  }
  return rows;
}

void write_header(std::ostream& out, std::span<const std::string_view> header) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
}

AuthorId require_author(const Corpus& corpus, std::string_view name) {
  auto id = corpus.find_author(name);
  if (!id) throw malformed("unknown author '" + std::string(name) + "'");
  return *id;
}

RegionId require_region(const RegionScheme& scheme, std::string_view label) {
  auto id = scheme.find(label);
  if (!id) throw malformed("unknown region '" + std::string(label) + "'");
  return *id;
}

constexpr std::string_view kTimelineHeader[] = {"author_id", "year", "source_pub", "dominant", "weights"};
constexpr std::string_view kMovesHeader[] = {"author_id", "from", "to", "year"};
constexpr std::string_view kStatesHeader[] = {"author_id", "year", "class", "since_year"};
constexpr std::string_view kOriginsHeader[] = {"origin", "class", "authors"};
constexpr std::string_view kStocksHeader[] = {"class", "year", "preceding", "new_movement", "total"};
constexpr std::string_view kIndicatorHeader[] = {"population", "year", "metric", "counting", "value"};

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw malformed("unterminated quoted field");
  if (field_started || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_timelines_csv(std::ostream& out, const Corpus& corpus, std::span<const CareerTimeline> timelines) {
  const auto& scheme = corpus.scheme();
  write_header(out, kTimelineHeader);
  for (const auto& timeline : timelines) {
    const std::string author = csv_escape(corpus.author_name(timeline.author));
    for (const auto& position : timeline.positions) {
      std::string weights;
      for (const auto& share : position.weights) {
        if (!weights.empty()) weights += ';';
        weights += std::string(scheme.label(share.region)) + ":" + format_double(share.weight);
      }
      out << author << ',' << position.year << ',' << csv_escape(corpus.records()[position.source].pub_id) << ','
          << scheme.label(position.dominant) << ',' << csv_escape(weights) << '\n';
    }
  }
}

std::vector<CareerTimeline> read_timelines_csv(std::string_view text, const Corpus& corpus) {
  const auto& scheme = corpus.scheme();
  std::unordered_map<std::string_view, std::uint32_t> pubs;
  for (std::size_t i = 0; i < corpus.records().size(); ++i)
    pubs.emplace(corpus.records()[i].pub_id, static_cast<std::uint32_t>(i));

  std::vector<CareerTimeline> timelines(corpus.author_count());
  for (std::size_t i = 0; i < timelines.size(); ++i) timelines[i].author = static_cast<AuthorId>(i);
  for (const auto& row : table_rows(text, kTimelineHeader)) {
    auto& timeline = timelines[require_author(corpus, row[0])];
    YearPosition position;
    position.year = parse_int(row[1]);
    auto pub = pubs.find(row[2]);
    if (pub == pubs.end() || corpus.records()[pub->second].year != position.year)
      throw malformed("source_pub does not match a record of that year");
    position.source = pub->second;
    position.dominant = require_region(scheme, row[3]);
    std::string_view weights = row[4];
    double total = 0.0;
    while (!weights.empty()) {
      auto end = weights.find(';');
      auto item = weights.substr(0, end);
      auto colon = item.find(':');
      if (colon == std::string_view::npos) throw malformed("bad weight entry");
      RegionShare share{require_region(scheme, item.substr(0, colon)), parse_double(item.substr(colon + 1))};
      if (!position.weights.empty() && position.weights.back().region >= share.region)
        throw malformed("weights out of order");
      if (!(share.weight > 0.0)) throw malformed("non-positive weight");
      total += share.weight;
      position.weights.push_back(share);
      weights = end == std::string_view::npos ? std::string_view{} : weights.substr(end + 1);
    }
    if (position.weights.empty() || std::abs(total - 1.0) > 1e-12) throw malformed("weights do not sum to 1");
    if (weight_of(position.weights, position.dominant) == 0.0) throw malformed("dominant region carries no weight");
    if (!timeline.positions.empty() && timeline.positions.back().year >= position.year)
      throw malformed("positions out of order");
    timeline.positions.push_back(std::move(position));
  }
  for (auto& timeline : timelines) {
    if (timeline.positions.empty()) throw malformed("author without positions");
    timeline.origin = timeline.positions.front().dominant;
    timeline.origin_ambiguous = has_tied_maximum(timeline.positions.front().weights);
  }
  return timelines;
}

void write_moves_csv(std::ostream& out, const Corpus& corpus, std::span<const AuthorMobility> mobility) {
  const auto& scheme = corpus.scheme();
  write_header(out, kMovesHeader);
  for (const auto& author : mobility) {
    for (const auto& move : author.moves) {
      out << csv_escape(corpus.author_name(move.author)) << ',' << scheme.label(move.from) << ','
          << scheme.label(move.to) << ',' << move.year << '\n';
    }
  }
}

void write_returnee_origins_csv(std::ostream& out, const Corpus& corpus, std::span<const OriginCount> counts) {
  const auto& scheme = corpus.scheme();
  write_header(out, kOriginsHeader);
  for (const auto& c : counts)
    out << scheme.label(c.origin) << ',' << csv_escape(format_class(c.cls, scheme)) << ',' << c.authors << '\n';
}

void write_states_csv(std::ostream& out, const Corpus& corpus, std::span<const AuthorMobility> mobility) {
  const auto& scheme = corpus.scheme();
  write_header(out, kStatesHeader);
  for (const auto& author : mobility) {
    for (const auto& state : author.states) {
      out << csv_escape(corpus.author_name(state.author)) << ',' << state.year << ','
          << csv_escape(format_class(state.cls, scheme)) << ',' << state.since_year << '\n';
    }
  }
}

std::vector<AuthorMobility> read_mobility_csv(std::string_view moves, std::string_view states, const Corpus& corpus) {
  const auto& scheme = corpus.scheme();
  std::vector<AuthorMobility> mobility(corpus.author_count());
  for (const auto& row : table_rows(moves, kMovesHeader)) {
    const AuthorId author = require_author(corpus, row[0]);
    MoveEvent move{author, require_region(scheme, row[1]), require_region(scheme, row[2]), parse_int(row[3])};
    if (move.from == move.to) throw malformed("move without region change");
    auto& list = mobility[author].moves;
    if (!list.empty() && list.back().year >= move.year) throw malformed("moves out of order");
    list.push_back(move);
  }
  for (const auto& row : table_rows(states, kStatesHeader)) {
    const AuthorId author = require_author(corpus, row[0]);
    MobilityState state{author, parse_int(row[1]), parse_class(row[2], scheme), parse_int(row[3])};
    if (state.since_year > state.year) throw malformed("since_year after year");
    auto& list = mobility[author].states;
    if (!list.empty() && list.back().year >= state.year) throw malformed("states out of order");
    list.push_back(state);
  }
  for (const auto& author : mobility) {
    if (author.states.empty()) throw malformed("author without states");
  }
  return mobility;
}

void write_stocks_csv(std::ostream& out, const RegionScheme& scheme, std::span<const StockCell> cells) {
  write_header(out, kStocksHeader);
  for (const auto& cell : cells) {
    out << csv_escape(format_class(cell.cls, scheme)) << ',' << cell.year << ',' << cell.preceding << ','
        << cell.new_movement << ',' << cell.total() << '\n';
  }
}

std::vector<StockCell> read_stocks_csv(std::string_view text, const RegionScheme& scheme) {
  std::vector<StockCell> cells;
  for (const auto& row : table_rows(text, kStocksHeader)) {
    StockCell cell{parse_class(row[0], scheme), parse_int(row[1]), parse_int64(row[2]), parse_int64(row[3])};
    if (cell.preceding < 0 || cell.new_movement < 0 || cell.total() != parse_int64(row[4]))
      throw malformed("inconsistent stock cell");
    cells.push_back(cell);
  }
  return cells;
}

void write_indicator_csv(std::ostream& out, std::span<const IndicatorRow> rows, std::string_view family) {
  write_header(out, kIndicatorHeader);
  for (const auto& row : rows) {
    if (row.family != family) continue;
    out << csv_escape(row.population) << ',' << (row.year ? std::to_string(*row.year) : std::string("all")) << ','
        << row.metric << ',' << to_string(row.counting) << ',' << format_double(row.value) << '\n';
  }
}

}  // namespace careertrace
