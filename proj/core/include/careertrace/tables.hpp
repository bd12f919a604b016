#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "careertrace/corpus.hpp"
#include "careertrace/indicators.hpp"
#include "careertrace/mobility.hpp"
#include "careertrace/stocks.hpp"
#include "careertrace/timeline.hpp"

// Columnar text tables: comma-separated, header row, LF line endings,
// stable column order. Readers throw Error(MalformedLine) on any deviation.
namespace careertrace {

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
std::string csv_escape(std::string_view field);
/// RFC 4180 rows; quoted fields may contain commas, quotes and newlines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// author_id,year,source_pub,dominant,weights   (weights: "CHN:0.5;USA:0.5")
void write_timelines_csv(std::ostream& out, const Corpus& corpus, std::span<const CareerTimeline> timelines);
std::vector<CareerTimeline> read_timelines_csv(std::string_view text, const Corpus& corpus);

/// author_id,from,to,year
void write_moves_csv(std::ostream& out, const Corpus& corpus, std::span<const AuthorMobility> mobility);
/// author_id,year,class,since_year
void write_states_csv(std::ostream& out, const Corpus& corpus, std::span<const AuthorMobility> mobility);
/// origin,class,authors
void write_returnee_origins_csv(std::ostream& out, const Corpus& corpus, std::span<const OriginCount> counts);
std::vector<AuthorMobility> read_mobility_csv(std::string_view moves, std::string_view states, const Corpus& corpus);

/// class,year,preceding,new_movement,total
void write_stocks_csv(std::ostream& out, const RegionScheme& scheme, std::span<const StockCell> cells);
std::vector<StockCell> read_stocks_csv(std::string_view text, const RegionScheme& scheme);

/// population,year,metric,counting,value   (year "all" for pooled rows)
void write_indicator_csv(std::ostream& out, std::span<const IndicatorRow> rows, std::string_view family);

}  // namespace careertrace
