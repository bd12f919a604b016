#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "careertrace/error.hpp"
#include "careertrace/region.hpp"

namespace careertrace {

/// Interned identifiers. Ids are assigned in lexicographic order of the
/// underlying strings, so they are stable for a given set of records.
using AuthorId = std::uint32_t;
using FieldId = std::uint32_t;
using DocTypeId = std::uint32_t;

struct YearWindow {
  int min = 1900;
  int max = 2100;

  bool contains(int year) const noexcept { return year >= min && year <= max; }
  friend bool operator==(const YearWindow&, const YearWindow&) = default;
};

struct Authorship {
  AuthorId author;
  std::vector<CountryCode> countries;  // one per listed affiliation, never empty
};

struct PublicationRecord {
  std::string pub_id;
  int year = 0;
  int seq = 0;
  std::vector<FieldId> fields;  // distinct, in input order
  DocTypeId doc_type = 0;
  std::int64_t citations = 0;
  std::vector<Authorship> authorships;
};

/// String-keyed record, as read from a corpus line or emitted by the generator.
struct RawRecord {
  struct Author {
    std::string id;
    std::vector<CountryCode> countries;
  };

  std::string pub_id;
  int year = 0;
  int seq = 0;
  std::vector<std::string> fields;
  std::string doc_type;
  std::int64_t citations = 0;
  std::vector<Author> authors;
};

struct Diagnostic {
  Errc code;
  std::size_t line = 0;  // 1-based; 0 when the record did not come from a stream
  std::string pub_id;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& diag);

/// Validated, immutable record set. Records are sorted by (year, seq, pub_id).
class Corpus {
 public:
  const std::vector<PublicationRecord>& records() const noexcept { return records_; }
  const RegionScheme& scheme() const noexcept { return scheme_; }
  YearWindow window() const noexcept { return window_; }

  std::size_t author_count() const noexcept { return authors_.size(); }
  std::string_view author_name(AuthorId id) const { return authors_.at(id); }
  std::optional<AuthorId> find_author(std::string_view name) const;
  std::string_view field_name(FieldId id) const { return fields_.at(id); }
  std::size_t field_count() const noexcept { return fields_.size(); }
  std::string_view doc_type_name(DocTypeId id) const { return doc_types_.at(id); }
  std::size_t doc_type_count() const noexcept { return doc_types_.size(); }

  /// Records published in `year` (contiguous thanks to the canonical order).
  std::span<const PublicationRecord> year_records(int year) const;
  /// Distinct publication years, ascending.
  std::vector<int> years() const;
  std::optional<std::size_t> find_record(std::string_view pub_id) const;

 private:
  friend class CorpusBuilder;
  Corpus(RegionScheme scheme, YearWindow window) : scheme_(std::move(scheme)), window_(window) {}

  RegionScheme scheme_;
  YearWindow window_;
  std::vector<PublicationRecord> records_;
  std::vector<std::string> authors_;
  std::vector<std::string> fields_;
  std::vector<std::string> doc_types_;
};

/// Accumulates records, validating each record's invariants as it arrives.
/// Rejected records are reported as diagnostics and left out.
class CorpusBuilder {
 public:
  CorpusBuilder(RegionScheme scheme, YearWindow window);

  /// Returns false (and records a diagnostic) when the record is rejected.
  bool add(RawRecord record, std::size_t line = 0);
  void add_diagnostic(Diagnostic diag) { diagnostics_.push_back(std::move(diag)); }

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }
  std::size_t size() const noexcept { return records_.size(); }

  /// Canonicalizes ids and record order. Throws the first diagnostic, if any.
  Corpus build() &&;
  /// Canonical corpus of the accepted records, ignoring diagnostics.
  Corpus build_accepted() &&;

 private:
  std::uint32_t intern(std::unordered_map<std::string, std::uint32_t>& table, std::string name);

  RegionScheme scheme_;
  YearWindow window_;
  std::vector<PublicationRecord> records_;
  std::unordered_set<std::string> pub_ids_;
  std::unordered_map<std::string, std::uint32_t> authors_;
  std::unordered_map<std::string, std::uint32_t> fields_;
  std::unordered_map<std::string, std::uint32_t> doc_types_;
  std::vector<Diagnostic> diagnostics_;
};

struct ParseOptions {
  YearWindow window;
  unsigned threads = 1;
};

struct ParseResult {
  std::optional<Corpus> corpus;  // set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
};

/// Parses one corpus line. Returns nullopt and fills `diag` on failure.
std::optional<RawRecord> parse_record_line(std::string_view line, std::size_t line_no,
                                           Diagnostic& diag);

/// Reads a line-delimited corpus and reports every invalid line.
ParseResult try_parse_corpus(std::istream& in, const RegionScheme& scheme,
                             const ParseOptions& options = {});

/// Reads a line-delimited corpus; throws Error carrying the first diagnostic.
Corpus parse_corpus(std::istream& in, const RegionScheme& scheme, const ParseOptions& options = {});

std::string record_to_json(const Corpus& corpus, const PublicationRecord& record);
/// Canonical dump: one line per record, in canonical order.
void write_corpus(std::ostream& out, const Corpus& corpus);

RawRecord to_raw(const Corpus& corpus, const PublicationRecord& record);

}  // namespace careertrace
