#include "careertrace/corpus.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "careertrace/parallel.hpp"

namespace careertrace {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::size_t kParseChunkLines = 1 << 16;

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

Diagnostic malformed(std::size_t line, std::string pub_id, std::string message) {
  return {Errc::MalformedLine, line, std::move(pub_id), std::move(message)};
}

std::vector<std::string> sorted_names(const std::unordered_map<std::string, std::uint32_t>& table,
                                      std::vector<std::uint32_t>& remap) {
  std::vector<std::pair<std::string_view, std::uint32_t>> entries;
  entries.reserve(table.size());
  for (const auto& [name, id] : table) entries.emplace_back(name, id);
  std::sort(entries.begin(), entries.end());
  remap.assign(table.size(), 0);
  std::vector<std::string> names;
  names.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    remap[entries[i].second] = static_cast<std::uint32_t>(i);
    names.emplace_back(entries[i].first);
  }
  return names;
}

}  // namespace

std::string format_diagnostic(const Diagnostic& diag) {
  std::string out;
  if (diag.line != 0) out += "line " + std::to_string(diag.line) + ": ";
  out += to_string(diag.code);
  if (!diag.pub_id.empty()) out += "(" + diag.pub_id + ")";
  if (!diag.message.empty()) out += ": " + diag.message;
  return out;
}

std::optional<AuthorId> Corpus::find_author(std::string_view name) const {
  auto it = std::lower_bound(authors_.begin(), authors_.end(), name);
  if (it == authors_.end() || *it != name) return std::nullopt;
  return static_cast<AuthorId>(it - authors_.begin());
}

std::span<const PublicationRecord> Corpus::year_records(int year) const {
  auto lo = std::lower_bound(records_.begin(), records_.end(), year,
                             [](const PublicationRecord& r, int y) { return r.year < y; });
  auto hi = std::upper_bound(lo, records_.end(), year,
                             [](int y, const PublicationRecord& r) { return y < r.year; });
  return {records_.data() + (lo - records_.begin()), static_cast<std::size_t>(hi - lo)};
}

std::vector<int> Corpus::years() const {
  std::vector<int> years;
  for (const auto& record : records_) {
    if (years.empty() || years.back() != record.year) years.push_back(record.year);
  }
  return years;
}

std::optional<std::size_t> Corpus::find_record(std::string_view pub_id) const {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].pub_id == pub_id) return i;
  }
  return std::nullopt;
}

CorpusBuilder::CorpusBuilder(RegionScheme scheme, YearWindow window)
    : scheme_(std::move(scheme)), window_(window) {}

std::uint32_t CorpusBuilder::intern(std::unordered_map<std::string, std::uint32_t>& table,
                                    std::string name) {
  auto [it, inserted] = table.try_emplace(std::move(name), static_cast<std::uint32_t>(table.size()));
  return it->second;
}

bool CorpusBuilder::add(RawRecord raw, std::size_t line) {
  auto reject = [&](Errc code, std::string message) {
    diagnostics_.push_back({code, line, raw.pub_id, std::move(message)});
    return false;
  };
  if (raw.pub_id.empty()) return reject(Errc::MalformedLine, "empty pub_id");
  if (raw.authors.empty()) return reject(Errc::EmptyAuthorList, "record has no authors");
  if (!window_.contains(raw.year)) {
    return reject(Errc::YearOutOfWindow, "year " + std::to_string(raw.year) + " outside [" +
                                             std::to_string(window_.min) + ", " +
                                             std::to_string(window_.max) + "]");
  }
  if (raw.citations < 0) return reject(Errc::MalformedLine, "negative citation count");
  if (raw.fields.empty()) return reject(Errc::MalformedLine, "record has no fields");
  if (raw.doc_type.empty()) return reject(Errc::MalformedLine, "empty doc_type");
  {
    std::vector<std::string_view> ids;
    for (const auto& author : raw.authors) {
      if (author.id.empty()) return reject(Errc::MalformedLine, "empty author id");
      if (author.countries.empty())
        return reject(Errc::MalformedLine, "author '" + author.id + "' has no affiliation countries");
      ids.push_back(author.id);
    }
    std::sort(ids.begin(), ids.end());
    if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
      return reject(Errc::DuplicateAuthor, "author '" + std::string(*dup) + "' listed twice");
  }
  if (pub_ids_.contains(raw.pub_id)) return reject(Errc::DuplicatePubId, "pub_id already seen");
  pub_ids_.insert(raw.pub_id);

  PublicationRecord record;
  record.pub_id = std::move(raw.pub_id);
  record.year = raw.year;
  record.seq = raw.seq;
  record.citations = raw.citations;
  record.doc_type = intern(doc_types_, std::move(raw.doc_type));
  for (auto& field : raw.fields) {
    FieldId id = intern(fields_, std::move(field));
    if (std::find(record.fields.begin(), record.fields.end(), id) == record.fields.end())
      record.fields.push_back(id);
  }
  record.authorships.reserve(raw.authors.size());
  for (auto& author : raw.authors) {
    record.authorships.push_back({intern(authors_, std::move(author.id)), std::move(author.countries)});
  }
  records_.push_back(std::move(record));
  return true;
}

Corpus CorpusBuilder::build() && {
  if (!diagnostics_.empty()) {
    const auto& first = diagnostics_.front();
    throw Error(first.code, format_diagnostic(first));
  }
  return std::move(*this).build_accepted();
}

Corpus CorpusBuilder::build_accepted() && {
  Corpus corpus(std::move(scheme_), window_);
  std::vector<std::uint32_t> author_map, field_map, doc_map;
  corpus.authors_ = sorted_names(authors_, author_map);
  corpus.fields_ = sorted_names(fields_, field_map);
  corpus.doc_types_ = sorted_names(doc_types_, doc_map);
  for (auto& record : records_) {
    record.doc_type = doc_map[record.doc_type];
    for (auto& field : record.fields) field = field_map[field];
    for (auto& authorship : record.authorships) authorship.author = author_map[authorship.author];
  }
  std::sort(records_.begin(), records_.end(), [](const PublicationRecord& a, const PublicationRecord& b) {
    if (a.year != b.year) return a.year < b.year;
    if (a.seq != b.seq) return a.seq < b.seq;
    return a.pub_id < b.pub_id;
  });
  corpus.records_ = std::move(records_);
  return corpus;
}

std::optional<RawRecord> parse_record_line(std::string_view line, std::size_t line_no, Diagnostic& diag) {
  json doc = json::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    diag = malformed(line_no, "", "not a JSON object");
    return std::nullopt;
  }
  std::string pub_id;
  if (auto it = doc.find("pub_id"); it != doc.end() && it->is_string()) pub_id = it->get<std::string>();

  auto fail = [&](std::string message) -> std::optional<RawRecord> {
    diag = malformed(line_no, pub_id, std::move(message));
    return std::nullopt;
  };

  static constexpr std::string_view kKeys[] = {"pub_id", "year", "seq", "fields", "doc_type", "cites", "authors"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      return fail("unexpected key '" + key + "'");
  }
  for (std::string_view key : kKeys) {
    if (key != "seq" && !doc.contains(key)) return fail("missing key '" + std::string(key) + "'");
  }

  RawRecord record;
  if (!doc["pub_id"].is_string()) return fail("'pub_id' must be a string");
  record.pub_id = std::move(pub_id);
  if (!doc["year"].is_number_integer()) return fail("'year' must be an integer");
  record.year = doc["year"].get<int>();
  if (doc.contains("seq")) {
    if (!doc["seq"].is_number_integer()) return fail("'seq' must be an integer");
    record.seq = doc["seq"].get<int>();
  }
  if (!doc["fields"].is_array()) return fail("'fields' must be an array");
  for (const auto& field : doc["fields"]) {
    if (!field.is_string()) return fail("'fields' entries must be strings");
    record.fields.push_back(field.get<std::string>());
  }
  if (!doc["doc_type"].is_string()) return fail("'doc_type' must be a string");
  record.doc_type = doc["doc_type"].get<std::string>();
  if (!doc["cites"].is_number_integer()) return fail("'cites' must be an integer");
  record.citations = doc["cites"].get<std::int64_t>();
  if (!doc["authors"].is_array()) return fail("'authors' must be an array");
  for (const auto& author : doc["authors"]) {
    if (!author.is_object() || author.size() != 2 || !author.contains("id") || !author.contains("countries"))
      return fail("authors must be objects with exactly 'id' and 'countries'");
    if (!author["id"].is_string()) return fail("author 'id' must be a string");
    if (!author["countries"].is_array()) return fail("author 'countries' must be an array");
    RawRecord::Author parsed{author["id"].get<std::string>(), {}};
    for (const auto& code : author["countries"]) {
      auto cc = code.is_string() ? CountryCode::parse(code.get<std::string>()) : std::nullopt;
      if (!cc) return fail("invalid country code in author '" + parsed.id + "'");
      parsed.countries.push_back(*cc);
    }
    record.authors.push_back(std::move(parsed));
  }
  return record;
}

ParseResult try_parse_corpus(std::istream& in, const RegionScheme& scheme, const ParseOptions& options) {
  CorpusBuilder builder(scheme, options.window);
  std::vector<std::string> lines;
  std::vector<std::optional<RawRecord>> parsed;
  std::vector<Diagnostic> errors;
  std::size_t line_base = 0;

  auto flush = [&] {
    parsed.assign(lines.size(), std::nullopt);
    errors.assign(lines.size(), Diagnostic{});
    parallel_chunks(lines.size(), options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        if (is_blank(lines[i])) continue;
        parsed[i] = parse_record_line(lines[i], line_base + i + 1, errors[i]);
        if (!parsed[i]) errors[i].line = line_base + i + 1;
      }
    });
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (parsed[i]) {
        builder.add(std::move(*parsed[i]), line_base + i + 1);
      } else if (errors[i].line != 0) {
        builder.add_diagnostic(std::move(errors[i]));
      }
    }
    line_base += lines.size();
    lines.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    lines.push_back(std::move(line));
    if (lines.size() == kParseChunkLines) flush();
  }
  flush();

  ParseResult result;
  result.diagnostics = builder.diagnostics();
  if (result.diagnostics.empty()) result.corpus = std::move(builder).build_accepted();
  return result;
}

Corpus parse_corpus(std::istream& in, const RegionScheme& scheme, const ParseOptions& options) {
  auto result = try_parse_corpus(in, scheme, options);
  if (!result.corpus) {
    const auto& first = result.diagnostics.front();
    throw Error(first.code, format_diagnostic(first));
  }
  return std::move(*result.corpus);
}

std::string record_to_json(const Corpus& corpus, const PublicationRecord& record) {
  ordered_json doc;
  doc["pub_id"] = record.pub_id;
  doc["year"] = record.year;
  doc["seq"] = record.seq;
  doc["fields"] = ordered_json::array();
  for (FieldId field : record.fields) doc["fields"].push_back(corpus.field_name(field));
  doc["doc_type"] = corpus.doc_type_name(record.doc_type);
  doc["cites"] = record.citations;
  doc["authors"] = ordered_json::array();
  for (const auto& authorship : record.authorships) {
    ordered_json author;
    author["id"] = corpus.author_name(authorship.author);
    author["countries"] = ordered_json::array();
    for (const auto& code : authorship.countries) author["countries"].push_back(code.str());
    doc["authors"].push_back(std::move(author));
  }
  return doc.dump();
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& record : corpus.records()) out << record_to_json(corpus, record) << '\n';
}

RawRecord to_raw(const Corpus& corpus, const PublicationRecord& record) {
  RawRecord raw;
  raw.pub_id = record.pub_id;
  raw.year = record.year;
  raw.seq = record.seq;
  for (FieldId field : record.fields) raw.fields.emplace_back(corpus.field_name(field));
  raw.doc_type = corpus.doc_type_name(record.doc_type);
  raw.citations = record.citations;
  for (const auto& authorship : record.authorships)
    raw.authors.push_back({std::string(corpus.author_name(authorship.author)), authorship.countries});
  return raw;
}

}  // namespace careertrace
