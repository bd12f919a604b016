#include "cli/session.hpp"

#include <fstream>
#include <sstream>
#include <streambuf>

#include "careertrace/error.hpp"
#include "careertrace/tables.hpp"
#include "cli/hash.hpp"

namespace careertrace::cli {

namespace {

// read-only stream over an existing buffer, avoiding a copy of large corpora
class ViewBuf : public std::streambuf {
 public:
  explicit ViewBuf(std::string& text) { setg(text.data(), text.data(), text.data() + text.size()); }
};

template <class Fn>
std::string render(Fn fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  std::string text;
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  in.seekg(0, std::ios::beg);
  if (size > 0) text.resize(static_cast<std::size_t>(size));
  in.read(text.data(), static_cast<std::streamsize>(text.size()));
  if (!in) throw Error(Errc::Io, "cannot read " + path);
  return text;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(Errc::Io, "cannot write " + path);
}

Session::Session(const std::string& corpus_path, const std::string& scheme_path, PipelineConfig config,
                 Cache& cache, std::ostream& err)
    : config_(std::move(config)), cache_(cache), err_(err) {
  const std::string scheme_text = read_file(scheme_path);
  scheme_sha_ = sha256_hex(scheme_text);
  RegionScheme scheme = RegionScheme::from_json(scheme_text);
  home_ = scheme.require(config_.home);

  std::string text = read_file(corpus_path);
  corpus_sha_ = sha256_hex(text);
  ViewBuf buf(text);
  std::istream in(&buf);
  auto parsed = try_parse_corpus(in, scheme, {config_.window, config_.threads});
  if (!parsed.corpus) {
    for (const auto& diag : parsed.diagnostics) err_ << corpus_path << ": " << format_diagnostic(diag) << '\n';
    throw InvalidCorpus{};
  }
  corpus_ = std::move(parsed.corpus);
}

int Session::end_year() const {
  if (config_.end_year) return *config_.end_year;
  return corpus_->records().empty() ? config_.window.min : corpus_->records().back().year;
}

YearRange Session::stock_years() const {
  if (corpus_->records().empty()) return {};
  return {corpus_->records().front().year, end_year()};
}

std::string Session::key(std::string_view stage) const {
  std::ostringstream id;
  id << "careertrace " << tool_version() << '\n'
     << "corpus " << corpus_sha_ << '\n'
     << "scheme " << scheme_sha_ << '\n'
     << "window " << config_.window.min << ' ' << config_.window.max << '\n'
     << "tie_rule " << to_string(config_.tie_rule) << '\n';
  if (stage != "timelines") {
    id << "home " << config_.home << '\n' << "host_attribution " << to_string(config_.host_attribution) << '\n';
  }
  if (stage == "stocks") {
    id << "end_year " << end_year() << '\n'
       << "grace_years " << config_.grace_years << '\n'
       << "exclude_ambiguous_origin " << config_.exclude_ambiguous_origin << '\n';
  }
  return sha256_hex(id.str());
}

const std::vector<CareerTimeline>& Session::timelines() {
  if (timelines_) return *timelines_;
  const std::string k = key("timelines");
  if (auto cached = cache_.load(k, "timelines")) {
    try {
      timelines_ = read_timelines_csv(*cached, *corpus_);
      stages_.emplace_back("timelines", "cache");
      return *timelines_;
    } catch (const Error& e) {
      cache_.discard(k, "timelines", e.what());
    }
  }
  timelines_ = build_timelines(*corpus_, {config_.tie_rule, config_.threads});
  cache_.store(k, "timelines", render([&](std::ostream& out) { write_timelines_csv(out, *corpus_, *timelines_); }));
  stages_.emplace_back("timelines", "built");
  return *timelines_;
}

const std::vector<AuthorMobility>& Session::mobility() {
  if (mobility_) return *mobility_;
  const std::string k = key("mobility");
  auto moves = cache_.load(k, "moves");
  auto states = moves ? cache_.load(k, "states") : std::nullopt;
  if (moves && states) {
    try {
      mobility_ = read_mobility_csv(*moves, *states, *corpus_);
      stages_.emplace_back("mobility", "cache");
      return *mobility_;
    } catch (const Error& e) {
      cache_.discard(k, "moves", e.what());
      cache_.discard(k, "states", e.what());
    }
  }
  const auto& t = timelines();
  mobility_ = analyze_mobility(t, corpus_->scheme(), {home_, config_.host_attribution, config_.threads});
  cache_.store(k, "moves", render([&](std::ostream& out) { write_moves_csv(out, *corpus_, *mobility_); }));
  cache_.store(k, "states", render([&](std::ostream& out) { write_states_csv(out, *corpus_, *mobility_); }));
  stages_.emplace_back("mobility", "built");
  return *mobility_;
}

const std::vector<StockCell>& Session::stocks() {
  if (stocks_) return *stocks_;
  const std::string k = key("stocks");
  if (auto cached = cache_.load(k, "stocks")) {
    try {
      stocks_ = read_stocks_csv(*cached, corpus_->scheme());
      stages_.emplace_back("stocks", "cache");
      return *stocks_;
    } catch (const Error& e) {
      cache_.discard(k, "stocks", e.what());
    }
  }
  const auto& t = timelines();
  const auto& m = mobility();
  stocks_ = stock_table(t, m, stock_years(),
                        {end_year(), config_.grace_years, config_.exclude_ambiguous_origin, config_.threads});
  cache_.store(k, "stocks", render([&](std::ostream& out) { write_stocks_csv(out, corpus_->scheme(), *stocks_); }));
  stages_.emplace_back("stocks", "built");
  return *stocks_;
}

const IndicatorEngine& Session::engine() {
  if (!engine_) {
    const auto& m = mobility();
    engine_.emplace(*corpus_, m, IndicatorOptions{home_, config_.intl_requires_distinct_authors, config_.threads});
    stages_.emplace_back("indicators", "built");
  }
  return *engine_;
}

Manifest Session::manifest(const std::string& subcommand) const {
  Manifest m;
  m.subcommand = subcommand;
  m.corpus_sha256 = corpus_sha_;
  m.scheme_sha256 = scheme_sha_;
  m.config = to_json(config_);
  m.config["end_year"] = end_year();
  m.stages = stages_;
  return m;
}

}  // namespace careertrace::cli
