#include "cli/app.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "careertrace/error.hpp"
#include "careertrace/synth.hpp"
#include "careertrace/tables.hpp"
#include "cli/cache.hpp"
#include "cli/config.hpp"
#include "cli/hash.hpp"
#include "cli/manifest.hpp"
#include "cli/report.hpp"
#include "cli/session.hpp"

namespace careertrace::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSynopsis =
    "usage: careertrace <subcommand> [options]\n"
    "  validate    <corpus> --scheme FILE\n"
    "  timelines   <corpus> --scheme FILE [-o FILE]\n"
    "  moves       <corpus> --scheme FILE [--home REGION] -o DIR\n"
    "  stocks      <corpus> --scheme FILE [--home REGION] [--end-year Y] [-o FILE]\n"
    "  indicators  <corpus> --scheme FILE [--home REGION] [--metrics LIST] -o DIR\n"
    "  synth       --config FILE [--seed N] -o CORPUS [--truth FILE]\n"
    "  report      <dir> [-o DIR]\n"
    "run 'careertrace <subcommand> --help' for all options\n";

/// Flags shared by the corpus-processing subcommands; unset values leave
/// the config file (or default) in force.
struct PipelineFlags {
  std::string corpus;
  std::string scheme;
  std::optional<std::string> config_file;
  std::optional<std::string> home;
  std::optional<int> end_year;
  std::optional<int> grace_years;
  std::optional<std::string> tie_rule;
  std::optional<std::string> host_attribution;
  std::optional<std::string> metrics;
  std::optional<int> year_min;
  std::optional<int> year_max;
  std::optional<unsigned> threads;
  bool distinct_authors = false;
  bool exclude_ambiguous = false;
  std::string cache_dir = ".careertrace-cache";
  bool no_cache = false;
  std::string output;

  PipelineConfig resolve() const {
    PipelineConfig config;
    if (config_file) apply_config_file(config, *config_file);
    if (home) config.home = *home;
    if (end_year) config.end_year = *end_year;
    if (grace_years) {
      if (*grace_years < 0) throw Error(Errc::InvalidConfig, "--grace-years must be non-negative");
      config.grace_years = *grace_years;
    }
    if (tie_rule) config.tie_rule = parse_tie_rule(*tie_rule);
    if (host_attribution) config.host_attribution = parse_host_attribution(*host_attribution);
    if (metrics) config.metrics = parse_metrics(*metrics);
    if (year_min) config.window.min = *year_min;
    if (year_max) config.window.max = *year_max;
    if (threads) config.threads = *threads;
    if (distinct_authors) config.intl_requires_distinct_authors = true;
    if (exclude_ambiguous) config.exclude_ambiguous_origin = true;
    if (config.window.min > config.window.max) throw Error(Errc::InvalidConfig, "year_min exceeds year_max");
    return config;
  }
};

CLI::App* pipeline_command(CLI::App& app, const std::string& name, const std::string& description, PipelineFlags& f) {
  auto* sub = app.add_subcommand(name, description);
  sub->add_option("corpus", f.corpus, "line-delimited corpus file")->required();
  sub->add_option("--scheme", f.scheme, "region scheme file")->required();
  sub->add_option("--config", f.config_file, "JSON config file (flags take precedence)");
  sub->add_option("--year-min", f.year_min, "earliest accepted publication year");
  sub->add_option("--year-max", f.year_max, "latest accepted publication year");
  sub->add_option("--threads", f.threads, "worker threads (0: all cores)");
  sub->add_option("--tie-rule", f.tie_rule, "hysteresis | label_order");
  if (name == "validate" || name == "timelines") return sub;
  sub->add_option("--home", f.home, "home region label (default CHN)");
  sub->add_option("--host-attribution", f.host_attribution, "first | latest");
  sub->add_option("--cache-dir", f.cache_dir, "intermediate table cache")->capture_default_str();
  sub->add_flag("--no-cache", f.no_cache, "neither read nor write the cache");
  if (name == "moves") return sub;
  sub->add_option("--end-year", f.end_year, "last observed year (default: latest record year)");
  sub->add_option("--grace-years", f.grace_years, "trailing silent years still counted (default 2)");
  sub->add_flag("--exclude-ambiguous-origin", f.exclude_ambiguous, "leave tied-origin authors out of stocks");
  if (name == "stocks") return sub;
  sub->add_option("--metrics", f.metrics, "comma-separated: pp10,shares,direction,copub,stocks");
  sub->add_flag("--intl-requires-distinct-authors", f.distinct_authors,
                "international only when two different authorships bring the countries");
  return sub;
}

template <class Fn>
std::string render(Fn fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create directory " + dir.string() + ": " + ec.message());
}

/// Writes a single-table output file (or stdout) plus the manifest next to it.
void emit_table(const std::string& output, const std::string& table, Manifest manifest, std::ostream& out) {
  if (output.empty() || output == "-") {
    out << table;
    return;
  }
  const fs::path path(output);
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  ensure_dir(dir);
  write_file(path.string(), table);
  manifest.write(dir, {path.filename().string()});
}

int cmd_validate(PipelineFlags& f, std::ostream& out, std::ostream& err) {
  const auto config = f.resolve();
  Cache cache({}, false, err);
  Session session(f.corpus, f.scheme, config, cache, err);
  const auto& corpus = session.corpus();
  out << "valid: " << corpus.records().size() << " records, " << corpus.author_count() << " authors\n";
  return 0;
}

int cmd_timelines(PipelineFlags& f, std::ostream& out, std::ostream& err) {
  Cache cache({}, false, err);
  Session session(f.corpus, f.scheme, f.resolve(), cache, err);
  const auto& timelines = session.timelines();
  emit_table(f.output, render([&](std::ostream& o) { write_timelines_csv(o, session.corpus(), timelines); }),
             session.manifest("timelines"), out);
  return 0;
}

int cmd_moves(PipelineFlags& f, std::ostream&, std::ostream& err) {
  Cache cache(f.cache_dir, !f.no_cache, err);
  Session session(f.corpus, f.scheme, f.resolve(), cache, err);
  const auto& mobility = session.mobility();
  const fs::path dir(f.output);
  ensure_dir(dir);
  write_file((dir / "moves.csv").string(),
             render([&](std::ostream& o) { write_moves_csv(o, session.corpus(), mobility); }));
  write_file((dir / "states.csv").string(),
             render([&](std::ostream& o) { write_states_csv(o, session.corpus(), mobility); }));
  write_file((dir / "returnee_origins.csv").string(), render([&](std::ostream& o) {
               write_returnee_origins_csv(o, session.corpus(), returnee_origins(mobility));
             }));
  session.manifest("moves").write(dir, {"moves.csv", "states.csv", "returnee_origins.csv"});
  return 0;
}

int cmd_stocks(PipelineFlags& f, std::ostream& out, std::ostream& err) {
  Cache cache(f.cache_dir, !f.no_cache, err);
  Session session(f.corpus, f.scheme, f.resolve(), cache, err);
  const auto& cells = session.stocks();
  emit_table(f.output, render([&](std::ostream& o) { write_stocks_csv(o, session.corpus().scheme(), cells); }),
             session.manifest("stocks"), out);
  return 0;
}

int cmd_indicators(PipelineFlags& f, std::ostream&, std::ostream& err) {
  Cache cache(f.cache_dir, !f.no_cache, err);
  Session session(f.corpus, f.scheme, f.resolve(), cache, err);
  const fs::path dir(f.output);
  ensure_dir(dir);
  std::vector<std::string> files;
  std::vector<std::string> families;
  for (const auto& m : session.config().metrics) {
    if (m != "stocks") families.push_back(m);
  }
  if (!families.empty()) {
    const auto rows = indicator_table(session.engine(), families);
    for (const auto& family : families) {
      const std::string name = family + ".csv";
      write_file((dir / name).string(), render([&](std::ostream& o) { write_indicator_csv(o, rows, family); }));
      files.push_back(name);
    }
  }
  const auto& metrics = session.config().metrics;
  if (std::find(metrics.begin(), metrics.end(), "stocks") != metrics.end()) {
    const auto& cells = session.stocks();
    write_file((dir / "stocks.csv").string(),
               render([&](std::ostream& o) { write_stocks_csv(o, session.corpus().scheme(), cells); }));
    files.push_back("stocks.csv");
  }
  session.manifest("indicators").write(dir, files);
  return 0;
}

struct SynthFlags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::optional<std::string> truth;
  double gap = 0.0;
  double dual = 0.0;
  std::optional<std::uint64_t> noise_seed;
};

int cmd_synth(SynthFlags& f, std::ostream&, std::ostream&) {
  auto doc = nlohmann::ordered_json::parse(read_file(f.config_file), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(Errc::InvalidConfig, "synth config is not a JSON object");
  if (f.seed) doc["seed"] = *f.seed;
  const fs::path config_path(f.config_file);
  auto scenario = parse_scenario_config(doc.dump(), config_path.parent_path());
  if (!(f.gap >= 0.0 && f.gap <= 1.0) || !(f.dual >= 0.0 && f.dual <= 1.0))
    throw Error(Errc::InvalidConfig, "--gap and --dual must lie in [0, 1]");

  auto result = generate(scenario);
  const NoiseConfig noise{f.gap, f.dual, f.noise_seed.value_or(scenario.seed)};
  std::optional<Corpus> degraded;
  if (noise.gap_probability > 0.0 || noise.dual_affiliation_probability > 0.0)
    degraded = degrade(result.corpus, result.truth, noise);
  const Corpus& corpus = degraded ? *degraded : result.corpus;

  const fs::path path(f.output);
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  ensure_dir(dir);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    write_corpus(out, corpus);
    if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  }
  std::vector<std::string> files{path.filename().string()};
  if (f.truth) {
    const fs::path truth_path(*f.truth);
    ensure_dir(truth_path.parent_path());
    std::ofstream out(truth_path, std::ios::binary | std::ios::trunc);
    write_truth(out, result.truth, corpus.scheme());
    if (!out) throw Error(Errc::Io, "cannot write " + truth_path.string());
    if (fs::absolute(truth_path).parent_path() == fs::absolute(dir)) files.push_back(truth_path.filename().string());
  }

  Manifest manifest;
  manifest.subcommand = "synth";
  manifest.corpus_sha256 = sha256_hex(read_file(path.string()));
  manifest.scheme_sha256 = sha256_hex(corpus.scheme().to_json());
  manifest.config = doc;
  manifest.config["noise"] = {{"gap_probability", noise.gap_probability},
                              {"dual_affiliation_probability", noise.dual_affiliation_probability},
                              {"seed", noise.seed}};
  manifest.stages = {{"generate", "built"}};
  if (degraded) manifest.stages.emplace_back("degrade", "built");
  manifest.write(dir, files);
  return 0;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir, std::ostream& out) {
  if (!fs::is_directory(in_dir)) throw Error(Errc::Io, "not a directory: " + in_dir);
  const fs::path target = out_dir.empty() ? fs::path(in_dir) : fs::path(out_dir);
  for (const auto& name : write_report(in_dir, target)) out << (target / name).string() << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Researcher mobility and bibliometric indicators from publication records", "careertrace");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", tool_version());

  PipelineFlags flags;
  auto* validate = pipeline_command(app, "validate", "check a corpus and report every invalid line", flags);
  auto* timelines = pipeline_command(app, "timelines", "per-author yearly positions", flags);
  timelines->add_option("-o,--output", flags.output, "output table (default: stdout)");
  auto* moves = pipeline_command(app, "moves", "move events and yearly mobility classes", flags);
  moves->add_option("-o,--output", flags.output, "output directory")->required();
  auto* stocks = pipeline_command(app, "stocks", "yearly stocks per mobility class", flags);
  stocks->add_option("-o,--output", flags.output, "output table (default: stdout)");
  auto* indicators = pipeline_command(app, "indicators", "indicator tables per metric family", flags);
  indicators->add_option("-o,--output", flags.output, "output directory")->required();

  SynthFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
  synth->add_option("--config", synth_flags.config_file, "scenario JSON file")->required();
  synth->add_option("--seed", synth_flags.seed, "overrides the config seed");
  synth->add_option("-o,--output", synth_flags.output, "corpus output file")->required();
  synth->add_option("--truth", synth_flags.truth, "ground-truth output file");
  synth->add_option("--gap", synth_flags.gap, "probability of dropping an author-year");
  synth->add_option("--dual", synth_flags.dual, "probability of adding a guest affiliation");
  synth->add_option("--noise-seed", synth_flags.noise_seed, "noise seed (default: scenario seed)");

  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "markdown report and SVG charts from indicator tables");
  report->add_option("dir", report_in, "directory written by 'indicators'")->required();
  report->add_option("-o,--output", report_out, "output directory (default: the input directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "careertrace: " << e.what() << '\n' << kSynopsis;
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(flags, out, err);
    if (timelines->parsed()) return cmd_timelines(flags, out, err);
    if (moves->parsed()) return cmd_moves(flags, out, err);
    if (stocks->parsed()) return cmd_stocks(flags, out, err);
    if (indicators->parsed()) return cmd_indicators(flags, out, err);
    if (synth->parsed()) return cmd_synth(synth_flags, out, err);
    if (report->parsed()) return cmd_report(report_in, report_out, out);
  } catch (const InvalidCorpus&) {
    return 1;
  } catch (const Error& e) {
    err << "careertrace: " << e.what() << '\n';
    return e.code() == Errc::InvalidConfig || e.code() == Errc::HomeMismatch ? 2 : 1;
  } catch (const std::exception& e) {
    err << "careertrace: " << e.what() << '\n';
    return 1;
  }
  err << kSynopsis;
  return 2;
}

}  // namespace careertrace::cli
