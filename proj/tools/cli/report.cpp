#include "cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "careertrace/error.hpp"
#include "careertrace/tables.hpp"
#include "cli/session.hpp"
#include "cli/svg.hpp"

namespace careertrace::cli {

namespace {

struct Row {
  std::string population;
  std::optional<int> year;
  std::string metric;
  std::string counting;
  double value = 0;
};

std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path,
                                                 const std::vector<std::string>& header) {
  auto rows = parse_csv(read_file(path.string()));
  if (rows.empty() || rows.front() != header) throw Error(Errc::MalformedLine, path.string() + ": unexpected header");
  rows.erase(rows.begin());
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw Error(Errc::MalformedLine, path.string() + ": wrong column count");
  }
  return rows;
}

int to_int(const std::string& text, const std::filesystem::path& path) {
  int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw Error(Errc::MalformedLine, path.string() + ": bad integer '" + text + "'");
  return value;
}

std::optional<std::vector<Row>> read_indicators(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::vector<Row> rows;
  for (auto& r : read_table(path, {"population", "year", "metric", "counting", "value"})) {
    Row row{r[0], std::nullopt, r[2], r[3], 0};
    if (r[1] != "all") row.year = to_int(r[1], path);
    row.value = std::stod(r[4]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string strip(const std::string& population) {
  const auto colon = population.find(':');
  return colon == std::string::npos ? population : population.substr(colon + 1);
}

bool is_class(const std::string& population, std::string_view kind) {
  return population.rfind("CLASS:" + std::string(kind) + "(", 0) == 0;
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

std::string percent(double v) { return fmt(100.0 * v, 1) + "%"; }

/// Year series of `metric` under `counting`, one per population passing `keep`.
template <class Keep>
std::vector<LineSeries> year_series(const std::vector<Row>& rows, const std::string& metric,
                                    const std::string& counting, Keep keep) {
  std::map<std::string, LineSeries> by_population;
  for (const auto& r : rows) {
    if (!r.year || r.metric != metric || r.counting != counting || !keep(r.population)) continue;
    auto& s = by_population[r.population];
    s.name = flow_label(strip(r.population));
    s.points.emplace_back(*r.year, r.value);
  }
  std::vector<LineSeries> out;
  for (auto& [key, s] : by_population) {
    std::sort(s.points.begin(), s.points.end());
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<double> pooled(const std::vector<Row>& rows, const std::string& population, const std::string& metric,
                             const std::string& counting) {
  for (const auto& r : rows) {
    if (!r.year && r.population == population && r.metric == metric && r.counting == counting) return r.value;
  }
  return std::nullopt;
}

std::vector<std::string> populations(const std::vector<Row>& rows, const std::string& metric) {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (r.metric == metric && std::find(out.begin(), out.end(), r.population) == out.end()) out.push_back(r.population);
  }
  return out;
}

}  // namespace

std::string flow_label(const std::string& cls) {
  const auto open = cls.find('(');
  if (open == std::string::npos || cls.back() != ')') return cls;
  const std::string kind = cls.substr(0, open);
  const std::string args = cls.substr(open + 1, cls.size() - open - 2);
  const auto comma = args.find(',');
  auto name = [](std::string r) { return r == "*" ? std::string("ALL") : r; };
  if (kind == "Domestic" && comma == std::string::npos) return name(args);
  if (comma == std::string::npos) return cls;
  const std::string a = name(args.substr(0, comma));
  const std::string b = name(args.substr(comma + 1));
  if (kind == "Overseas") return a + "->" + b;
  if (kind == "ReturneeResident") return b + "->" + a;
  if (kind == "ReturneeAbroad") return a + "->" + b + " (returnee abroad)";
  return cls;
}

std::vector<std::string> write_report(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> files;
  std::ostringstream md;
  auto emit = [&](const std::string& name, const std::string& svg, const std::string& caption) {
    write_file((out_dir / name).string(), svg);
    files.push_back(name);
    md << "![" << caption << "](" << name << ")\n\n";
  };

  md << "# careertrace report\n\n";
  md << "Indicator tables from `" << in_dir.filename().string() << "`. Shares use fractional counting unless noted.\n\n";

  if (auto copub = read_indicators(in_dir / "copub.csv")) {
    md << "## International co-publications by region pair\n\n";
    emit("fig1_copub.svg",
         line_chart("International co-publications (full counting)", "publications",
                    year_series(*copub, "copub_output", "full", [](const std::string&) { return true; })),
         "co-publications by region pair");
    md << "| pair | total (full) | total (frac) |\n|---|---|---|\n";
    for (const auto& pop : populations(*copub, "copub_output")) {
      md << "| " << strip(pop) << " | " << fmt(pooled(*copub, pop, "copub_output", "full").value_or(0), 0) << " | "
         << fmt(pooled(*copub, pop, "copub_output", "frac").value_or(0), 1) << " |\n";
    }
    md << '\n';
  }

  if (std::filesystem::exists(in_dir / "stocks.csv")) {
    auto rows = read_table(in_dir / "stocks.csv", {"class", "year", "preceding", "new_movement", "total"});
    int first = 0, last = 0;
    bool any = false;
    for (const auto& r : rows) {
      const int y = to_int(r[1], in_dir / "stocks.csv");
      first = any ? std::min(first, y) : y;
      last = any ? std::max(last, y) : y;
      any = true;
    }
    std::vector<BarGroup> groups;
    md << "## Stocks of mobile researchers\n\n";
    md << "| class | year | preceding | new movement | total |\n|---|---|---|---|---|\n";
    for (int year : std::set<int>{first + (last - first) / 2, last}) {
      for (const auto& r : rows) {
        if (to_int(r[1], in_dir / "stocks.csv") != year) continue;
        if (r[0].rfind("Overseas(", 0) != 0 && r[0].rfind("ReturneeResident(", 0) != 0) continue;
        groups.push_back({flow_label(r[0]) + " " + r[1], {std::stod(r[2]), std::stod(r[3])}});
        md << "| " << flow_label(r[0]) << " | " << r[1] << " | " << r[2] << " | " << r[3] << " | " << r[4] << " |\n";
      }
    }
    md << '\n';
    if (any) {
      emit("fig2_stocks.svg",
           bar_chart("Stocks of mobile researchers", "researchers", {"preceding stock", "new movement"}, groups, true),
           "stocks of mobile researchers");
    }
  }

  auto returnee_class = [](const std::string& p) { return is_class(p, "ReturneeResident"); };
  if (auto shares = read_indicators(in_dir / "shares.csv")) {
    md << "## Returnee output\n\n";
    emit("fig3_class_shares.svg",
         line_chart("Returnee output relative to total home output", "share",
                    year_series(*shares, "home_share", "frac", returnee_class)),
         "returnee share of home output");
    emit("fig5_intl_class_shares.svg",
         line_chart("Returnee share of home international co-publications", "share",
                    year_series(*shares, "intl_class_share", "frac", returnee_class)),
         "returnee share of international co-publications");
    md << "| class | home output share | international share |\n|---|---|---|\n";
    for (const auto& pop : populations(*shares, "home_share")) {
      if (!returnee_class(pop)) continue;
      md << "| " << flow_label(strip(pop)) << " | " << percent(pooled(*shares, pop, "home_share", "frac").value_or(0))
         << " | " << percent(pooled(*shares, pop, "intl_class_share", "frac").value_or(0)) << " |\n";
    }
    md << '\n';
  }

  if (auto pp10 = read_indicators(in_dir / "pp10.csv")) {
    md << "## Top-10% publication shares\n\n";
    std::vector<BarGroup> groups;
    md << "| population | PP10 FWCI (frac) | PP10 CITS (frac) | output (frac) |\n|---|---|---|---|\n";
    for (const auto& pop : populations(*pp10, "output")) {
      if (pop.rfind("PAIR:", 0) == 0 || is_class(pop, "Domestic")) continue;
      const double fwci = pooled(*pp10, pop, "pp10_fwci", "frac").value_or(0);
      const double cits = pooled(*pp10, pop, "pp10_cits", "frac").value_or(0);
      groups.push_back({flow_label(strip(pop)), {fwci, cits}});
      md << "| " << flow_label(strip(pop)) << " | " << percent(fwci) << " | " << percent(cits) << " | "
         << fmt(pooled(*pp10, pop, "output", "frac").value_or(0), 1) << " |\n";
    }
    md << '\n';
    emit("fig4_pp10.svg", bar_chart("PP10 by population", "share", {"PP10 FWCI", "PP10 CITS"}, groups, false),
         "PP10 by population");
  }

  if (auto direction = read_indicators(in_dir / "direction.csv")) {
    md << "## Direction of returnee co-publications\n\n";
    std::vector<std::string> partners;
    for (const auto& r : *direction) {
      if (std::find(partners.begin(), partners.end(), r.metric) == partners.end()) partners.push_back(r.metric);
    }
    std::vector<BarGroup> groups;
    md << "| class |";
    for (const auto& p : partners) md << ' ' << p.substr(p.find('_') + 1) << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < partners.size(); ++i) md << "---|";
    md << '\n';
    for (const auto& pop : populations(*direction, partners.empty() ? "" : partners.front())) {
      BarGroup g{flow_label(strip(pop)), {}};
      md << "| " << g.label << " |";
      for (const auto& p : partners) {
        const double v = pooled(*direction, pop, p, "frac").value_or(0);
        g.values.push_back(v);
        md << ' ' << percent(v) << " |";
      }
      md << '\n';
      groups.push_back(std::move(g));
    }
    md << '\n';
    std::vector<std::string> names;
    for (const auto& p : partners) names.push_back("with " + p.substr(p.find('_') + 1));
    emit("fig6_direction.svg", bar_chart("Returnee share of home co-publications by partner", "share", names, groups, false),
         "direction of returnee co-publications");
  }

  write_file((out_dir / "report.md").string(), md.str());
  files.insert(files.begin(), "report.md");
  return files;
}

}  // namespace careertrace::cli
