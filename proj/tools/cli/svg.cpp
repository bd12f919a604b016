#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace careertrace::cli {

namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 70, kRight = 190, kTop = 40, kBottom = 100;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  if (std::abs(v) >= 1000 || v == std::floor(v)) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.3g", v);
  }
  return buf;
}

// "nice" upper bound and step for an axis starting at zero
std::pair<double, double> nice_axis(double max) {
  if (!(max > 0)) return {1.0, 0.25};
  const double raw = max / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  return {std::ceil(max / step) * step, step};
}

class Canvas {
 public:
  Canvas(const std::string& title, const std::string& y_label) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
         << "</text>\n"
         << "<text transform=\"translate(16," << num(kTop + plot_h() / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
         << escape(y_label) << "</text>\n";
  }

  static double plot_w() { return kWidth - kLeft - kRight; }
  static double plot_h() { return kHeight - kTop - kBottom; }
  static double y_of(double v, double top) { return kTop + plot_h() * (1.0 - v / top); }

  void y_axis(double top, double step) {
    for (double v = 0; v <= top + step / 2; v += step) {
      const double y = y_of(v, top);
      out_ << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft + plot_w()) << "\" y2=\""
           << num(y) << "\" stroke=\"#ddd\"/>\n"
           << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick_label(v)
           << "</text>\n";
    }
    out_ << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << num(kTop + plot_h())
         << "\" stroke=\"black\"/>\n"
         << "<line x1=\"" << kLeft << "\" y1=\"" << num(kTop + plot_h()) << "\" x2=\"" << num(kLeft + plot_w())
         << "\" y2=\"" << num(kTop + plot_h()) << "\" stroke=\"black\"/>\n";
  }

  void x_label(double x, const std::string& text, bool slanted = false) {
    const double y = kTop + plot_h() + 18;
    if (slanted) {
      out_ << "<text transform=\"translate(" << num(x) << ',' << num(y - 6) << ") rotate(-35)\" text-anchor=\"end\">"
           << escape(text) << "</text>\n";
      return;
    }
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"middle\">" << escape(text)
         << "</text>\n";
  }

  void legend(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      const double y = kTop + 10 + 18.0 * static_cast<double>(i);
      out_ << "<rect x=\"" << num(kLeft + plot_w() + 14) << "\" y=\"" << num(y - 9) << "\" width=\"12\" height=\"12\" fill=\""
           << color(i) << "\"/>\n"
           << "<text x=\"" << num(kLeft + plot_w() + 32) << "\" y=\"" << num(y + 1) << "\">" << escape(names[i])
           << "</text>\n";
    }
  }

  static const char* color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }
  std::ostringstream& raw() { return out_; }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

}  // namespace

std::string line_chart(const std::string& title, const std::string& y_label, const std::vector<LineSeries>& series) {
  Canvas canvas(title, y_label);
  double x_min = 0, x_max = 1, y_max = 0;
  bool first = true;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      x_min = first ? x : std::min(x_min, x);
      x_max = first ? x : std::max(x_max, x);
      y_max = std::max(y_max, y);
      first = false;
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  auto [top, step] = nice_axis(y_max);
  canvas.y_axis(top, step);
  auto x_of = [&](double x) { return kLeft + Canvas::plot_w() * (x - x_min) / (x_max - x_min); };
  const int span = static_cast<int>(x_max - x_min);
  const int every = std::max(1, span / 10);
  for (int i = 0; i <= span; i += every) canvas.x_label(x_of(x_min + i), tick_label(x_min + i));

  std::vector<std::string> names;
  for (std::size_t i = 0; i < series.size(); ++i) {
    names.push_back(series[i].name);
    if (series[i].points.empty()) continue;
    canvas.raw() << "<polyline fill=\"none\" stroke=\"" << Canvas::color(i) << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < series[i].points.size(); ++k) {
      const auto [x, y] = series[i].points[k];
      canvas.raw() << (k ? " " : "") << num(x_of(x)) << ',' << num(Canvas::y_of(y, top));
    }
    canvas.raw() << "\"/>\n";
  }
  canvas.legend(names);
  return canvas.finish();
}

std::string bar_chart(const std::string& title, const std::string& y_label, const std::vector<std::string>& series,
                      const std::vector<BarGroup>& groups, bool stacked) {
  Canvas canvas(title, y_label);
  double y_max = 0;
  for (const auto& g : groups) {
    double sum = 0;
    for (double v : g.values) {
      y_max = std::max(y_max, v);
      sum += v;
    }
    if (stacked) y_max = std::max(y_max, sum);
  }
  auto [top, step] = nice_axis(y_max);
  canvas.y_axis(top, step);
  if (!groups.empty()) {
    const double slot = Canvas::plot_w() / static_cast<double>(groups.size());
    const double inner = slot * 0.8;
    const double bars = stacked ? 1.0 : static_cast<double>(std::max<std::size_t>(series.size(), 1));
    const double bar_w = inner / bars;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const double x0 = kLeft + slot * static_cast<double>(g) + slot * 0.1;
      double base = 0;
      for (std::size_t s = 0; s < groups[g].values.size(); ++s) {
        const double v = groups[g].values[s];
        const double x = stacked ? x0 : x0 + bar_w * static_cast<double>(s);
        const double y_top = Canvas::y_of(base + v, top);
        const double y_bottom = Canvas::y_of(base, top);
        canvas.raw() << "<rect x=\"" << num(x) << "\" y=\"" << num(y_top) << "\" width=\"" << num(bar_w)
                     << "\" height=\"" << num(y_bottom - y_top) << "\" fill=\"" << Canvas::color(s) << "\"/>\n";
        if (stacked) base += v;
      }
      canvas.x_label(x0 + inner / 2, groups[g].label, groups.size() > 5);
    }
  }
  canvas.legend(series);
  return canvas.finish();
}

}  // namespace careertrace::cli
