#include "gtvc/plots.hpp"

#include "gtvc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gtvc {

namespace {

constexpr double kWidth = 640, kHeight = 440, kMargin = 60;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

std::string line_chart(const std::vector<Series>& series, const std::string& title, const std::string& ylabel) {
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
  if (ymax - ymin < 1e-12) ymin -= 0.5 * std::max(1e-3, std::abs(ymin)), ymax += 0.5 * std::max(1e-3, std::abs(ymax));
  auto px = [&](double x) { return kMargin + (std::log10(x) - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
  auto py = [&](double y) { return kHeight - kMargin - (y - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
     << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\" font-size=\"13\">n (log scale)</text>\n";
  os << "<text x=\"15\" y=\"" << kHeight / 2 << "\" font-size=\"13\" transform=\"rotate(-90 15 " << kHeight / 2
     << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  os << "<text x=\"" << kMargin - 5 << "\" y=\"" << py(ymin) << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(ymin)
     << "</text>\n";
  os << "<text x=\"" << kMargin - 5 << "\" y=\"" << py(ymax) << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(ymax)
     << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    const auto& pts = series[k].points;
    if (pts.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (auto [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
      os << "\"/>\n";
    }
    for (auto [x, y] : pts) {
      os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
      os << "<text x=\"" << px(x) << "\" y=\"" << kHeight - kMargin + 15 << "\" text-anchor=\"middle\" font-size=\"11\">"
         << fmt(x) << "</text>\n";
    }
    os << "<text x=\"" << kWidth - kMargin + 5 << "\" y=\"" << kMargin + 16 * k << "\" font-size=\"12\" fill=\"" << color
       << "\">" << series[k].name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<Series> medians(const RegimeReport& report, const std::vector<std::string>& keep,
                            double (*metric)(const RegimeRow&)) {
  std::vector<Series> out;
  for (const auto& name : keep) {
    std::map<std::size_t, std::vector<double>> by_n;
    for (const auto& row : report.rows)
      if (to_string(row.regime) == name) by_n[row.n].push_back(metric(row));
    Series s{name, {}};
    for (auto& [n, values] : by_n) s.points.emplace_back(static_cast<double>(n), median(values));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<std::string> emit_plots(const RegimeReport& report, const std::string& out_dir,
                                    const std::vector<std::string>& regime_filter) {
  if (report.rows.empty()) throw std::invalid_argument("report has no rows");
  const auto available = report.regimes();
  std::vector<std::string> keep;
  for (const auto& name : available)
    if (regime_filter.empty() || std::find(regime_filter.begin(), regime_filter.end(), name) != regime_filter.end())
      keep.push_back(name);
  if (keep.empty()) {
    std::string list;
    for (const auto& name : available) list += (list.empty() ? "" : ", ") + name;
    throw std::invalid_argument("no rows match the regime filter; available regimes: " + list);
  }

  const std::string excess = out_dir + "/excess_risk_vs_n.svg";
  const std::string disagreement = out_dir + "/disagreement_vs_n.svg";
  write_text(line_chart(medians(report, keep, [](const RegimeRow& r) { return r.excess_risk; }),
                        "Excess test risk (median over seeds)", "test risk - Bayes risk"),
             excess);
  write_text(line_chart(medians(report, keep, [](const RegimeRow& r) { return 1.0 - r.bayes_agreement; }),
                        "Disagreement with the Bayes classifier", "1 - agreement"),
             disagreement);
  return {excess, disagreement};
}

void emit_scatter(const LabeledCloud& cloud, std::span<const double> values, const std::string& title,
                  const std::string& path) {
  if (cloud.dim != 2) throw std::invalid_argument("scatter plots need 2-D points");
  if (values.size() != cloud.size()) throw std::invalid_argument("scatter: value count does not match the cloud");
  double lo[2] = {INFINITY, INFINITY}, hi[2] = {-INFINITY, -INFINITY};
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (int k = 0; k < 2; ++k) {
      lo[k] = std::min(lo[k], cloud.points[2 * i + k]);
      hi[k] = std::max(hi[k], cloud.points[2 * i + k]);
    }
  const double side = kHeight - 2 * kMargin;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side + 2 * kMargin << "\" height=\"" << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << (side + 2 * kMargin) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
     << "</text>\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double x = kMargin + (cloud.points[2 * i] - lo[0]) / std::max(hi[0] - lo[0], 1e-12) * side;
    const double y = kHeight - kMargin - (cloud.points[2 * i + 1] - lo[1]) / std::max(hi[1] - lo[1], 1e-12) * side;
    const double v = std::clamp(values[i], 0.0, 1.0);
    const int red = static_cast<int>(std::lround(255 * v));
    const int blue = 255 - red;
    char color[8];
    std::snprintf(color, sizeof color, "#%02x30%02x", red, blue);
    os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"1.5\" fill=\"" << color << "\"/>\n";
  }
  os << "</svg>\n";
  write_text(os.str(), path);
}

}  // namespace gtvc
