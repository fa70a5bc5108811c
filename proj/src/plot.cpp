#include "epinet/plot.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include "epinet/error.hpp"
#include "epinet/text.hpp"

namespace epinet {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// 1, 2 or 5 times a power of ten, giving about `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string tick_label(double v, double step) {
  return step >= 1.0 ? fixed(v, 0) : fixed(v, static_cast<int>(std::ceil(-std::log10(step))));
}

}  // namespace

std::string render_line_chart(const std::vector<LineSeries>& series, const ChartLabels& labels) {
  const double width = 720, height = 460, left = 80, right = 180, top = 40, bottom = 60;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!any) {
        x0 = x1 = x;
        y1 = y;
        any = true;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  y0 = 0;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const double xstep = nice_step(x1 - x0, 8), ystep = nice_step(y1 - y0, 6);
  x0 = std::floor(x0 / xstep) * xstep;
  x1 = std::ceil(x1 / xstep) * xstep;
  y1 = std::ceil(y1 / ystep) * ystep;

  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(labels.title) << "</text>\n";

  for (double x = x0; x <= x1 + 1e-9 * xstep; x += xstep) {
    svg << "<line x1=\"" << fixed(px(x), 2) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(px(x), 2) << "\" y2=\""
        << top + ph + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fixed(px(x), 2) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << tick_label(x, xstep) << "</text>\n";
  }
  for (double y = y0; y <= y1 + 1e-9 * ystep; y += ystep) {
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(py(y), 2) << "\" x2=\"" << left + pw << "\" y2=\""
        << fixed(py(y), 2) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << fixed(py(y) + 4, 2) << "\" text-anchor=\"end\">"
        << tick_label(y, ystep) << "</text>\n";
  }
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">"
      << escape(labels.x) << "</text>\n"
      << "<text transform=\"translate(20," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(labels.y) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = kPalette[k % std::size(kPalette)];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[k].points) svg << fixed(px(x), 2) << ',' << fixed(py(y), 2) << ' ';
    svg << "\"/>\n";
    const double ly = top + 16 + 18.0 * static_cast<double>(k);
    svg << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
        << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape(series[k].name) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::map<std::string, std::string>> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("csv: empty input");
  const auto header = split(line);
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw Error("csv: row has " + std::to_string(cells.size()) + " cells, "
                                                   "header has " + std::to_string(header.size()));
    auto& row = rows.emplace_back();
    for (std::size_t k = 0; k < header.size(); ++k) row[header[k]] = cells[k];
  }
  return rows;
}

std::vector<LineSeries> budget_series(const std::vector<std::map<std::string, std::string>>& aggregate,
                                      const std::string& mu) {
  std::vector<LineSeries> out;
  for (const auto& row : aggregate) {
    if (row.at("mu") != mu || row.at("f") == "unlimited") continue;
    const auto& name = row.at("strategy");
    if (name == "none") continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const LineSeries& s) { return s.name == name; });
    if (it == out.end()) it = out.insert(out.end(), LineSeries{name, {}});
    it->points.emplace_back(100.0 * std::stod(row.at("f")), std::stod(row.at("total_infected_mean")));
  }
  return out;
}

std::vector<LineSeries> evolution_series(const std::vector<std::map<std::string, std::string>>& series) {
  std::vector<LineSeries> out;
  for (const auto& row : series) {
    const auto& name = row.at("strategy");
    auto it = std::find_if(out.begin(), out.end(), [&](const LineSeries& s) { return s.name == name; });
    if (it == out.end()) it = out.insert(out.end(), LineSeries{name, {}});
    it->points.emplace_back(std::stod(row.at("round")), std::stod(row.at("infected_mean")));
  }
  return out;
}

}  // namespace epinet
