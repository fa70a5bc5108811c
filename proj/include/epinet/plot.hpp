#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace epinet {

struct LineSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct ChartLabels {
  std::string title;
  std::string x;
  std::string y;
};

/// Minimal SVG line chart with linear axes, ticks and a legend.
std::string render_line_chart(const std::vector<LineSeries>& series, const ChartLabels& labels);

/// Rows of a headered CSV file as column-name -> value maps.
std::vector<std::map<std::string, std::string>> read_csv(std::istream& in);

/// Total infected (mean) against percentage removed, one series per
/// strategy, from aggregate CSV rows of a single mu.
std::vector<LineSeries> budget_series(const std::vector<std::map<std::string, std::string>>& aggregate,
                                      const std::string& mu);

/// Infected (mean) per round, one series per strategy.
std::vector<LineSeries> evolution_series(const std::vector<std::map<std::string, std::string>>& series);

}  // namespace epinet
