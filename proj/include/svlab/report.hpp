#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "svlab/estimators.hpp"

namespace svlab {

// Row-oriented CSV with a fixed header. Numbers use the shortest round-trip form, so equal
// inputs always produce equal bytes.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& cell(const std::string& s);
  CsvTable& cell(double v);
  CsvTable& cell(std::size_t v);
  void end_row();

  std::string str() const;
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> current_;
  std::string body_;
  std::size_t rows_ = 0;
};

// (kind, delta, value, std_err, n_paths); skipped scales are omitted.
void append_curve(CsvTable& table, const ModulusCurve& curve);
CsvTable curve_table();

// (kind, window_lo, window_hi, slope, slope_stderr, r_squared); the window is reported as the
// first and last abscissa used by the fit.
CsvTable fit_table();
void append_fit(CsvTable& table, const std::string& kind, const RateFit& fit, const std::vector<double>& xs);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Log-log chart of the positive points of each series. A dashed guide of slope ref_slope is
// anchored at the first point of the first series.
std::string loglog_svg(const std::string& title, const std::vector<PlotSeries>& series,
                       std::optional<double> ref_slope);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace svlab
