#include "svlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "svlab/config.hpp"
#include "svlab/error.hpp"

namespace svlab {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::cell(const std::string& s) {
  current_.push_back(s);
  return *this;
}

CsvTable& CsvTable::cell(double v) { return cell(format_double(v)); }

CsvTable& CsvTable::cell(std::size_t v) { return cell(std::to_string(v)); }

void CsvTable::end_row() {
  if (current_.size() != header_.size()) {
    throw InvalidInput("csv row has " + std::to_string(current_.size()) + " cells, header has " +
                       std::to_string(header_.size()));
  }
  for (std::size_t i = 0; i < current_.size(); ++i) {
    if (i) body_ += ',';
    body_ += current_[i];
  }
  body_ += '\n';
  current_.clear();
  ++rows_;
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  return out + body_;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw InvalidInput("write to '" + path.string() + "' failed");
}

CsvTable curve_table() { return CsvTable({"kind", "delta", "value", "std_err", "n_paths"}); }

void append_curve(CsvTable& table, const ModulusCurve& curve) {
  const std::string kind = curve.label.empty() ? to_string(curve.kind) : curve.label;
  for (std::size_t i = 0; i < curve.deltas.size(); ++i) {
    table.cell(kind).cell(curve.deltas[i]).cell(curve.values[i]).cell(curve.std_errs[i]).cell(curve.n_paths);
    table.end_row();
  }
}

CsvTable fit_table() { return CsvTable({"kind", "window_lo", "window_hi", "slope", "slope_stderr", "r_squared"}); }

void append_fit(CsvTable& table, const std::string& kind, const RateFit& fit, const std::vector<double>& xs) {
  if (fit.window_hi <= fit.window_lo || fit.window_hi > xs.size()) throw InvalidInput("fit window outside abscissae");
  table.cell(kind).cell(xs[fit.window_lo]).cell(xs[fit.window_hi - 1]).cell(fit.slope).cell(fit.slope_stderr);
  table.cell(fit.r_squared);
  table.end_row();
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kMargin = 60.0;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
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

}  // namespace

std::string loglog_svg(const std::string& title, const std::vector<PlotSeries>& series,
                       std::optional<double> ref_slope) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      x0 = std::min(x0, std::log10(s.x[i]));
      x1 = std::max(x1, std::log10(s.x[i]));
      y0 = std::min(y0, std::log10(s.y[i]));
      y1 = std::max(y1, std::log10(s.y[i]));
    }
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << escape(title) << "</text>\n";
  if (!(x1 >= x0) || !(y1 >= y0)) {
    os << "</svg>\n";
    return os.str();
  }
  if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const double pad_y = 0.05 * (y1 - y0);
  y0 -= pad_y;
  y1 += pad_y;
  auto px = [&](double lx) { return kMargin + (lx - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
  auto py = [&](double ly) { return kHeight - kMargin - (ly - y0) / (y1 - y0) * (kHeight - 2 * kMargin); };

  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
     << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
    os << "<text x=\"" << num(px(d)) << "\" y=\"" << kHeight - kMargin + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d) {
    os << "<text x=\"" << kMargin - 6 << "\" y=\"" << num(py(d) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d << "</text>\n";
  }

  std::size_t colour = 0;
  for (const auto& s : series) {
    const char* c = kColours[colour++ % std::size(kColours)];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (s.x[i] > 0.0 && s.y[i] > 0.0) os << num(px(std::log10(s.x[i]))) << ',' << num(py(std::log10(s.y[i]))) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << kWidth - kMargin + 4 << "\" y=\"" << kMargin + 14 * colour
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << c << "\">" << escape(s.label) << "</text>\n";
  }

  if (ref_slope && !series.empty()) {
    const auto& s = series.front();
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      const double ax = std::log10(s.x[i]);
      const double ay = std::log10(s.y[i]);
      const double by = ay + *ref_slope * (x1 - ax);
      os << "<line x1=\"" << num(px(ax)) << "\" y1=\"" << num(py(ay)) << "\" x2=\"" << num(px(x1)) << "\" y2=\""
         << num(py(by)) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
      os << "<text x=\"" << num(px(x1)) << "\" y=\"" << num(py(by) - 6)
         << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"gray\">slope "
         << format_double(*ref_slope) << "</text>\n";
      break;
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace svlab
