#include "oblique/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oblique/errors.hpp"
#include "oblique/matrix_io.hpp"

namespace oblique {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void close_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

std::vector<std::vector<std::string>> read_rows(const std::string& path, const std::string& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ConfigError(path + ": unexpected CSV header");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

double to_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("malformed CSV number '" + s + "'");
  return v;
}

std::size_t to_size(const std::string& s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("malformed CSV integer '" + s + "'");
  return v;
}

constexpr const char* kRunsHeader = "step,run,rmspbe,rmse";
constexpr const char* kAggregateHeader = "step,rmspbe_mean,rmspbe_std,rmse_mean,rmse_std";

}  // namespace

void write_runs_csv(std::span<const CurvePoint> points, const std::string& path) {
  auto out = open_out(path);
  out << kRunsHeader << '\n';
  for (const CurvePoint& p : points) {
    out << p.step << ',' << p.run << ',' << format_double(p.rmspbe) << ',' << format_double(p.rmse)
        << '\n';
  }
  close_out(out, path);
}

void write_aggregate_csv(std::span<const AggregatePoint> points, const std::string& path) {
  auto out = open_out(path);
  out << kAggregateHeader << '\n';
  for (const AggregatePoint& p : points) {
    out << p.step << ',' << format_double(p.rmspbe_mean) << ',' << format_double(p.rmspbe_std) << ','
        << format_double(p.rmse_mean) << ',' << format_double(p.rmse_std) << '\n';
  }
  close_out(out, path);
}

std::vector<CurvePoint> read_runs_csv(const std::string& path) {
  std::vector<CurvePoint> out;
  for (const auto& f : read_rows(path, kRunsHeader)) {
    if (f.size() != 4) throw ConfigError(path + ": expected 4 columns");
    out.push_back({to_size(f[0]), to_size(f[1]), to_double(f[2]), to_double(f[3])});
  }
  return out;
}

std::vector<AggregatePoint> read_aggregate_csv(const std::string& path) {
  std::vector<AggregatePoint> out;
  for (const auto& f : read_rows(path, kAggregateHeader)) {
    if (f.size() != 5) throw ConfigError(path + ": expected 5 columns");
    out.push_back({to_size(f[0]), to_double(f[1]), to_double(f[2]), to_double(f[3]), to_double(f[4])});
  }
  return out;
}

std::vector<std::string> write_csv(const ExperimentResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  std::vector<std::string> written;
  for (const LearnerCurves& lc : result.learners) {
    const std::string base = (std::filesystem::path(dir) / lc.label).string();
    write_runs_csv(lc.points, base + "_runs.csv");
    write_aggregate_csv(lc.aggregate, base + "_aggregate.csv");
    written.push_back(base + "_runs.csv");
    written.push_back(base + "_aggregate.csv");
  }
  const std::string div_path = (std::filesystem::path(dir) / "divergence.csv").string();
  auto out = open_out(div_path);
  out << "learner,run,step\n";
  for (const LearnerCurves& lc : result.learners) {
    for (const DivergenceRecord& d : lc.divergences) out << lc.label << ',' << d.run << ',' << d.step << '\n';
  }
  close_out(out, div_path);
  written.push_back(div_path);
  return written;
}

void write_svg(const ExperimentResult& result, const std::string& path, const std::string& title) {
  constexpr double kWidth = 720, kPanelHeight = 260, kLeft = 70, kRight = 160, kTop = 40, kGap = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::size_t max_step = 1;
  for (const auto& lc : result.learners)
    for (const auto& p : lc.aggregate) max_step = std::max(max_step, p.step);

  auto out = open_out(path);
  const double height = kTop + 2 * kPanelHeight + kGap + 40;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";

  for (int panel = 0; panel < 2; ++panel) {
    const double y0 = kTop + panel * (kPanelHeight + kGap);
    const double plot_w = kWidth - kLeft - kRight;
    double y_max = 0.0;
    for (const auto& lc : result.learners) {
      for (const auto& p : lc.aggregate) {
        const double v = panel == 0 ? p.rmspbe_mean : p.rmse_mean;
        if (std::isfinite(v)) y_max = std::max(y_max, v);
      }
    }
    if (y_max <= 0.0) y_max = 1.0;
    out << "<rect x=\"" << kLeft << "\" y=\"" << y0 << "\" width=\"" << plot_w << "\" height=\""
        << kPanelHeight << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y0 + 4 << "\" text-anchor=\"end\">"
        << format_double(y_max) << "</text>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y0 + kPanelHeight << "\" text-anchor=\"end\">0</text>\n";
    out << "<text x=\"" << kLeft + plot_w << "\" y=\"" << y0 + kPanelHeight + 16
        << "\" text-anchor=\"end\">step " << max_step << "</text>\n";
    out << "<text x=\"" << kLeft + 6 << "\" y=\"" << y0 + 16 << "\">" << (panel == 0 ? "RMSPBE" : "RMSE")
        << "</text>\n";
    for (std::size_t i = 0; i < result.learners.size(); ++i) {
      const auto& lc = result.learners[i];
      const char* color = kColors[i % std::size(kColors)];
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& p : lc.aggregate) {
        const double v = panel == 0 ? p.rmspbe_mean : p.rmse_mean;
        if (!std::isfinite(v)) continue;
        const double x = kLeft + plot_w * static_cast<double>(p.step) / static_cast<double>(max_step);
        const double y = y0 + kPanelHeight * (1.0 - std::min(v, y_max) / y_max);
        out << format_double(x) << ',' << format_double(y) << ' ';
      }
      out << "\"/>\n";
      if (panel == 0) {
        const double ly = kTop + 16 + 18 * static_cast<double>(i);
        out << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << kWidth - kRight + 36 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kWidth - kRight + 42 << "\" y=\"" << ly << "\">" << lc.label << "</text>\n";
      }
    }
  }
  out << "</svg>\n";
  close_out(out, path);
}

}  // namespace oblique
