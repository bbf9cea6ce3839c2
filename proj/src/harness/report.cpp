#include "sfo/harness/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace sfo::harness {

std::string format_csv(const AggregateTrajectory& traj) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : traj.rows)
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.gamma, r.mean_dist_sq,
                       r.stderr_dist_sq, r.mean_f_gap, r.stderr_f_gap);
  return out;
}

AggregateTrajectory parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == kCsvHeader, ErrorKind::io,
          "CSV does not start with the trajectory header");
  AggregateTrajectory traj;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() == 6, ErrorKind::io, fmt::format("CSV line {}: expected 6 fields", lineno));
    auto num = [&](const std::string& s) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      require(end && *end == '\0' && !s.empty(), ErrorKind::io,
              fmt::format("CSV line {}: '{}' is not a number", lineno, s));
      return v;
    };
    AggregateRow r;
    char* end = nullptr;
    r.t = std::strtoull(cells[0].c_str(), &end, 10);
    require(end && *end == '\0' && !cells[0].empty(), ErrorKind::io,
            fmt::format("CSV line {}: bad t '{}'", lineno, cells[0]));
    r.gamma = num(cells[1]);
    r.mean_dist_sq = num(cells[2]);
    r.stderr_dist_sq = num(cells[3]);
    r.mean_f_gap = num(cells[4]);
    r.stderr_f_gap = num(cells[5]);
    traj.rows.push_back(r);
  }
  return traj;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::io, fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  out.flush();
  require(out.good(), ErrorKind::io, fmt::format("write failed for '{}'", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_csv(const std::filesystem::path& path, const AggregateTrajectory& traj) {
  write_text(path, format_csv(traj));
}

std::string format_svg(const std::vector<Series>& series, const std::string& title) {
  constexpr double W = 720, H = 440, ml = 70, mr = 170, mt = 40, mb = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;
  auto px = [&](double x) { return ml + (std::log10(x) - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (std::log10(y) - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", W, H,
      W, H);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     ml, mt, W - ml - mr, H - mt - mb);
  if (!title.empty())
    out += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"14\" font-family=\"sans-serif\">{}</text>\n", ml,
                       title);
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\">log10 t in [{:.3g}, {:.3g}]</text>\n",
      ml, H - 15, xmin, xmax);
  out += fmt::format(
      "<text x=\"8\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\">log10 [{:.3g}, {:.3g}]</text>\n",
      mt - 8, ymin, ymax);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = colors[k % std::size(colors)];
    std::string pts;
    for (const auto& [x, y] : series[k].points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt::format("{:.2f},{:.2f}", px(x), py(y));
    }
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\" fill=\"{}\">{}</text>\n",
        W - mr + 10, mt + 16 * (static_cast<double>(k) + 1), color, series[k].name);
  }
  out += "</svg>\n";
  return out;
}

void write_svg(const std::filesystem::path& path, const std::vector<Series>& series,
               const std::string& title) {
  write_text(path, format_svg(series, title));
}

Series dist_series(const AggregateTrajectory& traj, const std::string& name) {
  Series s{name, {}};
  for (const auto& r : traj.rows) s.points.emplace_back(static_cast<double>(r.t), r.mean_dist_sq);
  return s;
}

Series gap_series(const AggregateTrajectory& traj, const std::string& name) {
  Series s{name, {}};
  for (const auto& r : traj.rows) s.points.emplace_back(static_cast<double>(r.t), r.mean_f_gap);
  return s;
}

}  // namespace sfo::harness
