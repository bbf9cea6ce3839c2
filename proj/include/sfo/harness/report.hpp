#pragma once

#include "sfo/harness/experiment.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sfo::harness {

inline constexpr const char* kCsvHeader =
    "t,gamma,mean_dist_sq,stderr_dist_sq,mean_f_gap,stderr_f_gap";

/// Header line plus one row per recorded t, 17 significant digits, LF endings.
std::string format_csv(const AggregateTrajectory& traj);
AggregateTrajectory parse_csv(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const AggregateTrajectory& traj);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (t, value)
};

/// Log-log line chart with one polyline per series. Points with a
/// nonpositive coordinate are skipped.
std::string format_svg(const std::vector<Series>& series, const std::string& title = {});
void write_svg(const std::filesystem::path& path, const std::vector<Series>& series,
               const std::string& title = {});

Series dist_series(const AggregateTrajectory& traj, const std::string& name = "mean_dist_sq");
Series gap_series(const AggregateTrajectory& traj, const std::string& name = "mean_f_gap");

}  // namespace sfo::harness
