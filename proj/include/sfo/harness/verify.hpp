#pragma once

#include "sfo/analysis.hpp"
#include "sfo/harness/experiment.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sfo::harness {

/// Monte-Carlo slack for expectation bounds. By default a row passes when
/// mean <= bound + sigmas * stderr; `conservative` requires
/// mean + sigmas * stderr <= bound instead.
struct SlackPolicy {
  double sigmas = 3.0;
  double bound_scale = 1.0;
  bool conservative = false;
};

struct VerifyRow {
  std::size_t t = 0;
  double mean = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool ok = false;
};

struct VerifyReport {
  bool pass = false;
  std::optional<std::size_t> first_violation;
  std::vector<VerifyRow> rows;
  std::string message;
};

/// Compares the trajectory quantity named by the bound at every recorded
/// t >= bound.first_t(). An invalid or vacuous bound fails the report.
VerifyReport verify_bound(const AggregateTrajectory& traj, const RateBound& bound,
                          const SlackPolicy& policy = {});

/// Checks a deterministic sequence values[k] (index t = t0 + k) against the bound.
VerifyReport verify_sequence(const std::vector<double>& values, std::size_t t0, const RateBound& bound,
                             double rel_tol = 1e-12);

/// "t,mean,stderr,bound,ok" lines followed by a summary line.
std::string format_report(const VerifyReport& report);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

enum class Column { dist_sq, f_gap };

/// Least-squares slope of log(mean) against log(t) over t in [t_lo, t_hi].
LineFit loglog_fit(const AggregateTrajectory& traj, Column column, std::size_t t_lo, std::size_t t_hi);

/// loglog_fit over the final decade [T/10, T] of the recorded grid.
LineFit final_decade_fit(const AggregateTrajectory& traj, Column column = Column::dist_sq);

/// exp of the least-squares slope of log(mean_dist_sq) against t, over rows
/// with t <= t_max and positive mean.
double fitted_contraction(const AggregateTrajectory& traj,
                          std::size_t t_max = static_cast<std::size_t>(-1));

/// Average of mean_dist_sq over rows with t >= t_start.
double plateau_level(const AggregateTrajectory& traj, std::size_t t_start);

}  // namespace sfo::harness
