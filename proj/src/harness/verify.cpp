#include "sfo/harness/verify.hpp"

#include <fmt/format.h>

#include <cmath>

namespace sfo::harness {

namespace {

bool row_ok(double lhs, double bound, double rel_tol) {
  return std::isfinite(lhs) && lhs <= bound * (1.0 + rel_tol) + 1e-300;
}

}  // namespace

VerifyReport verify_bound(const AggregateTrajectory& traj, const RateBound& bound,
                          const SlackPolicy& policy) {
  VerifyReport rep;
  require(bound.quantity() != RateBound::Quantity::sequence, ErrorKind::invalid_parameter,
          "sequence bounds are checked with verify_sequence");
  const bool dist = bound.quantity() == RateBound::Quantity::dist_sq;
  try {
    for (const auto& r : traj.rows) {
      if (r.t < bound.first_t()) continue;
      VerifyRow row;
      row.t = r.t;
      row.mean = dist ? r.mean_dist_sq : r.mean_f_gap;
      row.se = dist ? r.stderr_dist_sq : r.stderr_f_gap;
      row.bound = policy.bound_scale * bound(r.t);
      const double lhs = policy.conservative ? row.mean + policy.sigmas * row.se
                                             : row.mean - policy.sigmas * row.se;
      row.ok = row_ok(lhs, row.bound, 1e-12);
      if (!row.ok && !rep.first_violation) rep.first_violation = row.t;
      rep.rows.push_back(row);
    }
  } catch (const Error& e) {
    rep.pass = false;
    rep.message = fmt::format("{} bound unusable: {}", to_string(bound.kind()), e.what());
    return rep;
  }
  if (rep.rows.empty()) {
    rep.message = "no recorded rows in the bound's domain";
    return rep;
  }
  rep.pass = !rep.first_violation.has_value();
  rep.message = rep.pass ? fmt::format("{} bound holds at all {} recorded t", to_string(bound.kind()),
                                       rep.rows.size())
                         : fmt::format("{} bound violated, earliest at t = {}", to_string(bound.kind()),
                                       *rep.first_violation);
  return rep;
}

VerifyReport verify_sequence(const std::vector<double>& values, std::size_t t0, const RateBound& bound,
                             double rel_tol) {
  VerifyReport rep;
  try {
    for (std::size_t k = 0; k < values.size(); ++k) {
      const std::size_t t = t0 + k;
      if (t < bound.first_t()) continue;
      VerifyRow row;
      row.t = t;
      row.mean = values[k];
      row.bound = bound(t);
      row.ok = row_ok(row.mean, row.bound, rel_tol);
      if (!row.ok && !rep.first_violation) rep.first_violation = t;
      rep.rows.push_back(row);
    }
  } catch (const Error& e) {
    rep.message = fmt::format("{} bound unusable: {}", to_string(bound.kind()), e.what());
    return rep;
  }
  rep.pass = !rep.rows.empty() && !rep.first_violation;
  rep.message = rep.pass ? fmt::format("{} bound holds for {} terms", to_string(bound.kind()), rep.rows.size())
                         : fmt::format("{} bound violated, earliest at t = {}", to_string(bound.kind()),
                                       rep.first_violation.value_or(0));
  return rep;
}

std::string format_report(const VerifyReport& report) {
  std::string out = "t,mean,stderr,bound,ok\n";
  for (const auto& r : report.rows)
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", r.t, r.mean, r.se, r.bound, r.ok ? 1 : 0);
  out += fmt::format("# {}: {}\n", report.pass ? "PASS" : "FAIL", report.message);
  return out;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size(), ErrorKind::dimension_mismatch, "fit_line needs equal-length inputs");
  LineFit fit;
  fit.n = xs.size();
  if (fit.n < 2) {
    fit.slope = fit.intercept = fit.r2 = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  const double n = static_cast<double>(fit.n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < fit.n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < fit.n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 && sxx > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

LineFit loglog_fit(const AggregateTrajectory& traj, Column column, std::size_t t_lo, std::size_t t_hi) {
  std::vector<double> xs, ys;
  for (const auto& r : traj.rows) {
    if (r.t < t_lo || r.t > t_hi || r.t == 0) continue;
    const double v = column == Column::dist_sq ? r.mean_dist_sq : r.mean_f_gap;
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    xs.push_back(std::log(static_cast<double>(r.t)));
    ys.push_back(std::log(v));
  }
  return fit_line(xs, ys);
}

LineFit final_decade_fit(const AggregateTrajectory& traj, Column column) {
  if (traj.rows.empty()) return fit_line({}, {});
  const std::size_t T = traj.rows.back().t;
  return loglog_fit(traj, column, std::max<std::size_t>(T / 10, 1), T);
}

double fitted_contraction(const AggregateTrajectory& traj, std::size_t t_max) {
  std::vector<double> xs, ys;
  for (const auto& r : traj.rows) {
    if (r.t > t_max || !(r.mean_dist_sq > 0.0)) continue;
    xs.push_back(static_cast<double>(r.t));
    ys.push_back(std::log(r.mean_dist_sq));
  }
  return std::exp(fit_line(xs, ys).slope);
}

double plateau_level(const AggregateTrajectory& traj, std::size_t t_start) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : traj.rows)
    if (r.t >= t_start) {
      sum += r.mean_dist_sq;
      ++n;
    }
  require(n > 0, ErrorKind::invalid_parameter, "plateau window is empty");
  return sum / static_cast<double>(n);
}

}  // namespace sfo::harness
