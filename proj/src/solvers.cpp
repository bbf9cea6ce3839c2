#include "sfo/solvers.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace sfo {

std::string_view to_string(Method m) noexcept { return m == Method::spg ? "SPG" : "SPP"; }

std::optional<Method> method_from_string(std::string_view name) noexcept {
  if (name == "SPG" || name == "spg") return Method::spg;
  if (name == "SPP" || name == "spp") return Method::spp;
  return std::nullopt;
}

Vector spg_step(const CompositeProblem& p, const Vector& x, double gamma, std::size_t xi) {
  return p.g(xi).prox(x - gamma * p.f(xi).subgradient(x), gamma);
}

Vector spp_step(const CompositeProblem& p, const Vector& x, double gamma, std::size_t xi) {
  return p.g(xi).prox(p.f(xi).prox(x, gamma), gamma);
}

Vector gradient_mapping(const CompositeProblem& p, const Vector& x, double gamma, std::size_t xi) {
  return (x - spg_step(p, x, gamma, xi)) / gamma;
}

Vector sfo_step(Method m, const CompositeProblem& p, const Vector& x, double gamma,
                std::size_t xi) {
  return m == Method::spg ? spg_step(p, x, gamma, xi) : spp_step(p, x, gamma, xi);
}

std::size_t default_stride(std::size_t iters) noexcept {
  constexpr std::size_t kMaxRows = 10000;
  return iters <= kMaxRows ? 1 : (iters + kMaxRows - 1) / kMaxRows;
}

// ---- SolverRun -------------------------------------------------------------

SolverRun::SolverRun(const CompositeProblem& p, Method method, Vector x0, RandomStream rng)
    : problem_(&p), method_(method), x_(std::move(x0)), rng_(rng) {
  require(x_.size() == p.dim(), ErrorKind::dimension_mismatch,
          fmt::format("initial point has dimension {}, problem has {}", x_.size(), p.dim()));
  require(all_finite(x_), ErrorKind::invalid_parameter, "initial point must be finite");
  x0_ = x_;
  x_sum_ = Vector::Zero(x_.size());
}

std::size_t SolverRun::step(double gamma) {
  const std::size_t xi = problem_->draw_sample(rng_);
  x_sum_ += x_;
  x_ = sfo_step(method_, *problem_, x_, gamma, xi);
  ++t_;
  return xi;
}

Vector SolverRun::average() const {
  if (t_ == 0) return x0_;
  return x_sum_ / static_cast<double>(t_);
}

// ---- run -------------------------------------------------------------------

RunResult run(const CompositeProblem& p, Method method, const StepsizeSchedule& schedule,
              const Vector& x0, std::size_t iters, RandomStream rng, RunOptions options) {
  const double f_star = options.record && options.record_gap ? p.optimal_value() : 0.0;
  SolverRun state(p, method, x0, rng);
  RunResult result;
  result.record.stride = options.stride ? options.stride : default_stride(iters);
  const std::size_t stride = result.record.stride;

  auto record_row = [&]() {
    TrajectoryRow row;
    row.t = state.t();
    row.gamma = schedule.at(state.t());
    row.dist_sq = p.distance_to_optimum_sq(state.x());
    row.f_gap = options.record_gap ? p.full_objective(state.average()) - f_star
                                   : std::numeric_limits<double>::quiet_NaN();
    result.record.rows.push_back(row);
  };

  if (options.record && iters > 0) {
    result.record.rows.reserve(iters / stride + 2);
    record_row();
  }
  for (std::size_t t = 0; t < iters; ++t) {
    state.step(schedule.at(t));
    if (options.record && (state.t() % stride == 0 || state.t() == iters)) record_row();
  }
  result.final_iterate = state.x();
  result.average_iterate = state.average();
  return result;
}

RunResult run(const CompositeProblem& p, Method method, const StepsizeSchedule& schedule,
              const Vector& x0, std::size_t iters, std::uint64_t seed, RunOptions options) {
  return run(p, method, schedule, x0, iters, RandomStream(seed), options);
}

// ---- restarted scheme ------------------------------------------------------

std::size_t restart_epoch_count(double epsilon0, double target_eps) {
  require(std::isfinite(epsilon0) && epsilon0 > 0.0, ErrorKind::invalid_parameter,
          "epsilon0 must be positive");
  require(std::isfinite(target_eps) && target_eps > 0.0 && target_eps <= epsilon0,
          ErrorKind::invalid_parameter,
          fmt::format("target accuracy must lie in (0, epsilon0], got {}", target_eps));
  std::size_t epochs = 0;
  double eps = epsilon0;
  while (eps > target_eps) {
    eps *= 0.5;
    ++epochs;
  }
  return epochs;
}

std::size_t restart_inner_iterations(double B_eff, double mu, double nu, double eps_prev) {
  require(std::isfinite(B_eff) && B_eff > 0.0, ErrorKind::invalid_parameter,
          "restart needs a finite positive noise constant");
  require(std::isfinite(mu) && mu > 0.0, ErrorKind::invalid_parameter,
          "restart needs a positive growth constant");
  require(nu >= 1.0 && nu <= 2.0, ErrorKind::invalid_parameter, "growth exponent must lie in [1, 2]");
  const double k = 4.0 * B_eff * B_eff /
                   (std::pow(mu, 2.0 / nu) * std::pow(eps_prev, 2.0 - 2.0 / nu));
  require(std::isfinite(k), ErrorKind::invalid_parameter, "inner iteration count overflows");
  return static_cast<std::size_t>(std::ceil(k));
}

double restart_stepsize(double B_eff, double eps_prev) { return eps_prev / (2.0 * B_eff * B_eff); }

RestartResult rsfo_run(const CompositeProblem& p, Method method, const RestartPlan& plan,
                       const Vector& x0, RandomStream rng) {
  require(std::isfinite(plan.B_eff) && plan.B_eff > 0.0, ErrorKind::invalid_parameter,
          "restart plan needs a finite positive effective noise constant");
  require(plan.nu >= 1.0 && plan.nu <= 2.0, ErrorKind::invalid_parameter,
          "restart plan growth exponent must lie in [1, 2]");
  require(plan.mu > 0.0, ErrorKind::invalid_parameter, "restart plan mu must be positive");
  const double f_star = p.optimal_value();
  const double gap0 = p.full_objective(x0) - f_star;
  require(plan.epsilon0 >= gap0 - 1e-12 * (1.0 + std::abs(f_star)), ErrorKind::invalid_parameter,
          fmt::format("epsilon0 = {} is below the initial gap {}", plan.epsilon0, gap0));

  const std::size_t epochs = restart_epoch_count(plan.epsilon0, plan.target_eps);
  RestartResult result;
  result.average_iterate = x0;
  double eps_prev = plan.epsilon0;
  for (std::size_t e = 1; e <= epochs; ++e) {
    EpochRecord rec;
    rec.epoch = e;
    rec.epsilon_prev = eps_prev;
    rec.gamma = restart_stepsize(plan.B_eff, eps_prev);
    rec.iterations = restart_inner_iterations(plan.B_eff, plan.mu, plan.nu, eps_prev);

    SolverRun inner(p, method, result.average_iterate, rng.split(e));
    for (std::size_t k = 0; k < rec.iterations; ++k) inner.step(rec.gamma);
    result.average_iterate = inner.average();
    rec.f_gap = p.full_objective(result.average_iterate) - f_star;

    result.total_iterations += rec.iterations;
    result.epochs.push_back(rec);
    eps_prev *= 0.5;
  }
  return result;
}

}  // namespace sfo
