#pragma once

#include "sfo/problem.hpp"
#include "sfo/random.hpp"
#include "sfo/schedules.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace sfo {

enum class Method { spg, spp };

std::string_view to_string(Method m) noexcept;
std::optional<Method> method_from_string(std::string_view name) noexcept;

/// prox_{gamma g(.,xi)}(x - gamma grad f(x, xi)).
Vector spg_step(const CompositeProblem& p, const Vector& x, double gamma, std::size_t xi);

/// prox_{gamma g(.,xi)}(prox_{gamma f(.,xi)}(x)).
Vector spp_step(const CompositeProblem& p, const Vector& x, double gamma, std::size_t xi);

/// Stochastic gradient mapping (x - spg_step(x)) / gamma.
Vector gradient_mapping(const CompositeProblem& p, const Vector& x, double gamma, std::size_t xi);

Vector sfo_step(Method m, const CompositeProblem& p, const Vector& x, double gamma,
                std::size_t xi);

struct TrajectoryRow {
  std::size_t t = 0;
  double gamma = 0.0;
  double dist_sq = 0.0;  // ||x_t - proj(x_t)||^2
  double f_gap = 0.0;    // F(mean of x_0..x_{t-1}) - F*  (x_0 at t = 0)
};

struct TrajectoryRecord {
  std::size_t stride = 1;
  std::vector<TrajectoryRow> rows;
};

/// 1 for runs of at most 10^4 iterations, else ceil(iters / 10^4).
std::size_t default_stride(std::size_t iters) noexcept;

struct RunOptions {
  std::size_t stride = 0;  // 0 selects default_stride
  bool record = true;
  bool record_gap = true;  // f_gap costs one full objective evaluation per row
};

/// Mutable state of one SPG/SPP trajectory. Single-threaded; distinct runs
/// share nothing but the immutable problem.
class SolverRun {
 public:
  SolverRun(const CompositeProblem& p, Method method, Vector x0, RandomStream rng);

  /// Draws xi_t, applies one step with stepsize gamma and returns xi_t.
  std::size_t step(double gamma);

  const Vector& x() const noexcept { return x_; }
  std::size_t t() const noexcept { return t_; }
  Method method() const noexcept { return method_; }
  /// Mean of x_0..x_{t-1}; x_0 before the first step.
  Vector average() const;
  const Vector& x_sum() const noexcept { return x_sum_; }
  RandomStream& rng() noexcept { return rng_; }

 private:
  const CompositeProblem* problem_;
  Method method_;
  Vector x_;
  Vector x0_;
  Vector x_sum_;
  std::size_t t_ = 0;
  RandomStream rng_;
};

struct RunResult {
  Vector final_iterate;
  Vector average_iterate;
  TrajectoryRecord record;
};

/// Executes `iters` steps with xi_t drawn i.i.d. from the sample space.
/// Rows are recorded at every multiple of the stride and at t = iters; the
/// record is empty when iters is zero.
RunResult run(const CompositeProblem& p, Method method, const StepsizeSchedule& schedule,
              const Vector& x0, std::size_t iters, RandomStream rng, RunOptions options = {});

RunResult run(const CompositeProblem& p, Method method, const StepsizeSchedule& schedule,
              const Vector& x0, std::size_t iters, std::uint64_t seed, RunOptions options = {});

// ---- restarted scheme -----------------------------------------------------

struct RestartPlan {
  double epsilon0 = 0.0;  // upper bound on F(x0) - F*
  double mu = 0.0;        // nu-growth constant: F(x) - F* >= mu ||x - proj(x)||^nu
  double nu = 1.0;        // in [1, 2]
  double B_eff = 0.0;     // effective noise constant (not squared)
  double target_eps = 0.0;
};

struct EpochRecord {
  std::size_t epoch = 0;      // 1-based
  double epsilon_prev = 0.0;  // eps_{t-1}
  double gamma = 0.0;
  std::size_t iterations = 0;
  double f_gap = 0.0;  // F(epoch average) - F*
};

struct RestartResult {
  Vector average_iterate;
  std::vector<EpochRecord> epochs;
  std::size_t total_iterations = 0;
};

/// Number of halvings eps0 -> eps0/2 -> ... needed to reach eps, i.e.
/// ceil(log2(eps0 / eps)) evaluated without floating-point logarithms.
std::size_t restart_epoch_count(double epsilon0, double target_eps);

/// ceil(4 B^2 / (mu^(2/nu) eps^(2 - 2/nu))).
std::size_t restart_inner_iterations(double B_eff, double mu, double nu, double eps_prev);

/// Epoch stepsize eps_{t-1} / (2 B^2).
double restart_stepsize(double B_eff, double eps_prev);

/// Restarted SPG/SPP: each epoch runs a constant-stepsize inner solver from
/// the previous epoch's average iterate and halves the accuracy target.
RestartResult rsfo_run(const CompositeProblem& p, Method method, const RestartPlan& plan,
                       const Vector& x0, RandomStream rng);

}  // namespace sfo
