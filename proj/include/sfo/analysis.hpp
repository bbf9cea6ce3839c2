#pragma once

#include "sfo/problem.hpp"
#include "sfo/solvers.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sfo {

/// Regularity constants of a problem instance.
///
/// B_eff_sq is B^2 for SPG and B^2 + Bg_sq for SPP. `mu` is the quadratic
/// growth constant (F - F* >= mu/2 dist^2); `mu_growth` is the constant of
/// the nu-growth condition F - F* >= mu_growth dist^nu used by the restart
/// budget. R0_sq is the squared distance of the initial point to X*.
struct ConditionEstimates {
  double L = 0.0;
  double B_sq = 0.0;
  double Bg_sq = 0.0;
  double B_eff_sq = 0.0;
  double mu = 0.0;
  double nu = 2.0;
  double mu_growth = 0.0;
  double R0_sq = 0.0;
  std::map<std::string, double> extras;
  std::string source;

  double R0() const;
  double B_eff() const;
};

void validate(const ConditionEstimates& est);

/// Flat "name=value" document, one constant per line. Extras are written as
/// "extra.<name>".
std::string format_estimates(const ConditionEstimates& est);
ConditionEstimates parse_estimates(const std::string& text);

// ---- probing ---------------------------------------------------------------

struct ProbeConfig {
  std::size_t count = 1000;
  /// Largest probe radius; defaults to the distance of x0 to X*, else 1.
  std::optional<double> max_radius;
  double min_radius_ratio = 1e-4;
  std::uint64_t seed = 0x5eed;
  std::optional<Vector> x0;
  Method method = Method::spg;
  /// Extra points, e.g. trajectory snapshots.
  std::vector<Vector> extra_points;
};

struct ProbeSample {
  double gap = 0.0;        // F(x) - F*
  double dist = 0.0;       // ||x - proj(x)||
  double sq_grad = 0.0;    // E ||grad F(x, xi)||^2
  double floor_sq_grad = 0.0;  // E ||grad F(proj(x), xi)||^2
  double sq_grad_g = 0.0;  // max_xi ||grad g(x, xi)||^2
};

/// Evaluates the probe set: points x = proj(base) + r u at log-spaced radii r
/// with random unit directions u, plus the extra points. Points outside
/// dom F are redrawn a bounded number of times and then dropped.
std::vector<ProbeSample> collect_probes(const CompositeProblem& p, const ProbeConfig& cfg);

struct Envelope {
  double L = 0.0;
  double B_sq = 0.0;
};

/// Fits E||grad F||^2 <= B^2 + L (F - F*) on the probes. B^2 is twice the
/// largest gradient floor at the projections (raised to cover probes with a
/// numerically zero gap), then L is the least value without violations.
Envelope fit_gradient_envelope(const std::vector<ProbeSample>& probes);

/// Number of probes with sq_grad > B_sq + L gap (relative tolerance 1e-12).
std::size_t envelope_violations(const std::vector<ProbeSample>& probes, double L, double B_sq);

/// Log-log slope of gap against dist over the smaller half of the probes.
double fit_growth_exponent(const std::vector<ProbeSample>& probes);

/// Estimates (L, B^2, B_g^2, mu, nu) on a probe set. Closed-form constants
/// attached to the problem, or global subgradient bounds of every component,
/// replace the fitted values.
ConditionEstimates estimate_constants(const CompositeProblem& p, const ProbeConfig& cfg = {});

// ---- bounds ----------------------------------------------------------------

/// E[F(x_hat_t)] - F* <= R0^2 / (t g (2 - g L)) + g B^2 / (2 - g L).
double bound_thm23(const ConditionEstimates& est, double gamma, std::size_t t);

/// 2 R0 B / sqrt(T) for the optimal constant stepsize; needs T B^2 > R0^2 L^2.
double bound_thm23_optimal(const ConditionEstimates& est, std::size_t T);

/// (R^2 L + 2 B^2 / L) / sqrt(t) for gamma_t = 1 / (L sqrt(t)).
double bound_thm24(const ConditionEstimates& est, double R_sq_cap, std::size_t t);

/// rho = 1 - mu g + mu L g^2 / 2.
double contraction_factor(const ConditionEstimates& est, double gamma);

/// Linear rate to a noise ball for constant stepsize gamma in (0, 2/L].
double bound_thm25(const ConditionEstimates& est, double gamma, std::size_t t);

/// Hybrid stepsize min(1/L, c/(t+1)) with d = c^2 B^2 and t0 = floor(c L).
/// Nonincreasing on [0, t0) and on [t0, inf); the value may jump up at t0.
double bound_thm27(const ConditionEstimates& est, double c, std::size_t t);
std::size_t thm27_switch_index(const ConditionEstimates& est, double c);

/// r_{t+1} <= (1 - c/(t+1)) r_t + d/(t+1)^2 for t >= t0.
double bound_lemma11(double c, double d, std::size_t t0, double r_t0, std::size_t t);

/// r_{t+1} <= (1 - c/(t+1)^g) r_t + d/(t+1)^z for t >= t0, bounded by
/// K / (t+1)^(z-g). K is the smallest of three sufficient constants for the
/// induction, so the bound holds at t0 with equality when r_t0 dominates.
double bound_lemma12(double c, double d, double gamma_exp, double zeta, std::size_t t0,
                     double r_t0, std::size_t t);
double lemma12_constant(double c, double d, double gamma_exp, double zeta, std::size_t t0,
                        double r_t0);

/// ceil(4 B^2 / (mu^(2/nu) eps^(2-2/nu))) * ceil(log2(eps0 / eps)) with
/// mu = mu_growth.
std::size_t rsfo_budget(const ConditionEstimates& est, double eps0, double eps);

struct SharedMinimizerReport {
  double value = 0.0;  // E ||grad F(x_bar, xi)||^2
  bool strong_condition_plausible = false;
  Vector point;
};

inline constexpr double kSharedMinimizerThreshold = 1e-10;

/// Evaluates the gradient noise at the projection of a random probe onto X*.
SharedMinimizerReport shared_minimizer_diagnostic(const CompositeProblem& p,
                                                  std::uint64_t seed = 7);

// ---- bound objects for verification ----------------------------------------

class RateBound {
 public:
  enum class Kind { thm23_gap, thm24_gap, thm25_dist, thm27_dist, thm31_budget, lemma11, lemma12 };
  enum class Quantity { dist_sq, f_gap, sequence };

  static RateBound thm23(const ConditionEstimates& est, double gamma);
  static RateBound thm24(const ConditionEstimates& est, double R_sq_cap);
  static RateBound thm25(const ConditionEstimates& est, double gamma);
  static RateBound thm27(const ConditionEstimates& est, double c);
  /// Gap after t epochs: eps0 / 2^t.
  static RateBound thm31(double eps0);
  static RateBound lemma11(double c, double d, std::size_t t0, double r_t0);
  static RateBound lemma12(double c, double d, double gamma_exp, double zeta, std::size_t t0,
                           double r_t0);

  Kind kind() const noexcept { return kind_; }
  Quantity quantity() const noexcept { return quantity_; }
  /// Smallest t at which the bound is defined.
  std::size_t first_t() const noexcept { return first_t_; }
  const std::map<std::string, double>& parameters() const noexcept { return params_; }

  double operator()(std::size_t t) const;
  /// Same bound multiplied by `factor`.
  RateBound scaled(double factor) const;

 private:
  RateBound(Kind kind, Quantity q, std::size_t first_t, std::function<double(std::size_t)> f)
      : kind_(kind), quantity_(q), first_t_(first_t), eval_(std::move(f)) {}

  Kind kind_;
  Quantity quantity_;
  std::size_t first_t_;
  std::function<double(std::size_t)> eval_;
  double scale_ = 1.0;
  std::map<std::string, double> params_;
};

std::string_view to_string(RateBound::Kind kind) noexcept;
std::optional<RateBound::Kind> bound_kind_from_string(std::string_view name) noexcept;

}  // namespace sfo
