#include "sfo/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sfo {

namespace {

constexpr double kMinProbeDistance = 1e-8;
constexpr double kZeroGap = 1e-14;
constexpr int kDomainRetries = 32;

double safe_sqrt(double v) { return std::sqrt(std::max(v, 0.0)); }

void check_stepsize(const ConditionEstimates& est, double gamma, bool allow_boundary) {
  require(std::isfinite(gamma) && gamma > 0.0, ErrorKind::invalid_parameter,
          fmt::format("stepsize must be positive, got {}", gamma));
  if (est.L > 0.0) {
    const double limit = 2.0 / est.L;
    const bool ok = allow_boundary ? gamma <= limit * (1.0 + 1e-12) : gamma < limit;
    require(ok, ErrorKind::invalid_parameter,
            fmt::format("stepsize {} outside (0, 2/L{} with L = {}", gamma,
                        allow_boundary ? "]" : ")", est.L));
  }
}

enum class Lemma11Case { equal, below, above };

double lemma11_eval(Lemma11Case which, double c, double d, std::size_t t0, double r,
                    std::size_t t) {
  const double s0 = static_cast<double>(t0) + 1.0;
  const double s = static_cast<double>(t) + 1.0;
  switch (which) {
    case Lemma11Case::equal:
      return (2.0 * static_cast<double>(t0) * r + 2.0 * d * (1.0 + std::log(s / s0))) / s;
    case Lemma11Case::below:
      return (r * std::pow(s0, c) + 2.0 * d * (2.0 - c) * std::pow(s0, c) / (1.0 - c)) /
             std::pow(s, c);
    case Lemma11Case::above:
      return (s0 * r + d / (c - 1.0)) / s;
  }
  return 0.0;
}

// Bound for constant stepsize 1/L as stated for the first phase of the
// hybrid schedule.
double hybrid_first_phase(const ConditionEstimates& est, std::size_t t) {
  const double L = est.L;
  const double a = std::abs(1.0 - est.mu / (2.0 * L));
  const double den = L * L - std::abs(L * L - est.mu * L / 2.0);
  double noise = 0.0;
  if (est.B_eff_sq > 0.0) {
    if (!(den > 0.0))
      fail(ErrorKind::vacuous_bound,
           fmt::format("first-phase bound is vacuous: L^2 - |L^2 - mu L / 2| = {}", den));
    noise = est.B_eff_sq / den;
  }
  return std::max(std::pow(a, static_cast<double>(t)) * est.R0_sq + noise,
                  est.B_eff_sq / (L * L));
}

}  // namespace

// ---- ConditionEstimates ----------------------------------------------------

double ConditionEstimates::R0() const { return safe_sqrt(R0_sq); }
double ConditionEstimates::B_eff() const { return safe_sqrt(B_eff_sq); }

void validate(const ConditionEstimates& est) {
  const std::pair<const char*, double> fields[] = {
      {"L", est.L},   {"B_sq", est.B_sq},           {"Bg_sq", est.Bg_sq}, {"B_eff_sq", est.B_eff_sq},
      {"mu", est.mu}, {"mu_growth", est.mu_growth}, {"R0_sq", est.R0_sq}};
  for (const auto& [name, v] : fields)
    require(std::isfinite(v) && v >= 0.0, ErrorKind::invalid_parameter,
            fmt::format("constant {} must be finite and nonnegative, got {}", name, v));
  require(est.nu >= 1.0 && est.nu <= 2.0, ErrorKind::invalid_parameter,
          fmt::format("growth exponent nu must lie in [1, 2], got {}", est.nu));
  require(est.B_eff_sq >= est.B_sq * (1.0 - 1e-15), ErrorKind::invalid_parameter,
          "B_eff_sq must be at least B_sq");
}

std::string format_estimates(const ConditionEstimates& est) {
  std::string out;
  auto line = [&](std::string_view key, double v) { out += fmt::format("{}={:.17g}\n", key, v); };
  line("L", est.L);
  line("B_sq", est.B_sq);
  line("Bg_sq", est.Bg_sq);
  line("B_eff_sq", est.B_eff_sq);
  line("mu", est.mu);
  line("nu", est.nu);
  line("mu_growth", est.mu_growth);
  line("R0_sq", est.R0_sq);
  for (const auto& [k, v] : est.extras) line("extra." + k, v);
  if (!est.source.empty()) out += fmt::format("source={}\n", est.source);
  return out;
}

ConditionEstimates parse_estimates(const std::string& text) {
  ConditionEstimates est;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::config,
            fmt::format("estimates line {}: expected name=value", lineno));
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "source") {
      est.source = value;
      continue;
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      require(used == value.size(), ErrorKind::config, "trailing characters");
    } catch (const std::exception&) {
      fail(ErrorKind::config, fmt::format("estimates line {}: '{}' is not a number", lineno, value));
    }
    if (key == "L") est.L = v;
    else if (key == "B_sq") est.B_sq = v;
    else if (key == "Bg_sq") est.Bg_sq = v;
    else if (key == "B_eff_sq") est.B_eff_sq = v;
    else if (key == "mu") est.mu = v;
    else if (key == "nu") est.nu = v;
    else if (key == "mu_growth") est.mu_growth = v;
    else if (key == "R0_sq") est.R0_sq = v;
    else if (key.rfind("extra.", 0) == 0) est.extras[key.substr(6)] = v;
    else fail(ErrorKind::config, fmt::format("estimates line {}: unknown constant '{}'", lineno, key));
  }
  return est;
}

// ---- probing ---------------------------------------------------------------

std::vector<ProbeSample> collect_probes(const CompositeProblem& p, const ProbeConfig& cfg) {
  const double f_star = p.optimal_value();
  const bool affine = p.optimal_set().kind() == OptimalSet::Kind::affine;
  const Vector base = cfg.x0 ? p.project_optimal(*cfg.x0) : p.optimal_set().anchor();
  double r_max = 1.0;
  if (cfg.max_radius) r_max = *cfg.max_radius;
  else if (cfg.x0) r_max = std::sqrt(p.distance_to_optimum_sq(*cfg.x0));
  if (!(r_max > 0.0) || !std::isfinite(r_max)) r_max = 1.0;
  require(cfg.min_radius_ratio > 0.0 && cfg.min_radius_ratio <= 1.0, ErrorKind::invalid_parameter,
          "min_radius_ratio must lie in (0, 1]");
  const double r_min = r_max * cfg.min_radius_ratio;

  const double const_floor = affine ? 0.0 : p.expected_sq_subgradient_norm(p.optimal_set().anchor());

  auto evaluate = [&](const Vector& x, double fx) {
    ProbeSample s;
    s.gap = fx - f_star;
    const Vector px = p.project_optimal(x);
    s.dist = (x - px).norm();
    s.sq_grad = p.expected_sq_subgradient_norm(x);
    s.floor_sq_grad = affine ? p.expected_sq_subgradient_norm(px) : const_floor;
    for (std::size_t i = 0; i < p.num_samples(); ++i) {
      if (p.samples().weight(i) == 0.0) continue;
      s.sq_grad_g = std::max(s.sq_grad_g, p.g(i).subgradient(x).squaredNorm());
    }
    return s;
  };

  std::vector<ProbeSample> out;
  out.reserve(cfg.count + cfg.extra_points.size() + 1);
  {
    const double fb = p.full_objective(base);
    if (std::isfinite(fb)) out.push_back(evaluate(base, fb));
  }
  RandomStream rng(cfg.seed);
  const std::size_t n = cfg.count;
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
    const double r = r_min * std::pow(r_max / r_min, frac);
    for (int attempt = 0; attempt < kDomainRetries; ++attempt) {
      const Vector x = base + r * rng.unit_vector(p.dim());
      const double fx = p.full_objective(x);
      if (std::isfinite(fx)) {
        out.push_back(evaluate(x, fx));
        break;
      }
    }
  }
  for (const Vector& x : cfg.extra_points) {
    const double fx = p.full_objective(x);
    if (std::isfinite(fx)) out.push_back(evaluate(x, fx));
  }
  return out;
}

Envelope fit_gradient_envelope(const std::vector<ProbeSample>& probes) {
  require(!probes.empty(), ErrorKind::invalid_parameter, "envelope fit needs probes");
  double floor = 0.0;
  double max_sq = 0.0;
  for (const auto& s : probes) {
    floor = std::max(floor, s.floor_sq_grad);
    max_sq = std::max(max_sq, s.sq_grad);
  }
  Envelope env;
  env.B_sq = floor > 1e-14 * (1.0 + max_sq) ? 2.0 * floor : 0.0;
  for (const auto& s : probes)
    if (s.gap <= kZeroGap) env.B_sq = std::max(env.B_sq, s.sq_grad * (1.0 + 1e-12));
  for (const auto& s : probes)
    if (s.gap > kZeroGap) env.L = std::max(env.L, (s.sq_grad - env.B_sq) / s.gap);
  env.L *= 1.0 + 1e-10;
  return env;
}

std::size_t envelope_violations(const std::vector<ProbeSample>& probes, double L, double B_sq) {
  std::size_t n = 0;
  for (const auto& s : probes)
    if (s.sq_grad > (B_sq + L * std::max(s.gap, 0.0)) * (1.0 + 1e-12) + 1e-300) ++n;
  return n;
}

double fit_growth_exponent(const std::vector<ProbeSample>& probes) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : probes)
    if (s.dist >= kMinProbeDistance && s.gap > 0.0) pts.emplace_back(std::log(s.dist), std::log(s.gap));
  std::sort(pts.begin(), pts.end());
  pts.resize(std::max<std::size_t>(pts.size() / 2, std::min<std::size_t>(pts.size(), 2)));
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

ConditionEstimates estimate_constants(const CompositeProblem& p, const ProbeConfig& cfg) {
  const auto probes = collect_probes(p, cfg);
  ConditionEstimates est;
  const auto& analytic = p.analytic_constants();

  // Global subgradient bounds of all active components.
  bool all_bounded = true;
  bool g_bounded = true;
  double bf = 0.0, bg = 0.0;
  for (std::size_t i = 0; i < p.num_samples(); ++i) {
    if (p.samples().weight(i) == 0.0) continue;
    const auto fb = p.f(i).subgradient_bound();
    const auto gb = p.g(i).subgradient_bound();
    if (fb) bf = std::max(bf, *fb);
    else all_bounded = false;
    if (gb) bg = std::max(bg, *gb);
    else g_bounded = false;
  }
  all_bounded = all_bounded && g_bounded;

  if (analytic && analytic->L && analytic->B_sq) {
    est.L = *analytic->L;
    est.B_sq = *analytic->B_sq;
    est.source = analytic->source.empty() ? "analytic" : analytic->source;
  } else if (all_bounded) {
    est.L = 0.0;
    est.B_sq = 2.0 * bf * bf + 2.0 * bg * bg;
    est.source = "subgradient-bounds";
  } else {
    const Envelope env = fit_gradient_envelope(probes);
    est.L = env.L;
    est.B_sq = env.B_sq;
    est.source = "fitted";
  }

  if (analytic && analytic->Bg_sq) {
    est.Bg_sq = *analytic->Bg_sq;
  } else if (g_bounded) {
    est.Bg_sq = bg * bg;
  } else {
    for (const auto& s : probes) est.Bg_sq = std::max(est.Bg_sq, s.sq_grad_g);
  }
  est.B_eff_sq = cfg.method == Method::spg ? est.B_sq : est.B_sq + est.Bg_sq;

  double mu = std::numeric_limits<double>::infinity();
  for (const auto& s : probes)
    if (s.dist >= kMinProbeDistance) mu = std::min(mu, 2.0 * s.gap / (s.dist * s.dist));
  est.mu = std::isfinite(mu) ? std::max(mu, 0.0) : 0.0;

  const double nu_fit = fit_growth_exponent(probes);
  if (analytic && analytic->nu) est.nu = *analytic->nu;
  else est.nu = std::isfinite(nu_fit) ? std::clamp(nu_fit, 1.0, 2.0) : 2.0;

  double mug = std::numeric_limits<double>::infinity();
  for (const auto& s : probes)
    if (s.dist >= kMinProbeDistance) mug = std::min(mug, s.gap / std::pow(s.dist, est.nu));
  est.mu_growth = std::isfinite(mug) ? std::max(mug, 0.0) : 0.0;

  if (cfg.x0) est.R0_sq = p.distance_to_optimum_sq(*cfg.x0);

  if (analytic)
    for (const auto& [k, v] : analytic->extras) est.extras[k] = v;
  if (std::isfinite(nu_fit)) est.extras["nu_fitted"] = nu_fit;
  est.extras["probes"] = static_cast<double>(probes.size());
  est.extras["envelope_violations"] =
      static_cast<double>(envelope_violations(probes, est.L, est.B_sq));
  return est;
}

// ---- bounds ----------------------------------------------------------------

double bound_thm23(const ConditionEstimates& est, double gamma, std::size_t t) {
  check_stepsize(est, gamma, false);
  require(t >= 1, ErrorKind::invalid_parameter, "averaged-gap bound needs t >= 1");
  const double q = 2.0 - gamma * est.L;
  return est.R0_sq / (static_cast<double>(t) * gamma * q) + gamma * est.B_eff_sq / q;
}

double bound_thm23_optimal(const ConditionEstimates& est, std::size_t T) {
  require(T >= 1, ErrorKind::invalid_parameter, "horizon must be at least 1");
  require(est.B_eff_sq > 0.0, ErrorKind::invalid_parameter,
          "optimal constant stepsize needs a positive noise constant");
  const double Td = static_cast<double>(T);
  require(Td * est.B_eff_sq > est.R0_sq * est.L * est.L, ErrorKind::invalid_parameter,
          fmt::format("optimal constant stepsize requires T B^2 > R0^2 L^2 ({} <= {})",
                      Td * est.B_eff_sq, est.R0_sq * est.L * est.L));
  return 2.0 * est.R0() * est.B_eff() / std::sqrt(Td);
}

double bound_thm24(const ConditionEstimates& est, double R_sq_cap, std::size_t t) {
  require(est.L > 0.0, ErrorKind::invalid_parameter, "inverse-sqrt bound needs L > 0");
  require(t >= 1, ErrorKind::invalid_parameter, "inverse-sqrt bound needs t >= 1");
  require(std::isfinite(R_sq_cap) && R_sq_cap >= 0.0, ErrorKind::invalid_parameter,
          "distance cap must be finite and nonnegative");
  return (R_sq_cap * est.L + 2.0 * est.B_eff_sq / est.L) / std::sqrt(static_cast<double>(t));
}

double contraction_factor(const ConditionEstimates& est, double gamma) {
  return 1.0 - est.mu * gamma + est.mu * est.L * gamma * gamma / 2.0;
}

double bound_thm25(const ConditionEstimates& est, double gamma, std::size_t t) {
  check_stepsize(est, gamma, true);
  const double rho = contraction_factor(est, gamma);
  if (rho <= -1.0) return t == 0 ? est.R0_sq : est.B_eff_sq * gamma * gamma;
  const double a = std::abs(rho);
  const double decay = std::pow(a, static_cast<double>(t)) * est.R0_sq;
  if (est.B_eff_sq == 0.0) return decay;
  if (a >= 1.0)
    fail(ErrorKind::vacuous_bound,
         fmt::format("|rho| = {} >= 1 with positive noise: the bound is vacuous", a));
  return decay + est.B_eff_sq * gamma * gamma / (1.0 - a);
}

std::size_t thm27_switch_index(const ConditionEstimates& est, double c) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::invalid_parameter, "c must be positive");
  return static_cast<std::size_t>(std::floor(c * est.L));
}

double bound_thm27(const ConditionEstimates& est, double c, std::size_t t) {
  const std::size_t t0 = thm27_switch_index(est, c);
  if (t < t0) return hybrid_first_phase(est, t);
  const double r0 = t0 == 0 ? est.R0_sq : hybrid_first_phase(est, t0);
  const double d = c * c * est.B_eff_sq;
  const double cp = 0.5 * c * est.mu;
  require(cp > 0.0, ErrorKind::invalid_parameter, "hybrid bound needs mu > 0");
  Lemma11Case which = Lemma11Case::above;
  if (std::abs(cp - 1.0) <= 1e-12) which = Lemma11Case::equal;
  else if (cp < 1.0) which = Lemma11Case::below;
  const double v = lemma11_eval(which, cp, d, t0, r0, t);
  return t == t0 ? std::max(v, r0) : v;
}

double bound_lemma11(double c, double d, std::size_t t0, double r_t0, std::size_t t) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::invalid_parameter, "lemma constant c must be positive");
  require(std::isfinite(d) && d >= 0.0, ErrorKind::invalid_parameter, "lemma constant d must be nonnegative");
  require(std::isfinite(r_t0) && r_t0 >= 0.0, ErrorKind::invalid_parameter,
          "initial term must be finite and nonnegative");
  require(t >= t0, ErrorKind::invalid_parameter, "lemma bound holds only for t >= t0");
  const Lemma11Case which =
      c == 1.0 ? Lemma11Case::equal : (c < 1.0 ? Lemma11Case::below : Lemma11Case::above);
  return lemma11_eval(which, c, d, t0, r_t0, t);
}

double lemma12_constant(double c, double d, double gamma_exp, double zeta, std::size_t t0,
                        double r_t0) {
  require(std::isfinite(c) && c > 0.0, ErrorKind::invalid_parameter, "lemma constant c must be positive");
  require(std::isfinite(d) && d >= 0.0, ErrorKind::invalid_parameter, "lemma constant d must be nonnegative");
  require(gamma_exp > 0.0 && gamma_exp < 1.0, ErrorKind::invalid_parameter,
          "lemma exponent gamma must lie in (0, 1)");
  require(zeta > gamma_exp, ErrorKind::invalid_parameter, "lemma exponent zeta must exceed gamma");
  require(std::isfinite(r_t0) && r_t0 >= 0.0, ErrorKind::invalid_parameter,
          "initial term must be finite and nonnegative");
  const double p = zeta - gamma_exp;
  const double s0 = static_cast<double>(t0) + 1.0;
  const double margin = c - p * std::pow(s0, gamma_exp - 1.0);
  require(margin > 0.0, ErrorKind::invalid_parameter,
          fmt::format("envelope needs c > (zeta - gamma) (t0 + 1)^(gamma - 1), margin {}", margin));
  return std::max({r_t0 * std::pow(s0, p), d / margin, d * std::pow(2.0, p)});
}

double bound_lemma12(double c, double d, double gamma_exp, double zeta, std::size_t t0,
                     double r_t0, std::size_t t) {
  require(t >= t0, ErrorKind::invalid_parameter, "lemma bound holds only for t >= t0");
  const double K = lemma12_constant(c, d, gamma_exp, zeta, t0, r_t0);
  return K / std::pow(static_cast<double>(t) + 1.0, zeta - gamma_exp);
}

std::size_t rsfo_budget(const ConditionEstimates& est, double eps0, double eps) {
  require(est.mu_growth > 0.0, ErrorKind::invalid_parameter,
          "restart budget needs mu > 0; use the linear-rate path instead");
  require(est.B_eff_sq > 0.0, ErrorKind::invalid_parameter,
          "restart budget needs B > 0; use the linear-rate path instead");
  const std::size_t epochs = restart_epoch_count(eps0, eps);
  if (epochs == 0) return 0;
  return restart_inner_iterations(est.B_eff(), est.mu_growth, est.nu, eps) * epochs;
}

SharedMinimizerReport shared_minimizer_diagnostic(const CompositeProblem& p, std::uint64_t seed) {
  RandomStream rng(seed);
  const Vector probe = p.optimal_set().anchor() + rng.unit_vector(p.dim());
  SharedMinimizerReport rep;
  rep.point = p.project_optimal(probe);
  rep.value = p.expected_sq_subgradient_norm(rep.point);
  rep.strong_condition_plausible = rep.value < kSharedMinimizerThreshold;
  return rep;
}

// ---- RateBound -------------------------------------------------------------

double RateBound::operator()(std::size_t t) const {
  require(t >= first_t_, ErrorKind::invalid_parameter,
          fmt::format("{} bound is defined from t = {}, asked for t = {}", to_string(kind_), first_t_, t));
  return scale_ * eval_(t);
}

RateBound RateBound::scaled(double factor) const {
  RateBound b = *this;
  b.scale_ *= factor;
  b.params_["scale"] = b.scale_;
  return b;
}

RateBound RateBound::thm23(const ConditionEstimates& est, double gamma) {
  check_stepsize(est, gamma, false);
  RateBound b(Kind::thm23_gap, Quantity::f_gap, 1,
              [est, gamma](std::size_t t) { return bound_thm23(est, gamma, t); });
  b.params_ = {{"gamma", gamma}, {"L", est.L}, {"B_eff_sq", est.B_eff_sq}, {"R0_sq", est.R0_sq}};
  return b;
}

RateBound RateBound::thm24(const ConditionEstimates& est, double R_sq_cap) {
  bound_thm24(est, R_sq_cap, 1);
  RateBound b(Kind::thm24_gap, Quantity::f_gap, 1,
              [est, R_sq_cap](std::size_t t) { return bound_thm24(est, R_sq_cap, t); });
  b.params_ = {{"R_sq_cap", R_sq_cap}, {"L", est.L}, {"B_eff_sq", est.B_eff_sq}};
  return b;
}

RateBound RateBound::thm25(const ConditionEstimates& est, double gamma) {
  bound_thm25(est, gamma, 0);
  RateBound b(Kind::thm25_dist, Quantity::dist_sq, 0,
              [est, gamma](std::size_t t) { return bound_thm25(est, gamma, t); });
  b.params_ = {{"gamma", gamma},         {"rho", contraction_factor(est, gamma)}, {"L", est.L},
               {"mu", est.mu},           {"B_eff_sq", est.B_eff_sq},              {"R0_sq", est.R0_sq}};
  return b;
}

RateBound RateBound::thm27(const ConditionEstimates& est, double c) {
  const std::size_t t0 = thm27_switch_index(est, c);
  bound_thm27(est, c, t0 + 1);
  RateBound b(Kind::thm27_dist, Quantity::dist_sq, 0,
              [est, c](std::size_t t) { return bound_thm27(est, c, t); });
  b.params_ = {{"c", c},   {"t0", static_cast<double>(t0)}, {"L", est.L}, {"mu", est.mu},
               {"B_eff_sq", est.B_eff_sq}, {"R0_sq", est.R0_sq}};
  return b;
}

RateBound RateBound::thm31(double eps0) {
  require(std::isfinite(eps0) && eps0 > 0.0, ErrorKind::invalid_parameter, "eps0 must be positive");
  RateBound b(Kind::thm31_budget, Quantity::f_gap, 0,
              [eps0](std::size_t t) { return std::ldexp(eps0, -static_cast<int>(t)); });
  b.params_ = {{"eps0", eps0}};
  return b;
}

RateBound RateBound::lemma11(double c, double d, std::size_t t0, double r_t0) {
  bound_lemma11(c, d, t0, r_t0, t0);
  RateBound b(Kind::lemma11, Quantity::sequence, t0,
              [=](std::size_t t) { return bound_lemma11(c, d, t0, r_t0, t); });
  b.params_ = {{"c", c}, {"d", d}, {"t0", static_cast<double>(t0)}, {"r_t0", r_t0}};
  return b;
}

RateBound RateBound::lemma12(double c, double d, double gamma_exp, double zeta, std::size_t t0,
                             double r_t0) {
  const double K = lemma12_constant(c, d, gamma_exp, zeta, t0, r_t0);
  const double p = zeta - gamma_exp;
  RateBound b(Kind::lemma12, Quantity::sequence, t0, [K, p](std::size_t t) {
    return K / std::pow(static_cast<double>(t) + 1.0, p);
  });
  b.params_ = {{"c", c},       {"d", d},   {"gamma", gamma_exp}, {"zeta", zeta},
               {"t0", static_cast<double>(t0)}, {"r_t0", r_t0}, {"K", K}};
  return b;
}

std::string_view to_string(RateBound::Kind kind) noexcept {
  switch (kind) {
    case RateBound::Kind::thm23_gap: return "thm23";
    case RateBound::Kind::thm24_gap: return "thm24";
    case RateBound::Kind::thm25_dist: return "thm25";
    case RateBound::Kind::thm27_dist: return "thm27";
    case RateBound::Kind::thm31_budget: return "thm31";
    case RateBound::Kind::lemma11: return "lemma11";
    case RateBound::Kind::lemma12: return "lemma12";
  }
  return "unknown";
}

std::optional<RateBound::Kind> bound_kind_from_string(std::string_view name) noexcept {
  for (auto k : {RateBound::Kind::thm23_gap, RateBound::Kind::thm24_gap, RateBound::Kind::thm25_dist,
                 RateBound::Kind::thm27_dist, RateBound::Kind::thm31_budget, RateBound::Kind::lemma11,
                 RateBound::Kind::lemma12})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

}  // namespace sfo
