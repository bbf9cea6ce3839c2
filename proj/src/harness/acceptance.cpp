#include "sfo/harness/acceptance.hpp"

#include "sfo/analysis.hpp"
#include "sfo/harness/experiment.hpp"
#include "sfo/harness/generators.hpp"
#include "sfo/harness/report.hpp"
#include "sfo/harness/verify.hpp"
#include "sfo/oracles.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

namespace sfo::harness {

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
 public:
  Timer() : start_(Clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_;
};

CriterionResult finish(CriterionResult r, bool ok, const Timer& timer, std::string detail) {
  r.seconds = timer.seconds();
  const bool in_time = r.limit_seconds <= 0.0 || r.seconds < r.limit_seconds;
  r.pass = ok && in_time;
  r.detail = std::move(detail);
  if (!in_time) r.detail += fmt::format("; runtime {:.1f} s exceeds the limit", r.seconds);
  return r;
}

template <typename F>
CriterionResult guarded(int id, const char* name, double limit, F&& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.limit_seconds = limit;
  Timer timer;
  try {
    return body(r, timer);
  } catch (const std::exception& e) {
    return finish(r, false, timer, fmt::format("error: {}", e.what()));
  }
}

std::string g(double v) { return fmt::format("{:.4g}", v); }

}  // namespace

std::string format_result(const CriterionResult& r) {
  std::string limit = r.limit_seconds > 0.0 ? fmt::format(", limit {:.0f} s", r.limit_seconds) : "";
  return fmt::format("[{}] criterion {} {}: {} ({:.2f} s{})", r.pass ? "PASS" : "FAIL", r.id, r.name,
                     r.detail, r.seconds, limit);
}

// Kaczmarz (SGD with gamma = 1) on a consistent 50 x 20 system.
CriterionResult criterion_pure_linear(const std::filesystem::path& out_dir) {
  return guarded(1, "pure-linear", 10.0, [&](CriterionResult r, const Timer& timer) {
    const CompositeProblem p = consistent_linear_system(50, 20, 11);
    const Vector x0 = Vector::Zero(p.dim());
    ProbeConfig probe;
    probe.x0 = x0;
    const ConditionEstimates est = estimate_constants(p, probe);
    const double gamma = 1.0;
    const auto schedule = StepsizeSchedule::constant(gamma, est.L);

    ReplicationSetup setup;
    setup.problem = &p;
    setup.schedule = &schedule;
    setup.x0 = x0;
    setup.iterations = 400;
    setup.replications = 200;
    setup.base_seed = 101;
    const AggregateTrajectory traj = run_replications(setup);
    write_csv(out_dir / "criterion1_pure_linear.csv", traj);

    const RateBound bound = RateBound::thm25(est, gamma);
    const VerifyReport rep = verify_bound(traj, bound);
    const double rho = std::abs(contraction_factor(est, gamma));
    const double fitted = fitted_contraction(traj);
    const double rel = std::abs(fitted - rho) / rho;
    const bool ok = rep.pass && rel <= 0.15;
    return finish(r, ok, timer,
                  fmt::format("L={} B^2={} mu_hat={} |rho|={} fitted contraction={} (rel diff {}); "
                              "1-mu_hat={}; {}",
                              g(est.L), g(est.B_sq), g(est.mu), g(rho), g(fitted), g(rel), g(1.0 - est.mu),
                              rep.message));
  });
}

// Optimal constant stepsize on a sharp polyhedral instance.
CriterionResult criterion_sqrt_gap(const std::filesystem::path& out_dir) {
  return guarded(2, "sqrt-gap", 60.0, [&](CriterionResult r, const Timer& timer) {
    const CompositeProblem p = sharp_polyhedral(30, 10, 21);
    const Vector x0 = Vector::Zero(p.dim());
    ProbeConfig probe;
    probe.x0 = x0;
    const ConditionEstimates est = estimate_constants(p, probe);
    const std::size_t T = 10000;
    const auto schedule = StepsizeSchedule::optimal_constant(est.R0(), est.B_eff(), T, est.L);

    ReplicationSetup setup;
    setup.problem = &p;
    setup.schedule = &schedule;
    setup.x0 = x0;
    setup.iterations = T;
    setup.replications = 100;
    setup.base_seed = 202;
    const AggregateTrajectory traj = run_replications(setup);
    write_csv(out_dir / "criterion2_sqrt_gap.csv", traj);

    const double bound = bound_thm23_optimal(est, T);
    const auto& last = traj.rows.back();
    const bool final_ok = last.t == T && last.mean_f_gap <= bound + 3.0 * last.stderr_f_gap;
    const VerifyReport rep = verify_bound(traj, RateBound::thm23(est, schedule.gamma()));
    return finish(r, final_ok && rep.pass, timer,
                  fmt::format("L={} B^2={} R0={} gamma={}; mean gap at T={} is {} (stderr {}) vs "
                              "2 R0 B / sqrt(T) = {}; {}",
                              g(est.L), g(est.B_eff_sq), g(est.R0()), g(schedule.gamma()), T,
                              g(last.mean_f_gap), g(last.stderr_f_gap), g(bound), rep.message));
  });
}

// Plateau of constant-stepsize SGD on an inconsistent least-squares problem.
CriterionResult criterion_noise_floor(const std::filesystem::path& out_dir) {
  return guarded(3, "noise-floor", 60.0, [&](CriterionResult r, const Timer& timer) {
    const CompositeProblem p = least_squares(30, 3, 0.5, 31);
    const Vector x0 = Vector::Zero(p.dim());
    ProbeConfig probe;
    probe.x0 = x0;
    const ConditionEstimates est = estimate_constants(p, probe);
    const double gamma = 0.4;
    const std::size_t iters = 4000;
    const std::size_t window = 2000;

    double level[2] = {0.0, 0.0};
    double floor_bound[2] = {0.0, 0.0};
    bool floor_ok = true;
    std::string floor_note;
    const double gammas[2] = {gamma, gamma / 4.0};
    for (int k = 0; k < 2; ++k) {
      const auto schedule = StepsizeSchedule::constant(gammas[k]);
      ReplicationSetup setup;
      setup.problem = &p;
      setup.schedule = &schedule;
      setup.x0 = x0;
      setup.iterations = iters;
      setup.replications = 200;
      setup.base_seed = 303 + static_cast<std::uint64_t>(k);
      setup.options.stride = 10;
      const AggregateTrajectory traj = run_replications(setup);
      write_csv(out_dir / fmt::format("criterion3_noise_floor_{}.csv", k == 0 ? "gamma" : "gamma_over_4"), traj);
      level[k] = plateau_level(traj, window);
      const double rho = std::abs(contraction_factor(est, gammas[k]));
      if (est.L > 0.0 && gammas[k] > 2.0 / est.L) {
        floor_note += fmt::format(" gamma={} exceeds 2/L;", g(gammas[k]));
        floor_ok = false;
      } else {
        floor_bound[k] = est.B_eff_sq * gammas[k] * gammas[k] / (1.0 - rho);
        if (!(level[k] <= floor_bound[k])) floor_ok = false;
      }
    }
    const double ratio = level[0] / level[1];
    const bool ok = ratio >= 4.0 && ratio <= 64.0 && floor_ok;
    return finish(r, ok, timer,
                  fmt::format("B^2={} mu={} L={}; plateaus {} (gamma={}) and {} (gamma={}), ratio {} "
                              "in [4, 64]; noise-floor bounds {} and {}{}",
                              g(est.B_eff_sq), g(est.mu), g(est.L), g(level[0]), g(gammas[0]), g(level[1]),
                              g(gammas[1]), g(ratio), g(floor_bound[0]), g(floor_bound[1]), floor_note));
  });
}

// Hybrid stepsize min(1/L, c/(t+1)) with c = 2/mu.
CriterionResult criterion_hybrid(const std::filesystem::path& out_dir) {
  return guarded(4, "hybrid", 120.0, [&](CriterionResult r, const Timer& timer) {
    const CompositeProblem p = least_squares(30, 3, 0.5, 41);
    const Vector x0 = Vector::Zero(p.dim());
    ProbeConfig probe;
    probe.x0 = x0;
    const ConditionEstimates est = estimate_constants(p, probe);
    const auto schedule = recommended_hybrid(est.L, est.mu);

    ReplicationSetup setup;
    setup.problem = &p;
    setup.schedule = &schedule;
    setup.x0 = x0;
    setup.iterations = 100000;
    setup.replications = 100;
    setup.base_seed = 404;
    const AggregateTrajectory traj = run_replications(setup);
    write_csv(out_dir / "criterion4_hybrid.csv", traj);

    const LineFit fit = final_decade_fit(traj);
    const VerifyReport rep = verify_bound(traj, RateBound::thm27(est, schedule.c()));
    const bool ok = fit.slope >= -1.3 && fit.slope <= -0.7 && rep.pass;
    return finish(r, ok, timer,
                  fmt::format("L={} mu={} c={} t0={}; final-decade slope {} (R^2 {}); {}", g(est.L), g(est.mu),
                              g(schedule.c()), thm27_switch_index(est, schedule.c()), g(fit.slope), g(fit.r2),
                              rep.message));
  });
}

// Restarted SPG on a sharp instance.
CriterionResult criterion_restart(const std::filesystem::path& out_dir) {
  return guarded(5, "restart", 120.0, [&](CriterionResult r, const Timer& timer) {
    const CompositeProblem p = sharp_polyhedral(30, 10, 51);
    const Vector x0 = Vector::Zero(p.dim());
    ProbeConfig probe;
    probe.x0 = x0;
    const ConditionEstimates est = estimate_constants(p, probe);
    const double eps0 = p.full_objective(x0) - p.optimal_value();
    const std::size_t expected_K =
        static_cast<std::size_t>(std::ceil(4.0 * est.B_eff_sq / (est.mu_growth * est.mu_growth)));

    std::string csv = "target,epochs,inner_iterations,total_iterations,mean_final_gap,stderr_final_gap\n";
    std::vector<double> logs, totals;
    bool gaps_ok = true;
    bool k_ok = true;
    std::string gap_note;
    std::uint64_t seed = 505;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      RestartPlan plan;
      plan.epsilon0 = eps0;
      plan.mu = est.mu_growth;
      plan.nu = est.nu;
      plan.B_eff = est.B_eff();
      plan.target_eps = eps;
      const auto reps = run_restart_replications(p, Method::spg, plan, x0, 50, seed++);
      const auto ms = mean_stderr(reps.final_gaps);
      const auto& first = reps.runs.front();
      for (const auto& run : reps.runs) {
        require(run.total_iterations == first.total_iterations, ErrorKind::solver_failure,
                "replications used different iteration budgets");
        for (const auto& e : run.epochs) k_ok = k_ok && e.iterations == expected_K;
      }
      if (!(ms.mean <= eps + 3.0 * ms.se)) {
        gaps_ok = false;
        gap_note += fmt::format(" eps={} gap={};", g(eps), g(ms.mean));
      }
      csv += fmt::format("{:.17g},{},{},{},{:.17g},{:.17g}\n", eps, first.epochs.size(), expected_K,
                         first.total_iterations, ms.mean, ms.se);
      logs.push_back(std::log(eps0 / eps));
      totals.push_back(static_cast<double>(first.total_iterations));
    }
    write_text(out_dir / "criterion5_restart.csv", csv);
    const LineFit fit = fit_line(logs, totals);
    const bool ok = gaps_ok && k_ok && fit.r2 >= 0.95;
    return finish(r, ok, timer,
                  fmt::format("eps0={} B^2={} mu={} nu={}; K_t={} in every epoch: {}; final gaps within "
                              "target: {}{}; totals {} linear fit R^2 {}",
                              g(eps0), g(est.B_eff_sq), g(est.mu_growth), g(est.nu), expected_K,
                              k_ok ? "yes" : "no", gaps_ok ? "yes" : "no", gap_note,
                              fmt::format("{}", fmt::join(totals, "/")), g(fit.r2)));
  });
}

CriterionResult criterion_prox_oracles(const std::filesystem::path& out_dir) {
  return guarded(6, "prox-oracles", 30.0, [&](CriterionResult r, const Timer& timer) {
    const auto report = oracle::prox_check();
    std::string csv = "family,samples,max_oracle_error,max_moreau_violation,max_firm_violation,pass\n";
    double worst_oracle = 0.0, worst_moreau = 0.0, worst_firm = 0.0;
    std::string failed;
    for (const auto& f : report.families) {
      csv += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{}\n", to_string(f.family), f.samples, f.max_oracle_error,
                         f.max_moreau_violation, f.max_firm_violation, f.pass ? 1 : 0);
      worst_oracle = std::max(worst_oracle, f.max_oracle_error);
      worst_moreau = std::max(worst_moreau, f.max_moreau_violation);
      worst_firm = std::max(worst_firm, f.max_firm_violation);
      if (!f.pass) failed += fmt::format(" {}", to_string(f.family));
    }
    write_text(out_dir / "criterion6_prox_oracles.csv", csv);
    return finish(r, report.pass, timer,
                  fmt::format("{} families x 1000 samples; worst oracle error {}, Moreau violation {}, "
                              "firm-nonexpansiveness violation {}{}",
                              report.families.size(), g(worst_oracle), g(worst_moreau), g(worst_firm),
                              failed.empty() ? "" : "; failing:" + failed));
  });
}

CriterionResult criterion_recurrences(const std::filesystem::path& out_dir) {
  return guarded(7, "recurrences", 5.0, [&](CriterionResult r, const Timer& timer) {
    const std::size_t T = 100000;
    std::string csv = "lemma,c,d,gamma,zeta,t0,r_t0,max_ratio,pass\n";
    bool ok = true;
    std::size_t cases = 0;
    for (std::size_t t0 : {0u, 5u}) {
      for (double c : {0.5, 1.0, 2.0}) {
        const auto seq = oracle::simulate_lemma11(c, 1.0, t0, 1.0, T);
        const auto bound = RateBound::lemma11(c, 1.0, t0, 1.0);
        const auto rep = verify_sequence(seq, t0, bound);
        double ratio = 0.0;
        for (const auto& row : rep.rows) ratio = std::max(ratio, row.mean / row.bound);
        csv += fmt::format("1.1,{},1,,,{},1,{:.17g},{}\n", c, t0, ratio, rep.pass ? 1 : 0);
        ok = ok && rep.pass;
        ++cases;
      }
      for (auto [ge, ze] : {std::pair{0.5, 1.0}, std::pair{0.5, 1.5}}) {
        const auto seq = oracle::simulate_lemma12(2.0, 1.0, ge, ze, t0, 1.0, T);
        const auto bound = RateBound::lemma12(2.0, 1.0, ge, ze, t0, 1.0);
        const auto rep = verify_sequence(seq, t0, bound);
        double ratio = 0.0;
        for (const auto& row : rep.rows) ratio = std::max(ratio, row.mean / row.bound);
        csv += fmt::format("1.2,2,1,{},{},{},1,{:.17g},{}\n", ge, ze, t0, ratio, rep.pass ? 1 : 0);
        ok = ok && rep.pass;
        ++cases;
      }
    }
    write_text(out_dir / "criterion7_recurrences.csv", csv);
    return finish(r, ok, timer,
                  fmt::format("{} equality-case simulations up to t = {}: {}", cases, T,
                              ok ? "all below their closed-form bounds" : "bound exceeded"));
  });
}

// G - grad f(x_t) must be a subgradient of g(., xi_t) at x_{t+1}.
CriterionResult criterion_gradient_mapping(const std::filesystem::path& out_dir) {
  return guarded(8, "gradient-mapping", 0.0, [&](CriterionResult r, const Timer& timer) {
    const CompositeProblem p = lasso(40, 10, 0.1, 81);
    RandomStream rng(808);
    RandomStream dirs = rng.split(1);
    Vector x = Vector::Zero(p.dim());
    const double gamma = 0.05;
    double worst = -std::numeric_limits<double>::infinity();
    std::string csv = "t,xi,max_violation\n";
    for (std::size_t t = 0; t < 100; ++t) {
      const std::size_t xi = p.draw_sample(rng);
      const Vector next = spg_step(p, x, gamma, xi);
      const Vector G = gradient_mapping(p, x, gamma, xi);
      const Vector v = G - p.f(xi).subgradient(x);
      const auto& h = p.g(xi);
      const double h0 = h.eval(next);
      double step_worst = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < 10; ++k) {
        const double scale = std::exp(dirs.uniform(std::log(1e-3), std::log(1.0)));
        const Vector y = next + scale * dirs.normal_vector(p.dim());
        const double slack = (h0 + v.dot(y - next)) - h.eval(y);
        step_worst = std::max(step_worst, slack / std::max(1.0, std::abs(h0)));
      }
      worst = std::max(worst, step_worst);
      csv += fmt::format("{},{},{:.17g}\n", t, xi, step_worst);
      x = next;
    }
    write_text(out_dir / "criterion8_gradient_mapping.csv", csv);
    return finish(r, worst <= 1e-8, timer,
                  fmt::format("100 SPG steps on lasso, 10 directions each; worst subgradient-inequality "
                              "violation {} (tol 1e-8)",
                              g(worst)));
  });
}

std::vector<CriterionResult> run_selftest(const std::filesystem::path& out_dir,
                                          void (*on_result)(const CriterionResult&)) {
  std::filesystem::create_directories(out_dir);
  using Fn = CriterionResult (*)(const std::filesystem::path&);
  const Fn criteria[] = {criterion_pure_linear, criterion_sqrt_gap,     criterion_noise_floor,
                         criterion_hybrid,      criterion_restart,      criterion_prox_oracles,
                         criterion_recurrences, criterion_gradient_mapping};
  std::vector<CriterionResult> results;
  for (Fn fn : criteria) {
    results.push_back(fn(out_dir));
    if (on_result) on_result(results.back());
  }
  return results;
}

CompareResult compare_outputs(const std::filesystem::path& a, const std::filesystem::path& b) {
  CompareResult out;
  auto list = [](const std::filesystem::path& dir) {
    std::set<std::string> names;
    if (std::filesystem::is_directory(dir))
      for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv") names.insert(e.path().filename().string());
    return names;
  };
  const auto na = list(a);
  const auto nb = list(b);
  for (const auto& n : na)
    if (!nb.count(n)) out.differences.push_back(fmt::format("{} missing from {}", n, b.string()));
  for (const auto& n : nb)
    if (!na.count(n)) out.differences.push_back(fmt::format("{} missing from {}", n, a.string()));
  for (const auto& n : na) {
    if (!nb.count(n)) continue;
    ++out.files;
    if (read_text(a / n) != read_text(b / n)) out.differences.push_back(fmt::format("{} differs", n));
  }
  out.identical = out.differences.empty() && out.files > 0;
  return out;
}

}  // namespace sfo::harness
