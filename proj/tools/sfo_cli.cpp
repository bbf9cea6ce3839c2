#include "sfo/analysis.hpp"
#include "sfo/harness/acceptance.hpp"
#include "sfo/harness/config.hpp"
#include "sfo/harness/experiment.hpp"
#include "sfo/harness/report.hpp"
#include "sfo/harness/verify.hpp"
#include "sfo/oracles.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>

using namespace sfo;
using namespace sfo::harness;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::optional<std::filesystem::path>& path, const std::string& text) {
  if (path) write_text(*path, text);
  else std::fwrite(text.data(), 1, text.size(), stdout);
}

std::optional<RateBound> bound_for(const std::string& kind_name, const ExperimentConfig& cfg,
                                   const PreparedExperiment& prep) {
  const auto kind = bound_kind_from_string(kind_name);
  if (!kind) throw UsageError(fmt::format("unknown bound kind '{}'", kind_name));
  const auto& s = prep.schedule;
  using K = StepsizeSchedule::Kind;
  switch (*kind) {
    case RateBound::Kind::thm23_gap:
      if (s.kind() != K::constant && s.kind() != K::optimal_constant)
        throw UsageError("thm23 needs a constant or optimal-constant schedule");
      return RateBound::thm23(prep.estimates, s.gamma());
    case RateBound::Kind::thm24_gap:
      if (s.kind() != K::inv_sqrt || prep.estimates.L <= 0.0 ||
          std::abs(s.gamma() * prep.estimates.L - 1.0) > 1e-12)
        throw UsageError("thm24 needs an inv-sqrt schedule with gamma0 = 1/L");
      return RateBound::thm24(prep.estimates, cfg.r_sq_cap.value_or(prep.estimates.R0_sq));
    case RateBound::Kind::thm25_dist:
      if (s.kind() != K::constant && s.kind() != K::optimal_constant)
        throw UsageError("thm25 needs a constant schedule");
      return RateBound::thm25(prep.estimates, s.gamma());
    case RateBound::Kind::thm27_dist:
      if (s.kind() != K::hybrid || s.alpha() != 1.0) throw UsageError("thm27 needs a hybrid schedule with alpha = 1");
      return RateBound::thm27(prep.estimates, s.c());
    case RateBound::Kind::thm31_budget:
      return std::nullopt;
    case RateBound::Kind::lemma11:
    case RateBound::Kind::lemma12:
      throw UsageError("lemma bounds are checked by 'selftest', not against an experiment");
  }
  return std::nullopt;
}

AggregateTrajectory restart_trajectory(const ExperimentConfig& cfg, const PreparedExperiment& prep,
                                       double& eps0) {
  const double gap0 = prep.problem.full_objective(prep.x0) - prep.problem.optimal_value();
  eps0 = cfg.restart.epsilon0.value_or(gap0);
  RestartPlan plan;
  plan.epsilon0 = eps0;
  plan.mu = prep.estimates.mu_growth;
  plan.nu = prep.estimates.nu;
  plan.B_eff = prep.estimates.B_eff();
  plan.target_eps = cfg.restart.target;
  const auto reps = run_restart_replications(prep.problem, cfg.method, plan, prep.x0, cfg.replications,
                                             cfg.base_seed);
  AggregateTrajectory traj;
  traj.replications = reps.runs.size();
  const std::size_t epochs = reps.runs.front().epochs.size();
  AggregateRow first;
  first.mean_f_gap = gap0;
  traj.rows.push_back(first);
  for (std::size_t e = 0; e < epochs; ++e) {
    std::vector<double> gaps;
    for (const auto& r : reps.runs) gaps.push_back(r.epochs[e].f_gap);
    const auto ms = mean_stderr(gaps);
    AggregateRow row;
    row.t = e + 1;
    row.gamma = reps.runs.front().epochs[e].gamma;
    row.mean_f_gap = ms.mean;
    row.stderr_f_gap = ms.se;
    traj.rows.push_back(row);
  }
  return traj;
}

int cmd_run(const std::string& config_path, const std::optional<std::filesystem::path>& csv_opt,
            const std::optional<std::filesystem::path>& svg_opt) {
  const ExperimentConfig cfg = load_config(config_path);
  const PreparedExperiment prep = prepare(cfg);
  const AggregateTrajectory traj = run_experiment(cfg, prep);
  emit(csv_opt ? csv_opt : cfg.csv, format_csv(traj));
  const auto svg = svg_opt ? svg_opt : cfg.svg;
  if (svg) {
    std::vector<Series> series{dist_series(traj)};
    if (cfg.bound) {
      if (auto b = bound_for(*cfg.bound, cfg, prep); b && b->quantity() == RateBound::Quantity::dist_sq) {
        Series s{std::string(to_string(b->kind())) + " bound", {}};
        for (const auto& r : traj.rows)
          if (r.t >= b->first_t()) s.points.emplace_back(static_cast<double>(r.t), (*b)(r.t));
        series.push_back(std::move(s));
      }
    }
    write_svg(*svg, series, prep.problem.name());
  }
  return kPass;
}

int cmd_estimate(const std::string& config_path, const std::optional<std::filesystem::path>& out) {
  const ExperimentConfig cfg = load_config(config_path);
  const PreparedExperiment prep = prepare(cfg);
  const auto diag = shared_minimizer_diagnostic(prep.problem);
  ConditionEstimates est = prep.estimates;
  est.extras["shared_minimizer_value"] = diag.value;
  emit(out ? out : cfg.estimates_out, format_estimates(est));
  return kPass;
}

int cmd_verify(const std::string& config_path, std::optional<std::string> kind, std::optional<double> sigmas,
               const std::optional<std::filesystem::path>& report_path) {
  const ExperimentConfig cfg = load_config(config_path);
  if (!kind) kind = cfg.bound;
  if (!kind) throw UsageError("verify needs --bound or [verify] bound");
  const PreparedExperiment prep = prepare(cfg);
  SlackPolicy policy;
  policy.sigmas = sigmas.value_or(cfg.sigmas);
  VerifyReport rep;
  if (*kind == "thm31") {
    double eps0 = 0.0;
    const AggregateTrajectory traj = restart_trajectory(cfg, prep, eps0);
    rep = verify_bound(traj, RateBound::thm31(eps0), policy);
  } else {
    const auto bound = bound_for(*kind, cfg, prep);
    const AggregateTrajectory traj = run_experiment(cfg, prep);
    if (cfg.csv) write_csv(*cfg.csv, traj);
    rep = verify_bound(traj, *bound, policy);
  }
  emit(report_path, format_report(rep));
  std::fprintf(stderr, "%s: %s\n", rep.pass ? "PASS" : "FAIL", rep.message.c_str());
  return rep.pass ? kPass : kFail;
}

int cmd_prox_check(std::size_t samples, std::uint64_t seed) {
  oracle::ProxCheckOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  const auto report = oracle::prox_check(opt);
  std::printf("family,samples,max_oracle_error,max_moreau_violation,max_firm_violation,pass\n");
  for (const auto& f : report.families)
    std::printf("%s\n", fmt::format("{},{},{:.3e},{:.3e},{:.3e},{}", to_string(f.family), f.samples,
                                    f.max_oracle_error, f.max_moreau_violation, f.max_firm_violation,
                                    f.pass ? "yes" : "no")
                            .c_str());
  std::printf("%s\n", report.pass ? "PASS" : "FAIL");
  return report.pass ? kPass : kFail;
}

int cmd_selftest(const std::filesystem::path& out, const std::optional<std::filesystem::path>& compare) {
  const auto results = run_selftest(out, [](const CriterionResult& r) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
  });
  bool ok = std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
  if (compare) {
    const auto cmp = compare_outputs(out, *compare);
    std::printf("[%s] determinism: %zu CSV files compared with %s%s\n", cmp.identical ? "PASS" : "FAIL", cmp.files,
                compare->string().c_str(), cmp.identical ? ", byte-identical" : "");
    for (const auto& d : cmp.differences) std::printf("  %s\n", d.c_str());
    ok = ok && cmp.identical;
  }
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic first-order methods: experiments, constant estimation and bound verification"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::filesystem::path> csv_out, svg_out, est_out, report_out;
  auto* run = app.add_subcommand("run", "run a Monte-Carlo experiment and write the aggregate CSV");
  run->add_option("config", config, "experiment config file")->required();
  run->add_option("--csv", csv_out, "CSV output path (default: config or stdout)");
  run->add_option("--svg", svg_out, "SVG chart output path");

  auto* estimate = app.add_subcommand("estimate", "estimate regularity constants");
  estimate->add_option("config", config, "experiment config file")->required();
  estimate->add_option("--out", est_out, "estimates output path (default: config or stdout)");

  std::optional<std::string> bound_kind;
  std::optional<double> sigmas;
  auto* verify = app.add_subcommand("verify", "check a trajectory against a convergence bound");
  verify->add_option("config", config, "experiment config file")->required();
  verify->add_option("--bound", bound_kind, "thm23 | thm24 | thm25 | thm27 | thm31");
  verify->add_option("--sigmas", sigmas, "Monte-Carlo slack in standard errors");
  verify->add_option("--report", report_out, "per-t report output path (default: stdout)");

  std::size_t samples = 1000;
  std::uint64_t seed = 2024;
  auto* prox = app.add_subcommand("prox-check", "compare proximal operators with numerical oracles");
  prox->add_option("--samples", samples, "random instances per family");
  prox->add_option("--seed", seed, "random seed");

  std::filesystem::path self_out = "selftest_out";
  std::optional<std::filesystem::path> compare_with;
  auto* self = app.add_subcommand("selftest", "run the acceptance suite");
  self->add_option("--out", self_out, "directory for CSV outputs");
  self->add_option("--compare-with", compare_with, "directory of a previous run to compare byte-for-byte");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*run) return cmd_run(config, csv_out, svg_out);
    if (*estimate) return cmd_estimate(config, est_out);
    if (*verify) return cmd_verify(config, bound_kind, sigmas, report_out);
    if (*prox) return cmd_prox_check(samples, seed);
    if (*self) return cmd_selftest(self_out, compare_with);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
    return kUsage;
  }
  return kUsage;
}
