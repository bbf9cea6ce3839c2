#pragma once

#include "sfo/analysis.hpp"
#include "sfo/harness/generators.hpp"
#include "sfo/schedules.hpp"
#include "sfo/solvers.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace sfo::harness {

/// Numeric setting that may be left to the estimates ("auto").
using AutoValue = std::optional<double>;

struct ScheduleSpec {
  StepsizeSchedule::Kind kind = StepsizeSchedule::Kind::constant;
  AutoValue gamma;   // constant
  AutoValue gamma0;  // inv-sqrt; auto = 1/L
  AutoValue c;       // hybrid; auto = 2/mu
  double alpha = 1.0;
  std::optional<std::size_t> horizon;  // optimal-constant; defaults to iterations
};

struct RestartSpec {
  AutoValue epsilon0;  // auto = F(x0) - F*
  double target = 1e-3;
};

struct ExperimentConfig {
  ProblemSpec problem;
  Method method = Method::spg;
  std::size_t iterations = 1000;
  ScheduleSpec schedule;
  std::size_t replications = 10;
  std::uint64_t base_seed = 1;
  std::size_t stride = 0;
  bool record_gap = true;
  /// "zeros", "random:<scale>:<seed>", "offset:<radius>:<seed>" (at the
  /// given distance from X*) or a comma-separated list.
  std::string x0 = "zeros";
  std::size_t probes = 1000;
  std::optional<std::filesystem::path> estimates_file;
  std::map<std::string, double> constant_overrides;
  RestartSpec restart;
  std::optional<std::string> bound;
  std::optional<double> r_sq_cap;
  double sigmas = 3.0;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> svg;
  std::optional<std::filesystem::path> estimates_out;
};

/// INI-style text: sections [problem], [solver], [schedule], [experiment],
/// [restart], [constants], [verify], [output]. Relative paths are resolved
/// against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

Vector make_initial_point(const std::string& spec, const CompositeProblem& p);

/// Problem, initial point, estimates and schedule resolved from a config.
struct PreparedExperiment {
  CompositeProblem problem;
  Vector x0;
  ConditionEstimates estimates;
  StepsizeSchedule schedule;
};

/// Estimates come from the estimates file when given, else from
/// estimate_constants; [constants] entries override single values.
ConditionEstimates resolve_estimates(const ExperimentConfig& cfg, const CompositeProblem& p,
                                     const Vector& x0);

StepsizeSchedule resolve_schedule(const ExperimentConfig& cfg, const ConditionEstimates& est);

PreparedExperiment prepare(const ExperimentConfig& cfg);

}  // namespace sfo::harness
