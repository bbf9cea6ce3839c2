#include "sfo/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <fstream>
#include <set>
#include <sstream>

namespace sfo::harness {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::config, fmt::format("{}: '{}' is not a number", key, value));
}

std::size_t to_size(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used == value.size() && value.front() != '-') return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  fail(ErrorKind::config, fmt::format("{}: '{}' is not a nonnegative integer", key, value));
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(ErrorKind::config, fmt::format("{}: '{}' is not a boolean", key, value));
}

AutoValue to_auto(const std::string& key, const std::string& value) {
  if (value == "auto") return std::nullopt;
  return to_double(key, value);
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

const std::set<std::string> kConstantKeys = {"L",  "B_sq", "Bg_sq",     "B_eff_sq",
                                            "mu", "nu",   "mu_growth", "R0_sq"};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::config, fmt::format("config line {}: {}", e.line(), e.message()));
  }

  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      fail(ErrorKind::config, fmt::format("key '{}' must appear inside a section", section));
    for (const auto& [key, node] : body) {
      const std::string value = trim(node.data());
      const std::string where = section + "." + key;
      if (section == "problem") {
        if (key == "generator") cfg.problem.generator = value;
        else if (key == "m") cfg.problem.m = static_cast<Index>(to_size(where, value));
        else if (key == "n") cfg.problem.n = static_cast<Index>(to_size(where, value));
        else if (key == "seed") cfg.problem.seed = to_size(where, value);
        else if (key == "lambda") cfg.problem.lambda = to_double(where, value);
        else if (key == "noise") cfg.problem.noise = to_double(where, value);
        else if (key == "loss") cfg.problem.loss = value;
        else if (key == "matrix") cfg.problem.matrix = resolve_path(base_dir, value);
        else if (key == "rhs") cfg.problem.rhs = resolve_path(base_dir, value);
        else fail(ErrorKind::config, fmt::format("unknown key '{}'", where));
      } else if (section == "solver") {
        if (key == "method") {
          const auto m = method_from_string(value);
          require(m.has_value(), ErrorKind::config, fmt::format("{}: unknown method '{}'", where, value));
          cfg.method = *m;
        } else if (key == "iterations") {
          cfg.iterations = to_size(where, value);
        } else {
          fail(ErrorKind::config, fmt::format("unknown key '{}'", where));
        }
      } else if (section == "schedule") {
        if (key == "kind") {
          const auto k = schedule_kind_from_string(value);
          require(k.has_value(), ErrorKind::config, fmt::format("{}: unknown schedule '{}'", where, value));
          cfg.schedule.kind = *k;
        } else if (key == "gamma") cfg.schedule.gamma = to_auto(where, value);
        else if (key == "gamma0") cfg.schedule.gamma0 = to_auto(where, value);
        else if (key == "c") cfg.schedule.c = to_auto(where, value);
        else if (key == "alpha") cfg.schedule.alpha = to_double(where, value);
        else if (key == "horizon") cfg.schedule.horizon = to_size(where, value);
        else fail(ErrorKind::config, fmt::format("unknown key '{}'", where));
      } else if (section == "experiment") {
        if (key == "replications") cfg.replications = to_size(where, value);
        else if (key == "base_seed") cfg.base_seed = to_size(where, value);
        else if (key == "stride") cfg.stride = to_size(where, value);
        else if (key == "record_gap") cfg.record_gap = to_bool(where, value);
        else if (key == "x0") cfg.x0 = value;
        else if (key == "probes") cfg.probes = to_size(where, value);
        else fail(ErrorKind::config, fmt::format("unknown key '{}'", where));
      } else if (section == "restart") {
        if (key == "epsilon0") cfg.restart.epsilon0 = to_auto(where, value);
        else if (key == "target") cfg.restart.target = to_double(where, value);
        else fail(ErrorKind::config, fmt::format("unknown key '{}'", where));
      } else if (section == "constants") {
        if (key == "file") cfg.estimates_file = resolve_path(base_dir, value);
        else if (kConstantKeys.count(key)) cfg.constant_overrides[key] = to_double(where, value);
        else fail(ErrorKind::config, fmt::format("unknown key '{}'", where));
      } else if (section == "verify") {
        if (key == "bound") cfg.bound = value;
        else if (key == "sigmas") cfg.sigmas = to_double(where, value);
        else if (key == "r_sq_cap") cfg.r_sq_cap = to_double(where, value);
        else fail(ErrorKind::config, fmt::format("unknown key '{}'", where));
      } else if (section == "output") {
        if (key == "csv") cfg.csv = resolve_path(base_dir, value);
        else if (key == "svg") cfg.svg = resolve_path(base_dir, value);
        else if (key == "estimates") cfg.estimates_out = resolve_path(base_dir, value);
        else fail(ErrorKind::config, fmt::format("unknown key '{}'", where));
      } else {
        fail(ErrorKind::config, fmt::format("unknown section [{}]", section));
      }
    }
  }

  require(!cfg.problem.generator.empty(), ErrorKind::config, "[problem] generator is required");
  require(cfg.replications >= 1, ErrorKind::config, "replications must be at least 1");
  require(cfg.iterations >= 1, ErrorKind::config, "iterations must be at least 1");
  if (cfg.problem.generator == "from_file") {
    require(!cfg.problem.matrix.empty() && !cfg.problem.rhs.empty(), ErrorKind::config,
            "from_file needs [problem] matrix and rhs");
    for (const auto& f : {cfg.problem.matrix, cfg.problem.rhs})
      require(std::filesystem::exists(f), ErrorKind::config,
              fmt::format("referenced file '{}' does not exist", f.string()));
  }
  if (cfg.estimates_file)
    require(std::filesystem::exists(*cfg.estimates_file), ErrorKind::config,
            fmt::format("estimates file '{}' does not exist", cfg.estimates_file->string()));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::config, fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

Vector make_initial_point(const std::string& spec, const CompositeProblem& p) {
  const Index n = p.dim();
  if (spec == "zeros") return Vector::Zero(n);
  if (spec == "anchor") return p.optimal_set().anchor();
  auto fields = [&](std::size_t expected) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    require(parts.size() == expected, ErrorKind::config,
            fmt::format("x0 '{}': expected {} ':'-separated fields", spec, expected));
    return parts;
  };
  if (spec.rfind("random:", 0) == 0) {
    const auto parts = fields(3);
    RandomStream rng(to_size("x0 seed", parts[2]));
    return to_double("x0 scale", parts[1]) * rng.normal_vector(n);
  }
  if (spec.rfind("offset:", 0) == 0) {
    const auto parts = fields(3);
    const double radius = to_double("x0 radius", parts[1]);
    RandomStream rng(to_size("x0 seed", parts[2]));
    const Vector y = p.optimal_set().anchor() + rng.unit_vector(n);
    const Vector py = p.project_optimal(y);
    const Vector d = y - py;
    require(d.norm() > 0.0, ErrorKind::config, "x0 offset: optimal set has no normal direction");
    return py + radius * d / d.norm();
  }
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(to_double("x0", trim(item)));
  require(static_cast<Index>(values.size()) == n, ErrorKind::config,
          fmt::format("x0 has {} entries, problem dimension is {}", values.size(), n));
  return Eigen::Map<Vector>(values.data(), n);
}

ConditionEstimates resolve_estimates(const ExperimentConfig& cfg, const CompositeProblem& p,
                                     const Vector& x0) {
  ConditionEstimates est;
  if (cfg.estimates_file) {
    std::ifstream in(*cfg.estimates_file, std::ios::binary);
    require(in.good(), ErrorKind::config,
            fmt::format("cannot open estimates '{}'", cfg.estimates_file->string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    est = parse_estimates(ss.str());
  } else {
    ProbeConfig probe;
    probe.count = cfg.probes;
    probe.x0 = x0;
    probe.method = cfg.method;
    est = estimate_constants(p, probe);
  }
  const auto& o = cfg.constant_overrides;
  auto set = [&](const char* key, double& field) {
    if (auto it = o.find(key); it != o.end()) field = it->second;
  };
  set("L", est.L);
  set("B_sq", est.B_sq);
  set("Bg_sq", est.Bg_sq);
  set("mu", est.mu);
  set("nu", est.nu);
  set("mu_growth", est.mu_growth);
  set("R0_sq", est.R0_sq);
  if (o.count("B_eff_sq")) est.B_eff_sq = o.at("B_eff_sq");
  else if (o.count("B_sq") || o.count("Bg_sq"))
    est.B_eff_sq = cfg.method == Method::spg ? est.B_sq : est.B_sq + est.Bg_sq;
  if (!o.empty()) est.source += "+overrides";
  validate(est);
  return est;
}

StepsizeSchedule resolve_schedule(const ExperimentConfig& cfg, const ConditionEstimates& est) {
  const auto& s = cfg.schedule;
  const std::optional<double> L = est.L > 0.0 ? std::optional<double>(est.L) : std::nullopt;
  switch (s.kind) {
    case StepsizeSchedule::Kind::constant: {
      if (s.gamma) return StepsizeSchedule::constant(*s.gamma, L);
      require(L.has_value(), ErrorKind::config, "gamma = auto needs L > 0");
      return StepsizeSchedule::constant(1.0 / *L, L);
    }
    case StepsizeSchedule::Kind::optimal_constant:
      return StepsizeSchedule::optimal_constant(est.R0(), est.B_eff(), s.horizon.value_or(cfg.iterations),
                                                est.L);
    case StepsizeSchedule::Kind::inv_sqrt: {
      if (s.gamma0) return StepsizeSchedule::inv_sqrt(*s.gamma0);
      require(L.has_value(), ErrorKind::config, "gamma0 = auto needs L > 0");
      return StepsizeSchedule::inv_sqrt_for(*L);
    }
    case StepsizeSchedule::Kind::hybrid: {
      require(L.has_value(), ErrorKind::config, "hybrid schedule needs L > 0");
      if (s.c) return StepsizeSchedule::hybrid(*L, *s.c, s.alpha);
      require(est.mu > 0.0, ErrorKind::config, "c = auto needs mu > 0");
      return StepsizeSchedule::hybrid(*L, 2.0 / est.mu, s.alpha);
    }
  }
  fail(ErrorKind::config, "unknown schedule kind");
}

PreparedExperiment prepare(const ExperimentConfig& cfg) {
  CompositeProblem p = generate_problem(cfg.problem);
  Vector x0 = make_initial_point(cfg.x0, p);
  ConditionEstimates est = resolve_estimates(cfg, p, x0);
  StepsizeSchedule schedule = resolve_schedule(cfg, est);
  return PreparedExperiment{std::move(p), std::move(x0), std::move(est), std::move(schedule)};
}

}  // namespace sfo::harness
