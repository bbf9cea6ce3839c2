#include "sfo/harness/config.hpp"
#include "sfo/harness/experiment.hpp"
#include "sfo/harness/generators.hpp"
#include "sfo/harness/report.hpp"
#include "sfo/harness/verify.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

using namespace sfo;
using namespace sfo::harness;

namespace {

const char* kKaczmarzConfig = R"(
[problem]
generator = consistent_linear_system
m = 20
n = 5
seed = 3

[solver]
method = spg
iterations = 200

[schedule]
kind = constant
gamma = 1

[experiment]
replications = 4
base_seed = 9
x0 = zeros

[verify]
bound = thm25
)";

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("consistent linear system") {
  const auto p = consistent_linear_system(5, 3, 1);
  const Vector xs = p.optimal_set().anchor();
  double worst = 0.0;
  for (std::size_t i = 0; i < p.num_samples(); ++i) {
    CHECK(p.f(i).direction().norm() == doctest::Approx(1.0));
    worst = std::max(worst, std::abs(p.f(i).direction().dot(xs) - p.f(i).offset()));
  }
  CHECK(worst < 1e-12);
  CHECK(p.full_objective(xs) < 1e-24);
  CHECK(p.optimal_value() == 0.0);
  const auto& ac = p.analytic_constants();
  REQUIRE(ac.has_value());
  CHECK(*ac->L == 2.0);
  CHECK(*ac->B_sq == 0.0);
  CHECK(ac->extras.at("lambda_min_nz") > 0.0);
}

TEST_CASE("sharp polyhedral instance") {
  const auto p = sharp_polyhedral(30, 10, 21);
  const Vector xs = p.optimal_set().anchor();
  CHECK(xs.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(p.full_objective(xs) < 1e-12);
  CHECK(*p.analytic_constants()->nu == 1.0);
  CHECK_THROWS_AS(sharp_polyhedral(3, 10, 1), Error);
}

TEST_CASE("lasso reference point is stalled") {
  const auto p = lasso(40, 10, 0.1, 81);
  const Vector xr = p.optimal_set().anchor();
  const double Lf = quadratic_smoothness(p);
  const auto more = full_proximal_gradient(p, xr, 1.0 / Lf, 1000, 0.0);
  CHECK(p.full_objective(xr) - more.value < 1e-12);
  CHECK(more.iterations == 1000);
  const auto ls = least_squares(30, 3, 0.5, 1);
  CHECK(ls.expected_subgradient(ls.optimal_set().anchor()).norm() < 1e-10);
}

TEST_CASE("problems from matrix files") {
  const auto dir = std::filesystem::temp_directory_path() / "sfo_from_file";
  std::filesystem::create_directories(dir);
  Matrix A(3, 2);
  A << 1, 0, 0, 1, 1, 1;
  Matrix b(3, 1);
  b << 1, 2, 3;
  save_matrix(dir / "A.txt", A);
  save_matrix(dir / "b.txt", b);
  ProblemSpec spec;
  spec.generator = "from_file";
  spec.matrix = dir / "A.txt";
  spec.rhs = dir / "b.txt";
  const auto p = generate_problem(spec);
  CHECK(p.num_samples() == 3);
  CHECK(p.distance_to_optimum_sq(Vector::Zero(2)) == doctest::Approx(5.0));
  spec.generator = "unknown";
  CHECK_THROWS_AS(generate_problem(spec), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("mean and standard error") {
  CHECK(mean_stderr({2.0}).se == 0.0);
  const auto same = mean_stderr(std::vector<double>(7, 0.1));
  CHECK(same.mean == 0.1);
  CHECK(same.se == 0.0);
  const auto ms = mean_stderr({1.0, 2.0, 3.0, 4.0});
  CHECK(ms.mean == doctest::Approx(2.5));
  CHECK(ms.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  const auto a = mean_stderr({0.1, 1e8, 0.3, -7.0, 1e-9});
  const auto b = mean_stderr({1e-9, -7.0, 1e8, 0.3, 0.1});
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
}

TEST_CASE("single replication equals the single trajectory") {
  const auto p = least_squares(20, 3, 0.4, 2);
  const auto sched = StepsizeSchedule::constant(0.1);
  ReplicationSetup s{&p, Method::spg, &sched, Vector::Zero(3), 300, 1, 5, {}, 1};
  const auto agg = run_replications(s);
  const auto single = run(p, Method::spg, sched, Vector::Zero(3), 300, replication_stream(5, 0));
  REQUIRE(agg.rows.size() == single.record.rows.size());
  for (std::size_t k = 0; k < agg.rows.size(); ++k) {
    CHECK(agg.rows[k].mean_dist_sq == single.record.rows[k].dist_sq);
    CHECK(agg.rows[k].stderr_dist_sq == 0.0);
    CHECK(agg.rows[k].stderr_f_gap == 0.0);
  }
}

TEST_CASE("Monte-Carlo self-consistency, determinism and thread independence") {
  const auto p = least_squares(20, 3, 0.4, 2);
  const auto sched = StepsizeSchedule::constant(0.1);
  ReplicationSetup s{&p, Method::spg, &sched, Vector::Constant(3, 1.0), 400, 20, 5, {}, 1};
  const auto a = run_replications(s);
  s.threads = 3;
  const auto a3 = run_replications(s);
  CHECK(format_csv(a) == format_csv(a3));
  s.replications = 40;
  s.base_seed = 1000;
  const auto b = run_replications(s);
  std::size_t outside = 0;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const auto& x = a.rows[k];
    const auto& y = b.rows[k];
    const double se = std::hypot(x.stderr_dist_sq, y.stderr_dist_sq);
    if (std::abs(x.mean_dist_sq - y.mean_dist_sq) > 3.0 * se) ++outside;
  }
  CHECK(outside <= a.rows.size() / 50 + 1);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS(parallel_for(10, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }, 2));
}

TEST_CASE("aggregation rejects misaligned grids") {
  TrajectoryRecord r1, r2;
  r1.rows = {{0, 1, 1, 1}, {1, 1, 1, 1}};
  r2.rows = {{0, 1, 1, 1}, {2, 1, 1, 1}};
  CHECK_THROWS_AS(aggregate({r1, r2}), Error);
}

TEST_CASE("CSV format and round trip") {
  AggregateTrajectory empty;
  CHECK(format_csv(empty) == std::string(kCsvHeader) + "\n");
  AggregateTrajectory t;
  t.replications = 3;
  t.rows = {{0, 0.5, 1.0 / 3.0, 1e-17, 2.0, 0.0}, {10, 0.25, 1e-300, 0.1, 1.0 / 7.0, 3.5}};
  const auto text = format_csv(t);
  const auto back = parse_csv(text);
  REQUIRE(back.rows.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(back.rows[k].t == t.rows[k].t);
    CHECK(back.rows[k].mean_dist_sq == t.rows[k].mean_dist_sq);
    CHECK(back.rows[k].stderr_dist_sq == t.rows[k].stderr_dist_sq);
    CHECK(back.rows[k].mean_f_gap == t.rows[k].mean_f_gap);
  }
  CHECK(format_csv(back) == text);
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("SVG has one polyline per series") {
  std::vector<Series> s{{"a", {{1, 1}, {10, 0.1}, {100, 0.01}}}, {"b", {{1, 2}, {100, 0.5}}}, {"c", {{1, 0}, {2, 1}, {3, 2}}}};
  const auto svg = format_svg(s, "demo");
  CHECK(count_of(svg, "<polyline") == 3);
  CHECK(svg.find("<svg") != std::string::npos);
}

TEST_CASE("verification of a Kaczmarz experiment and the halved-bound negative control") {
  const auto cfg = parse_config(kKaczmarzConfig);
  const auto prep = prepare(cfg);
  CHECK(prep.estimates.L == 2.0);
  CHECK(prep.schedule.gamma() == 1.0);
  const auto traj = run_experiment(cfg, prep);
  CHECK(traj.rows.size() == 201);
  const auto bound = RateBound::thm25(prep.estimates, 1.0);
  const auto rep = verify_bound(traj, bound);
  CHECK(rep.pass);
  // Halving a bound that is tight at t = 0 must fail there.
  const auto neg = verify_bound(traj, bound.scaled(0.5));
  CHECK(!neg.pass);
  REQUIRE(neg.first_violation.has_value());
  CHECK(*neg.first_violation == 0);
  CHECK(format_report(neg).find("# FAIL") != std::string::npos);
  CHECK(format_csv(run_experiment(cfg, prep)) == format_csv(traj));
}

TEST_CASE("vacuous bounds are rejected with a structured error") {
  AggregateTrajectory t;
  t.rows = {{1, 1, 0.1, 0, 1, 0}};
  ConditionEstimates e;
  e.L = 2;
  e.mu = 1;
  e.B_sq = e.B_eff_sq = 1;
  e.R0_sq = 1;
  CHECK(verify_bound(t, RateBound::thm25(e, 0.5)).pass);
  ConditionEstimates v = e;
  v.mu = 0;
  try {
    (void)RateBound::thm25(v, 0.5);
    FAIL("expected a vacuous bound error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::vacuous_bound);
  }
}

TEST_CASE("slope and contraction fits") {
  AggregateTrajectory t;
  for (std::size_t k = 1; k <= 1000; ++k) t.rows.push_back({k, 0, 3.0 / double(k), 0, 0, 0});
  const auto fit = final_decade_fit(t);
  CHECK(fit.slope == doctest::Approx(-1.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
  AggregateTrajectory g;
  for (std::size_t k = 0; k < 100; ++k) g.rows.push_back({k, 0, 2.0 * std::pow(0.9, double(k)), 0, 0, 0});
  CHECK(fitted_contraction(g) == doctest::Approx(0.9));
  CHECK(plateau_level(t, 999) == doctest::Approx((3.0 / 999 + 3.0 / 1000) / 2));
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(kKaczmarzConfig);
  CHECK(cfg.problem.generator == "consistent_linear_system");
  CHECK(cfg.problem.m == 20);
  CHECK(cfg.iterations == 200);
  CHECK(cfg.replications == 4);
  CHECK(cfg.schedule.gamma == 1.0);
  CHECK(cfg.bound == "thm25");
  const auto h = parse_config("[problem]\ngenerator=least_squares\nm=10\nn=2\n[schedule]\nkind=hybrid\nc=auto\n"
                              "[constants]\nL=3.5\n[output]\ncsv=out/x.csv\n",
                              "/tmp/base");
  CHECK(h.schedule.kind == StepsizeSchedule::Kind::hybrid);
  CHECK(!h.schedule.c.has_value());
  CHECK(h.constant_overrides.at("L") == 3.5);
  CHECK(*h.csv == std::filesystem::path("/tmp/base/out/x.csv"));
  CHECK_THROWS_AS(parse_config("[problem]\nbogus=1\n"), Error);
  CHECK_THROWS_AS(parse_config("[nowhere]\nx=1\n"), Error);
  CHECK_THROWS_AS(parse_config("[solver]\nmethod=adam\n"), Error);
  CHECK_THROWS_AS(load_config("/nonexistent.ini"), Error);
}

TEST_CASE("initial point specifications") {
  const auto p = least_squares(10, 3, 0.5, 1);
  CHECK(make_initial_point("zeros", p) == Vector::Zero(3));
  CHECK(make_initial_point("1,2,3", p) == (Vector(3) << 1, 2, 3).finished());
  const Vector off = make_initial_point("offset:2.5:4", p);
  CHECK(std::sqrt(p.distance_to_optimum_sq(off)) == doctest::Approx(2.5));
  CHECK(make_initial_point("random:1:4", p) == make_initial_point("random:1:4", p));
  CHECK_THROWS_AS(make_initial_point("1,2", p), Error);
}
