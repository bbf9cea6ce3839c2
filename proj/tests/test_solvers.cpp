#include "sfo/harness/generators.hpp"
#include "sfo/oracles.hpp"
#include "sfo/solvers.hpp"

#include <doctest.h>

#include <cmath>

using namespace sfo;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

// f = x^2 / 2 written as (z x)^2 with z = 1/sqrt(2); g = |x|.
CompositeProblem half_square_plus_abs() {
  return CompositeProblem({ComponentFunction::quadratic(vec({1.0 / std::sqrt(2.0)}), 0.0)},
                          {ComponentFunction::l1(1, 1.0)}, SampleSpace::uniform(1),
                          OptimalSet::single_point(vec({0})), 0.0);
}

}  // namespace

TEST_CASE("single steps on the one-dimensional example") {
  const auto p = half_square_plus_abs();
  CHECK(spg_step(p, vec({2}), 1.0, 0)(0) == doctest::Approx(0.0));
  CHECK(spp_step(p, vec({2}), 1.0, 0)(0) == doctest::Approx(0.0));
  CHECK(p.f(0).prox(vec({2}), 1.0)(0) == doctest::Approx(1.0));
  CHECK(gradient_mapping(p, vec({2}), 1.0, 0)(0) == doctest::Approx(2.0));
  // SPP half step then the soft threshold at 1: 3 -> 1.5 -> 0.5.
  CHECK(spp_step(p, vec({3}), 1.0, 0)(0) == doctest::Approx(0.5));
}

TEST_CASE("zero regularizer reduces SPG to SGD and zero components to the identity") {
  RandomStream rng(3);
  const Vector z = rng.normal_vector(3);
  const CompositeProblem p({ComponentFunction::quadratic(z, 0.7)}, {ComponentFunction::zero(3)},
                           SampleSpace::uniform(1), OptimalSet::reference_point(Vector::Zero(3)));
  const Vector x = rng.normal_vector(3);
  const Vector sgd = x - 0.1 * p.f(0).subgradient(x);
  CHECK((spg_step(p, x, 0.1, 0) - sgd).norm() < 1e-15);
  const CompositeProblem id({ComponentFunction::zero(3)}, {ComponentFunction::zero(3)}, SampleSpace::uniform(1),
                            OptimalSet::single_point(Vector::Zero(3)));
  CHECK(spp_step(id, x, 0.5, 0) == x);
  CHECK(spg_step(id, x, 0.5, 0) == x);
}

TEST_CASE("projected subgradient step with an indicator regularizer") {
  const CompositeProblem p({ComponentFunction::absolute(vec({1, 1}), 0.0)},
                           {ComponentFunction::indicator_box(vec({-1, -1}), vec({1, 1}))}, SampleSpace::uniform(1),
                           OptimalSet::single_point(vec({0, 0})));
  const Vector x = vec({0.9, 0.8});
  const Vector expected = (x - 0.5 * vec({1, 1})).cwiseMax(-1.0).cwiseMin(1.0);
  CHECK((spg_step(p, x, 0.5, 0) - expected).norm() < 1e-15);
}

TEST_CASE("SPG on the consistent system with unit stepsize is randomized Kaczmarz") {
  const auto p = harness::consistent_linear_system(5, 3, 17);
  const Index m = 5, n = 3;
  Matrix A(m, n);
  Vector b(m);
  for (Index i = 0; i < m; ++i) {
    A.row(i) = p.f(static_cast<std::size_t>(i)).direction().transpose();
    b(i) = p.f(static_cast<std::size_t>(i)).offset();
  }
  const Vector x0 = vec({1, -2, 3});
  const auto ref = oracle::kaczmarz(A, b, x0, 200, 99);
  SolverRun run(p, Method::spg, x0, RandomStream(99));
  double worst = 0.0;
  for (std::size_t t = 1; t <= 200; ++t) {
    run.step(1.0);
    worst = std::max(worst, (run.x() - ref[t]).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 1e-12);
  // SPP moves the fraction gamma / (1 + gamma) of the way to the hyperplane.
  const Vector a = A.row(2).transpose();
  const Vector half = x0 - 0.5 * (a.dot(x0) - b(2)) * a;
  CHECK((spp_step(p, x0, 1.0, 2) - half).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("run records, averages and determinism") {
  const auto p = harness::least_squares(20, 3, 0.3, 5);
  const auto sched = StepsizeSchedule::constant(0.2);
  const Vector x0 = Vector::Zero(3);
  const auto empty = run(p, Method::spg, sched, x0, 0, 1);
  CHECK(empty.final_iterate == x0);
  CHECK(empty.average_iterate == x0);
  CHECK(empty.record.rows.empty());

  const auto a = run(p, Method::spg, sched, x0, 250, 1234);
  const auto b = run(p, Method::spg, sched, x0, 250, 1234);
  CHECK(a.final_iterate == b.final_iterate);
  REQUIRE(a.record.rows.size() == b.record.rows.size());
  for (std::size_t k = 0; k < a.record.rows.size(); ++k) {
    CHECK(a.record.rows[k].dist_sq == b.record.rows[k].dist_sq);
    CHECK(a.record.rows[k].f_gap == b.record.rows[k].f_gap);
  }
  CHECK(a.record.rows.front().t == 0);
  CHECK(a.record.rows.back().t == 250);
  for (std::size_t k = 1; k < a.record.rows.size(); ++k) CHECK(a.record.rows[k].t > a.record.rows[k - 1].t);
  for (const auto& r : a.record.rows) {
    CHECK(r.dist_sq >= -1e-12);
    CHECK(r.f_gap >= -1e-12);
  }

  RunOptions opt;
  opt.stride = 7;
  const auto c = run(p, Method::spp, sched, x0, 50, 1, opt);
  CHECK(c.record.rows.size() == 9);  // 0, 7, ..., 49, 50
  CHECK(c.record.rows.back().t == 50);
  CHECK(default_stride(10000) == 1);
  CHECK(default_stride(100000) == 10);
  CHECK(default_stride(100001) == 11);
}

TEST_CASE("running average matches the arithmetic mean of past iterates") {
  const auto p = harness::least_squares(10, 2, 0.5, 8);
  SolverRun run(p, Method::spg, Vector::Ones(2), RandomStream(2));
  Vector sum = Vector::Zero(2);
  for (int t = 0; t < 40; ++t) {
    sum += run.x();
    run.step(0.1);
    CHECK((run.average() - sum / (t + 1.0)).norm() < 1e-14);
    CHECK((run.x_sum() / static_cast<double>(run.t()) - run.average()).norm() < 1e-14);
  }
}

TEST_CASE("restart counts and epoch lengths") {
  CHECK(restart_inner_iterations(1.0, 0.5, 1.0, 0.3) == 16);
  CHECK(restart_inner_iterations(1.0, 0.5, 1.0, 1e-5) == 16);
  CHECK(restart_epoch_count(1.0, 0.125) == 3);
  CHECK(restart_epoch_count(1.0, 0.124) == 4);
  CHECK(restart_epoch_count(1.0, 1.0) == 0);
  CHECK(restart_stepsize(2.0, 0.8) == doctest::Approx(0.1));

  const CompositeProblem p({ComponentFunction::absolute(vec({1}), 0.0)}, {ComponentFunction::zero(1)},
                           SampleSpace::uniform(1), OptimalSet::single_point(vec({0})), 0.0);
  RestartPlan plan{1.0, 1.0, 2.0, 1.0, 0.125};
  const auto res = rsfo_run(p, Method::spg, plan, vec({0.5}), RandomStream(1));
  REQUIRE(res.epochs.size() == 3);
  CHECK(res.epochs[0].iterations == 4);
  CHECK(res.epochs[1].iterations == 8);
  CHECK(res.epochs[2].iterations == 16);
  CHECK(res.epochs[1].epsilon_prev == doctest::Approx(0.5));
  CHECK(res.epochs[2].gamma == doctest::Approx(0.125));
  CHECK(res.total_iterations == 28);

  RestartPlan bad = plan;
  bad.epsilon0 = 0.1;  // below F(x0) - F* = 0.5
  CHECK_THROWS_AS(rsfo_run(p, Method::spg, bad, vec({0.5}), RandomStream(1)), Error);
}

TEST_CASE("method names") {
  CHECK(method_from_string("spg") == Method::spg);
  CHECK(method_from_string("SPP") == Method::spp);
  CHECK(to_string(Method::spp) == "SPP");
  CHECK(!method_from_string("adam"));
}
