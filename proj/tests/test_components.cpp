#include "sfo/components.hpp"
#include "sfo/oracles.hpp"

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

}  // namespace

TEST_CASE("values by direct substitution") {
  CHECK(ComponentFunction::hinge(vec({1}), 1).eval(vec({0})) == doctest::Approx(1.0));
  CHECK(ComponentFunction::l1(2, 1.0).eval(vec({0, 0})) == 0.0);
  CHECK(ComponentFunction::quadratic(vec({1, 1}), 3).eval(vec({1, 1})) == doctest::Approx(1.0));
  CHECK(ComponentFunction::absolute(vec({1, 0}), 1).eval(vec({3, 9})) == doctest::Approx(2.0));
  CHECK(ComponentFunction::delta_insensitive(vec({1}), 0, 0.5).eval(vec({2})) == doctest::Approx(1.5));
  CHECK(ComponentFunction::logistic(vec({1}), 1).eval(vec({0})) == doctest::Approx(std::log(2.0)));
  CHECK(ComponentFunction::elastic_net(2, 1.0, 2.0).eval(vec({1, -1})) == doctest::Approx(2.0 + 4.0));
  const auto box = ComponentFunction::indicator_box(vec({-1, -1}), vec({1, 1}));
  CHECK(box.eval(vec({0.5, 0})) == 0.0);
  CHECK(std::isinf(box.eval(vec({2, 0}))));
  CHECK(ComponentFunction::set_distance_sq(vec({1, 0}), 1.0).eval(vec({3, 5})) == doctest::Approx(2.0));
}

TEST_CASE("subgradient selections") {
  CHECK(ComponentFunction::l1(1, 1.0).subgradient(vec({0}))(0) == 0.0);
  CHECK(ComponentFunction::quadratic(vec({2}), 0).subgradient(vec({1}))(0) == doctest::Approx(8.0));
  CHECK(ComponentFunction::hinge(vec({1}), 1).subgradient(vec({2}))(0) == 0.0);
  CHECK(ComponentFunction::hinge(vec({1}), 1).subgradient(vec({0}))(0) == doctest::Approx(-1.0));
}

TEST_CASE("closed-form proximal maps") {
  const Vector p = ComponentFunction::l1(3, 1.0).prox(vec({3, -0.5, 0}), 1.0);
  CHECK((p - vec({2, 0, 0})).norm() < 1e-15);
  CHECK((ComponentFunction::zero(2).prox(vec({1.5, -2}), 3.0) - vec({1.5, -2})).norm() == 0.0);
  CHECK(ComponentFunction::hinge(vec({1}), 1).prox(vec({0}), 1.0)(0) == doctest::Approx(1.0));
  const Vector h = ComponentFunction::indicator_hyperplane(vec({1, 0}), 2).prox(vec({0, 5}), 1.0);
  CHECK((h - vec({2, 5})).norm() < 1e-15);
  const double s = ComponentFunction::logistic(vec({1}), 1).prox(vec({0}), 1.0)(0);
  CHECK(std::abs(s - 1.0 / (1.0 + std::exp(s))) < 1e-12);
}

TEST_CASE("closed forms agree with the numerical oracle") {
  const Vector x = vec({3, -0.5, 0});
  const auto l1 = ComponentFunction::l1(3, 1.0);
  CHECK((l1.prox(x, 1.0) - oracle::prox(l1, x, 1.0)).norm() < 1e-6);
  const auto hinge = ComponentFunction::hinge(vec({1}), 1);
  CHECK(std::abs(hinge.prox(vec({0}), 1.0)(0) - oracle::prox(hinge, vec({0}), 1.0)(0)) < 1e-6);
  const auto hp = ComponentFunction::indicator_hyperplane(vec({1, 0}), 2);
  CHECK((hp.prox(vec({0, 5}), 1.0) - oracle::prox(hp, vec({0, 5}), 1.0)).norm() < 1e-9);
}

TEST_CASE("logistic scalar prox converges on hard inputs") {
  for (double r : {-50.0, -4.127635354568978, 0.0, 3.0, 40.0})
    for (double tau : {1e-3, 1.0, 13.31737001842325, 1e3}) {
      const double s = logistic_scalar_prox(r, tau);
      CHECK(std::abs(s - r - tau / (1.0 + std::exp(s))) <= 1e-9 * (1.0 + tau));
    }
}

TEST_CASE("prox optimality: (x - p)/gamma is a subgradient at p") {
  RandomStream rng(77);
  for (Family fam : kAllFamilies) {
    CAPTURE(to_string(fam));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const Index dim = 2 + static_cast<Index>(rng.index(4));
      const auto h = oracle::random_component(fam, dim, rng);
      const Vector x = 3.0 * rng.normal_vector(dim);
      const double gamma = std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
      const Vector p = h.prox(x, gamma);
      const Vector v = (x - p) / gamma;
      const double hp = h.eval(p);
      REQUIRE(std::isfinite(hp));
      for (int j = 0; j < 100; ++j) {
        Vector y = p + std::exp(rng.uniform(std::log(1e-3), std::log(3.0))) * rng.normal_vector(dim);
        if (h.is_indicator()) y = h.project(y);
        const double lhs = h.eval(y);
        const double rhs = hp + v.dot(y - p);
        worst = std::max(worst, (rhs - lhs) / std::max(1.0, std::abs(lhs)));
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("prox check over all families") {
  oracle::ProxCheckOptions opt;
  opt.samples = 200;
  const auto rep = oracle::prox_check(opt);
  CHECK(rep.families.size() == std::size(kAllFamilies));
  for (const auto& f : rep.families) {
    CAPTURE(to_string(f.family));
    CHECK(f.pass);
    CHECK(f.max_moreau_violation <= 1e-10);
    CHECK(f.max_firm_violation <= 1e-10);
  }
}

TEST_CASE("sampled subgradients respect declared bounds") {
  RandomStream rng(11);
  for (Family fam : kAllFamilies) {
    const auto h = oracle::random_component(fam, 4, rng);
    const auto bound = h.subgradient_bound();
    if (!bound) continue;
    CAPTURE(to_string(fam));
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      Vector x = 5.0 * rng.normal_vector(4);
      if (h.is_indicator()) x = h.project(x);
      worst = std::max(worst, h.subgradient(x).norm());
    }
    CHECK(worst <= *bound * (1.0 + 1e-12));
  }
}

TEST_CASE("invalid parameters and dimensions raise structured errors") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;
  };
  CHECK(kind_of([] { ComponentFunction::l1(2, -1.0); }) == ErrorKind::invalid_parameter);
  CHECK(kind_of([] { ComponentFunction::l1(2, 1.0).eval(vec({1, 2, 3})); }) == ErrorKind::dimension_mismatch);
  CHECK(kind_of([] { ComponentFunction::l1(2, 1.0).prox(vec({1, 2}), 0.0); }) == ErrorKind::invalid_parameter);
  CHECK(family_from_string("logistic") == Family::logistic);
  CHECK(!family_from_string("nope"));
}
