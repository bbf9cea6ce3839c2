#include "sfo/analysis.hpp"
#include "sfo/harness/generators.hpp"
#include "sfo/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

using namespace sfo;

namespace {

ConditionEstimates make_est(double L, double B_sq, double mu, double R0_sq) {
  ConditionEstimates e;
  e.L = L;
  e.B_sq = e.B_eff_sq = B_sq;
  e.mu = mu;
  e.R0_sq = R0_sq;
  return e;
}

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

}  // namespace

TEST_CASE("constant-stepsize gap bound") {
  CHECK(bound_thm23(make_est(2, 1, 0, 4), 0.5, 8) == doctest::Approx(1.5));
  const auto noiseless = make_est(3, 0, 0, 2);
  for (std::size_t t : {1u, 5u, 100u}) CHECK(bound_thm23(noiseless, 1.0 / 3.0, t) == doctest::Approx(2.0 * 3.0 / t));
  CHECK(bound_thm23_optimal(make_est(0, 1, 0, 1), 100) == doctest::Approx(0.2));
  const auto e = make_est(0, 1, 0, 1);
  CHECK(bound_thm23(e, 0.1, 100) <= bound_thm23_optimal(e, 100));
  CHECK_THROWS_AS(bound_thm23_optimal(make_est(20, 1, 0, 1), 100), Error);
  CHECK_THROWS_AS(bound_thm23(make_est(2, 1, 0, 1), 0.5, 0), Error);
}

TEST_CASE("decreasing-stepsize gap bound") {
  CHECK(bound_thm24(make_est(1, 0, 0, 0), 1.0, 4) == doctest::Approx(0.5));
  CHECK(bound_thm24(make_est(2, 2, 0, 0), 2.0, 1) == doctest::Approx(6.0));
  const auto e = make_est(1.5, 0.7, 0, 0);
  CHECK(bound_thm24(e, 3.0, 40) == doctest::Approx(0.5 * bound_thm24(e, 3.0, 10)));
}

TEST_CASE("linear rate to the noise region") {
  const auto e = make_est(2, 0, 1, 1);
  CHECK(contraction_factor(e, 0.5) == doctest::Approx(0.75));
  CHECK(bound_thm25(e, 0.5, 2) == doctest::Approx(0.5625));
  for (std::size_t t = 0; t < 50; ++t)
    CHECK(bound_thm25(e, 0.5, t + 1) / bound_thm25(e, 0.5, t) == doctest::Approx(0.75).epsilon(1e-13));
  const auto noisy = make_est(2, 0.3, 1, 1);
  const double floor = 0.3 * 0.25 / (1 - 0.75);
  CHECK(bound_thm25(noisy, 0.5, 10000) == doctest::Approx(floor));
  // rho = 1 at gamma = 2/L, mu = L: vacuous with noise, constant without.
  CHECK_THROWS_AS(bound_thm25(make_est(2, 0.3, 1, 1), 1.0, 3), Error);
  CHECK(bound_thm25(make_est(2, 0, 1, 4), 1.0, 3) == doctest::Approx(4.0));
}

TEST_CASE("mu < 4L keeps the best contraction factor above -1") {
  RandomStream rng(12);
  for (int k = 0; k < 200; ++k) {
    const double L = std::exp(rng.uniform(-3, 3));
    const double mu = 4.0 * L * rng.uniform(1e-6, 0.999);
    const auto e = make_est(L, 0, mu, 1);
    double best = 1.0;
    for (int j = 1; j <= 4000; ++j) best = std::min(best, contraction_factor(e, 2.0 / L * j / 4000.0));
    const double g = oracle::minimize_1d([&](double x) { return contraction_factor(e, x); }, 1.0 / L, 1.0 / L);
    CHECK(best > -1.0);
    CHECK(contraction_factor(e, g) > -1.0);
    CHECK(contraction_factor(e, g) == doctest::Approx(1.0 - mu / (2.0 * L)).epsilon(1e-9));
  }
}

TEST_CASE("hybrid-stepsize distance bound") {
  // c mu / 2 = 2, t0 = floor(c L) = 0, d = c^2 B^2 = 1, R0^2 = 1.
  const auto e = make_est(0.5, 1, 4, 1);
  CHECK(thm27_switch_index(e, 1.0) == 0);
  for (std::size_t t : {0u, 1u, 7u, 1000u}) CHECK(bound_thm27(e, 1.0, t) == doctest::Approx(2.0 / (t + 1.0)));
  // c mu / 2 = 1 and t0 = 0: the logarithmic row with log term zero at t0.
  const auto f = make_est(0.5, 1, 2, 1);
  CHECK(bound_thm27(f, 1.0, 1) == doctest::Approx((2.0 * (1.0 + std::log(2.0))) / 2.0));
  const auto g = make_est(1.0, 0.1, 0.5, 3.0);
  CHECK(thm27_switch_index(g, 4.0) == 4);
  for (std::size_t t = 0; t < 2000; ++t)
    if (t + 1 != 4) CHECK(bound_thm27(g, 4.0, t + 1) <= bound_thm27(g, 4.0, t) * (1 + 1e-12));
  CHECK(bound_thm27(g, 4.0, 4) >= bound_thm27(g, 4.0, 3));
}

TEST_CASE("recurrence lemmas") {
  for (std::size_t t : {0u, 3u, 99u}) CHECK(bound_lemma11(2, 1, 0, 1, t) == doctest::Approx(2.0 / (t + 1.0)));
  CHECK(bound_lemma11(1, 0.5, 6, 2.0, 6) == doctest::Approx((2.0 * 6 * 2.0 + 2.0 * 0.5) / 7.0));
  const auto sim = oracle::simulate_lemma11(2, 1, 0, 1, 100000);
  for (std::size_t t = 0; t < sim.size(); t += 997) CHECK(sim[t] <= bound_lemma11(2, 1, 0, 1, t));
  for (auto [gm, zt] : {std::pair{0.5, 1.0}, std::pair{0.5, 1.5}}) {
    const auto s = oracle::simulate_lemma12(2, 1, gm, zt, 3, 1.0, 20000);
    for (std::size_t k = 0; k < s.size(); ++k) REQUIRE(s[k] <= bound_lemma12(2, 1, gm, zt, 3, 1.0, 3 + k) * (1 + 1e-12));
    CHECK(lemma12_constant(2, 1, gm, zt, 3, 1.0) > 0.0);
  }
}

TEST_CASE("restart budget") {
  ConditionEstimates e;
  e.nu = 1;
  e.mu_growth = 0.5;
  e.B_sq = e.B_eff_sq = 1;
  CHECK(rsfo_budget(e, 1.0, 1.0 / 16) == 64);
  CHECK(rsfo_budget(e, 1.0, 1.0) == 0);
  e.nu = 2;
  e.mu_growth = 1;
  const auto a = rsfo_budget(e, 1.0, 1.0 / 64), b = rsfo_budget(e, 1.0, 1.0 / 128);
  CHECK(a == 256 * 6);
  CHECK(b == 512 * 7);
  e.mu_growth = 0;
  CHECK_THROWS_AS(rsfo_budget(e, 1.0, 0.1), Error);
}

TEST_CASE("bounds are nonincreasing in t") {
  const auto e = make_est(2, 0.4, 0.6, 5);
  double p23 = 1e300, p24 = 1e300, p25 = 1e300, p27 = 1e300;
  for (std::size_t t = 1; t < 3000; ++t) {
    const double a = bound_thm23(e, 0.3, t), b = bound_thm24(e, 5, t), c = bound_thm25(e, 0.3, t),
                 d = bound_thm27(e, 2.0 / 0.6, t);
    CHECK(a <= p23);
    CHECK(b <= p24);
    CHECK(c <= p25);
    if (t != thm27_switch_index(e, 2.0 / 0.6)) CHECK(d <= p27 * (1 + 1e-12));
    CHECK(std::isfinite(a + b + c + d));
    p23 = a, p24 = b, p25 = c, p27 = d;
  }
}

TEST_CASE("Lipschitz components give L = 0 and B^2 = 2 Bf^2 + 2 Bg^2") {
  RandomStream rng(5);
  std::vector<ComponentFunction> f, g;
  double bf = 0.0;
  for (int i = 0; i < 6; ++i) {
    const Vector z = rng.normal_vector(3);
    f.push_back(i % 2 ? ComponentFunction::hinge(z, 1.0) : ComponentFunction::absolute(z, 0.5));
    bf = std::max(bf, z.norm());
    g.push_back(ComponentFunction::l1(3, 0.2));
  }
  const CompositeProblem p(f, g, SampleSpace::uniform(6), OptimalSet::reference_point(Vector::Zero(3)));
  ProbeConfig cfg;
  cfg.count = 50;
  const auto est = estimate_constants(p, cfg);
  CHECK(est.L == 0.0);
  const double bg = 0.2 * std::sqrt(3.0);
  CHECK(est.B_sq == doctest::Approx(2 * bf * bf + 2 * bg * bg));
  CHECK(est.Bg_sq == doctest::Approx(bg * bg));
  CHECK(est.source == "subgradient-bounds");
}

TEST_CASE("fitted envelope has no violations and quadratic growth is recovered") {
  const auto p = harness::least_squares(30, 3, 0.5, 2);
  ProbeConfig cfg;
  cfg.x0 = Vector::Constant(3, 2.0);
  const auto probes = collect_probes(p, cfg);
  const auto env = fit_gradient_envelope(probes);
  CHECK(envelope_violations(probes, env.L, env.B_sq) == 0);
  CHECK(env.B_sq > 0.0);

  Matrix Z(30, 3);
  for (Index i = 0; i < 30; ++i) Z.row(i) = p.f(static_cast<std::size_t>(i)).direction().transpose();
  const double lam_min = Eigen::SelfAdjointEigenSolver<Matrix>(2.0 * Z.transpose() * Z / 30.0).eigenvalues()(0);
  const auto est = estimate_constants(p, cfg);
  CHECK(est.mu == doctest::Approx(lam_min).epsilon(0.05));
  CHECK(est.mu >= lam_min * (1 - 1e-9));
  CHECK(est.B_eff_sq >= est.B_sq);

  const auto lasso = harness::lasso(30, 6, 0.1, 3);
  ProbeConfig lc;
  lc.count = 300;
  const auto lp = collect_probes(lasso, lc);
  const auto lenv = fit_gradient_envelope(lp);
  CHECK(envelope_violations(lp, lenv.L, lenv.B_sq) == 0);
}

TEST_CASE("sharp problems fit a growth exponent near one") {
  const auto p = harness::sharp_polyhedral(30, 5, 4);
  ProbeConfig cfg;
  cfg.count = 400;
  cfg.max_radius = 0.5;
  const auto est = estimate_constants(p, cfg);
  CHECK(est.extras.at("nu_fitted") >= 0.9);
  CHECK(est.extras.at("nu_fitted") <= 1.1);
  CHECK(est.nu == 1.0);
  CHECK(est.mu_growth > 0.0);
}

TEST_CASE("shared minimizer diagnostic") {
  const auto k = shared_minimizer_diagnostic(harness::consistent_linear_system(5, 3, 1));
  CHECK(k.value < 1e-20);
  CHECK(k.strong_condition_plausible);
  const auto ls = shared_minimizer_diagnostic(harness::least_squares(20, 3, 0.5, 1));
  CHECK(ls.value > 1e-3);
  CHECK(!ls.strong_condition_plausible);
  const CompositeProblem one({ComponentFunction::quadratic(vec({1, 2}), 3.0)}, {ComponentFunction::zero(2)},
                             SampleSpace::uniform(1), OptimalSet::affine((Matrix(1, 2) << 1, 2).finished(), vec({3})));
  CHECK(shared_minimizer_diagnostic(one).value < 1e-20);
}

TEST_CASE("estimates document round trip") {
  auto e = make_est(1.25, 0.5, 0.1, 3.0);
  e.Bg_sq = 0.2;
  e.B_eff_sq = 0.7;
  e.nu = 1.5;
  e.mu_growth = 0.3;
  e.extras["kappa"] = 1.0 / 3.0;
  e.source = "fit";
  const auto back = parse_estimates(format_estimates(e));
  CHECK(back.L == e.L);
  CHECK(back.B_eff_sq == e.B_eff_sq);
  CHECK(back.nu == e.nu);
  CHECK(back.mu_growth == e.mu_growth);
  CHECK(back.extras.at("kappa") == e.extras.at("kappa"));
  CHECK(back.source == "fit");
  CHECK_THROWS_AS(parse_estimates("bogus=1\n"), Error);
}

TEST_CASE("rate bound objects") {
  const auto e = make_est(2, 0, 1, 1);
  const auto b = RateBound::thm25(e, 0.5);
  CHECK(b.quantity() == RateBound::Quantity::dist_sq);
  CHECK(b(2) == doctest::Approx(0.5625));
  CHECK(b.scaled(0.5)(2) == doctest::Approx(0.28125));
  const auto r = RateBound::thm31(0.8);
  CHECK(r(3) == doctest::Approx(0.1));
  const auto g = RateBound::thm23(make_est(2, 1, 0, 4), 0.5);
  CHECK(g.first_t() == 1);
  CHECK(g(8) == doctest::Approx(1.5));
  CHECK_THROWS_AS(g(0), Error);
  CHECK(bound_kind_from_string("thm27") == RateBound::Kind::thm27_dist);
  CHECK(to_string(RateBound::Kind::lemma12) == "lemma12");
  CHECK(!bound_kind_from_string("thm99"));
}
