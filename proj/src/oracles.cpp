#include "sfo/oracles.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sfo::oracle {

namespace {

constexpr int kGridPoints = 201;
constexpr int kMaxExpansions = 60;
constexpr int kGoldenIterations = 300;

bool is_line_family(const ComponentFunction& h) {
  switch (h.family()) {
    case Family::quadratic:
    case Family::hinge:
    case Family::absolute:
    case Family::delta_insensitive:
    case Family::logistic:
      return true;
    case Family::scaled_set_distance_sq:
      return h.set_kind() != SetKind::box;
    default:
      return false;
  }
}

Vector hyperplane_projection_kkt(const Vector& a, double b, const Vector& x) {
  const Index n = a.size();
  Matrix K = Matrix::Zero(n + 1, n + 1);
  K.topLeftCorner(n, n) = Matrix::Identity(n, n);
  K.topRightCorner(n, 1) = a;
  K.bottomLeftCorner(1, n) = a.transpose();
  Vector rhs(n + 1);
  rhs.head(n) = x;
  rhs(n) = b;
  const Vector sol = K.fullPivLu().solve(rhs);
  return sol.head(n);
}

}  // namespace

double minimize_1d(const std::function<double(double)>& q, double center, double half_width) {
  double A = half_width > 0.0 ? half_width : 1.0;
  for (int expansion = 0; expansion < kMaxExpansions; ++expansion, A *= 4.0) {
    const double lo = center - A;
    const double step = 2.0 * A / (kGridPoints - 1);
    int best = -1;
    double best_v = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGridPoints; ++k) {
      const double v = q(lo + step * k);
      if (v < best_v) {
        best_v = v;
        best = k;
      }
    }
    if (best <= 0 || best >= kGridPoints - 1) continue;
    double a = lo + step * (best - 1);
    double b = lo + step * (best + 1);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = q(x1);
    double f2 = q(x2);
    for (int it = 0; it < kGoldenIterations; ++it) {
      if (b - a <= 1e-15 * std::max(1.0, std::abs(a) + std::abs(b))) break;
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phi * (b - a);
        f1 = q(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phi * (b - a);
        f2 = q(x2);
      }
    }
    return f1 <= f2 ? x1 : x2;
  }
  fail(ErrorKind::solver_failure, "1-D oracle search did not bracket a minimizer");
}

Vector prox(const ComponentFunction& h, const Vector& x, double gamma) {
  require(gamma > 0.0, ErrorKind::invalid_parameter, "oracle prox needs gamma > 0");
  switch (h.family()) {
    case Family::indicator_hyperplane:
      return hyperplane_projection_kkt(h.direction(), h.offset(), x);
    case Family::indicator_halfspace:
      if (h.direction().dot(x) <= h.offset()) return x;
      return hyperplane_projection_kkt(h.direction(), h.offset(), x);
    default:
      break;
  }
  if (is_line_family(h)) {
    // The objective depends on y only through w'y, so the minimizer lies on
    // the line x + alpha w.
    const Vector& w = h.direction();
    const double wn2 = w.squaredNorm();
    auto q = [&](double alpha) {
      return h.eval(x + alpha * w) + alpha * alpha * wn2 / (2.0 * gamma);
    };
    const double alpha = minimize_1d(q, 0.0, 1.0);
    return x + alpha * w;
  }
  // Separable families: one coordinate at a time with the others held at a
  // point of the domain.
  Vector base = x;
  if (h.family() == Family::indicator_box) base = 0.5 * (h.lower() + h.upper());
  Vector y = x;
  for (Index i = 0; i < x.size(); ++i) {
    Vector probe = base;
    auto q = [&](double v) {
      probe(i) = v;
      const double d = v - x(i);
      return h.eval(probe) + d * d / (2.0 * gamma);
    };
    y(i) = minimize_1d(q, x(i), 1.0);
  }
  return y;
}

std::vector<Vector> kaczmarz(const Matrix& A, const Vector& b, const Vector& x0, std::size_t iters,
                             std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<Vector> out;
  out.reserve(iters + 1);
  Vector x = x0;
  out.push_back(x);
  const auto m = static_cast<std::size_t>(A.rows());
  for (std::size_t t = 0; t < iters; ++t) {
    const auto i = static_cast<Index>(rng.index(m));
    const Vector a = A.row(i).transpose();
    x = x - ((a.dot(x) - b(i)) / a.squaredNorm()) * a;
    out.push_back(x);
  }
  return out;
}

std::vector<double> simulate_lemma11(double c, double d, std::size_t t0, double r_t0, std::size_t T) {
  std::vector<double> r;
  r.reserve(T - t0 + 1);
  double v = r_t0;
  r.push_back(v);
  for (std::size_t t = t0; t < T; ++t) {
    const double s = static_cast<double>(t) + 1.0;
    v = std::max(0.0, (1.0 - c / s) * v + d / (s * s));
    r.push_back(v);
  }
  return r;
}

std::vector<double> simulate_lemma12(double c, double d, double gamma_exp, double zeta,
                                     std::size_t t0, double r_t0, std::size_t T) {
  std::vector<double> r;
  r.reserve(T - t0 + 1);
  double v = r_t0;
  r.push_back(v);
  for (std::size_t t = t0; t < T; ++t) {
    const double s = static_cast<double>(t) + 1.0;
    v = std::max(0.0, (1.0 - c / std::pow(s, gamma_exp)) * v + d / std::pow(s, zeta));
    r.push_back(v);
  }
  return r;
}

ComponentFunction random_component(Family family, Index dim, RandomStream& rng) {
  auto label = [&] { return rng.uniform() < 0.5 ? -1.0 : 1.0; };
  auto box = [&](Vector& lo, Vector& hi) {
    lo.resize(dim);
    hi.resize(dim);
    for (Index i = 0; i < dim; ++i) {
      const double mid = rng.uniform(-1.0, 1.0);
      lo(i) = mid - rng.uniform(0.25, 1.5);
      hi(i) = mid + rng.uniform(0.25, 1.5);
    }
  };
  switch (family) {
    case Family::quadratic: return ComponentFunction::quadratic(rng.normal_vector(dim), rng.normal());
    case Family::hinge: return ComponentFunction::hinge(rng.normal_vector(dim), label());
    case Family::absolute: return ComponentFunction::absolute(rng.normal_vector(dim), rng.normal());
    case Family::delta_insensitive:
      return ComponentFunction::delta_insensitive(rng.normal_vector(dim), rng.normal(),
                                                  rng.uniform(0.1, 1.0));
    case Family::logistic: return ComponentFunction::logistic(rng.normal_vector(dim), label());
    case Family::l1: return ComponentFunction::l1(dim, rng.uniform(0.1, 2.0));
    case Family::elastic_net:
      return ComponentFunction::elastic_net(dim, rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0));
    case Family::indicator_hyperplane:
      return ComponentFunction::indicator_hyperplane(rng.normal_vector(dim), rng.normal());
    case Family::indicator_halfspace:
      return ComponentFunction::indicator_halfspace(rng.normal_vector(dim), rng.normal());
    case Family::indicator_box: {
      Vector lo, hi;
      box(lo, hi);
      return ComponentFunction::indicator_box(lo, hi);
    }
    case Family::zero: return ComponentFunction::zero(dim);
    case Family::scaled_set_distance_sq: {
      const double weight = rng.uniform(0.5, 3.0);
      const std::size_t kind = rng.index(3);
      if (kind == 2) {
        Vector lo, hi;
        box(lo, hi);
        return ComponentFunction::set_distance_sq_box(lo, hi, weight);
      }
      return ComponentFunction::set_distance_sq(rng.normal_vector(dim), rng.normal(),
                                                kind == 0 ? SetKind::hyperplane : SetKind::halfspace,
                                                weight);
    }
  }
  fail(ErrorKind::invalid_parameter, "unknown component family");
}

ProxCheckReport prox_check(const ProxCheckOptions& options) {
  ProxCheckReport report;
  report.pass = true;
  const RandomStream root(options.seed);
  std::uint64_t family_index = 0;
  for (Family family : kAllFamilies) {
    RandomStream rng = root.split(family_index++);
    FamilyCheck fc;
    fc.family = family;
    fc.samples = options.samples;
    for (std::size_t s = 0; s < options.samples; ++s) {
      const Index dim = 2 + static_cast<Index>(rng.index(4));
      const ComponentFunction h = random_component(family, dim, rng);
      const double gamma = std::exp(rng.uniform(std::log(0.05), std::log(5.0)));
      const Vector x = 1.5 * rng.normal_vector(dim);

      const Vector p = h.prox(x, gamma);
      const Vector o = prox(h, x, gamma);
      fc.max_oracle_error =
          std::max(fc.max_oracle_error, (p - o).norm() / std::max(1.0, x.norm()));

      // Three-point inequality against a point of dom h.
      Vector y = 1.5 * rng.normal_vector(dim);
      if (h.is_indicator()) y = h.project(y);
      const double lhs = h.eval(y) + (y - x).squaredNorm() / (2.0 * gamma);
      const double rhs = h.eval(p) + (p - x).squaredNorm() / (2.0 * gamma) +
                         (p - y).squaredNorm() / (2.0 * gamma);
      fc.max_moreau_violation =
          std::max(fc.max_moreau_violation, (rhs - lhs) / std::max(1.0, std::abs(lhs)));

      // Firm nonexpansiveness on a pair sharing (h, gamma).
      const Vector x2 = 1.5 * rng.normal_vector(dim);
      const Vector p2 = h.prox(x2, gamma);
      const Vector dp = p - p2;
      const Vector dx = x - x2;
      fc.max_firm_violation = std::max(
          fc.max_firm_violation, (dp.squaredNorm() - dp.dot(dx)) / std::max(1.0, dx.squaredNorm()));
    }
    fc.pass = fc.max_oracle_error <= options.oracle_tol &&
              fc.max_moreau_violation <= options.moreau_tol &&
              fc.max_firm_violation <= options.firm_tol;
    report.pass = report.pass && fc.pass;
    report.families.push_back(fc);
  }
  return report;
}

}  // namespace sfo::oracle
