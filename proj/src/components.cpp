#include "sfo/components.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

namespace sfo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<std::pair<Family, std::string_view>, 12> kFamilyNames{{
    {Family::quadratic, "quadratic"},
    {Family::hinge, "hinge"},
    {Family::absolute, "absolute"},
    {Family::delta_insensitive, "delta_insensitive"},
    {Family::logistic, "logistic"},
    {Family::l1, "l1"},
    {Family::elastic_net, "elastic_net"},
    {Family::indicator_hyperplane, "indicator_hyperplane"},
    {Family::indicator_halfspace, "indicator_halfspace"},
    {Family::indicator_box, "indicator_box"},
    {Family::zero, "zero"},
    {Family::scaled_set_distance_sq, "scaled_set_distance_sq"},
}};

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double soft_threshold(double v, double tau) {
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

void check_vector(const Vector& v, const char* what) {
  require(v.size() > 0, ErrorKind::invalid_parameter, fmt::format("{}: empty vector", what));
  require(all_finite(v), ErrorKind::invalid_parameter,
          fmt::format("{}: non-finite entries", what));
}

void check_nonnegative(double v, const char* what) {
  require(std::isfinite(v) && v >= 0.0, ErrorKind::invalid_parameter,
          fmt::format("{} must be finite and nonnegative, got {}", what, v));
}

void check_gamma(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0, ErrorKind::invalid_parameter,
          fmt::format("prox stepsize must be positive, got {}", gamma));
}

// phi'(s) for phi(s) = log(1 + e^{-s}).
double logistic_slope(double s) { return -1.0 / (1.0 + std::exp(s)); }

double logistic_curvature(double s) {
  const double p = 1.0 / (1.0 + std::exp(-s));
  return p * (1.0 - p);
}

double logistic_loss(double s) {
  return s > 0.0 ? std::log1p(std::exp(-s)) : -s + std::log1p(std::exp(s));
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  for (const auto& [f, name] : kFamilyNames)
    if (f == family) return name;
  return "unknown";
}

std::optional<Family> family_from_string(std::string_view name) noexcept {
  for (const auto& [f, n] : kFamilyNames)
    if (n == name) return f;
  return std::nullopt;
}

double logistic_scalar_prox(double r, double tau) {
  // The root lies in [r, r + tau] because phi' takes values in (-1, 0).
  double lo = r;
  double hi = r + tau;
  double s = r + tau * (-logistic_slope(r));
  double prev_step = hi - lo;
  for (int it = 0; it < kLogisticMaxIterations; ++it) {
    const double g = s - r + tau * logistic_slope(s);
    if (std::abs(g) <= kLogisticResidualTol) return s;
    if (g < 0.0) lo = s; else hi = s;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s)))
      return s;
    const double newton = s - g / (1.0 + tau * logistic_curvature(s));
    const double step = std::abs(newton - s);
    const bool use_newton = newton > lo && newton < hi && 2.0 * step <= prev_step;
    const double next = use_newton ? newton : 0.5 * (lo + hi);
    prev_step = std::abs(next - s);
    s = next;
  }
  fail(ErrorKind::solver_failure,
       fmt::format("logistic prox did not converge (r={}, tau={})", r, tau));
}

// ---- construction ----------------------------------------------------------

ComponentFunction ComponentFunction::quadratic(Vector z, double y) {
  check_vector(z, "quadratic feature");
  require(std::isfinite(y), ErrorKind::invalid_parameter, "quadratic label must be finite");
  ComponentFunction h(Family::quadratic, z.size());
  h.y_ = y;
  h.c_ = y;
  h.w_ = std::move(z);
  return h;
}

ComponentFunction ComponentFunction::hinge(Vector z, double y) {
  check_vector(z, "hinge feature");
  require(std::isfinite(y), ErrorKind::invalid_parameter, "hinge label must be finite");
  ComponentFunction h(Family::hinge, z.size());
  h.y_ = y;
  h.w_ = y * z;
  return h;
}

ComponentFunction ComponentFunction::absolute(Vector z, double y) {
  check_vector(z, "absolute feature");
  require(std::isfinite(y), ErrorKind::invalid_parameter, "absolute label must be finite");
  ComponentFunction h(Family::absolute, z.size());
  h.y_ = y;
  h.c_ = y;
  h.w_ = std::move(z);
  return h;
}

ComponentFunction ComponentFunction::delta_insensitive(Vector z, double y, double delta) {
  check_vector(z, "delta-insensitive feature");
  require(std::isfinite(y), ErrorKind::invalid_parameter,
          "delta-insensitive label must be finite");
  check_nonnegative(delta, "delta");
  ComponentFunction h(Family::delta_insensitive, z.size());
  h.y_ = y;
  h.c_ = y;
  h.delta_ = delta;
  h.w_ = std::move(z);
  return h;
}

ComponentFunction ComponentFunction::logistic(Vector z, double y) {
  check_vector(z, "logistic feature");
  require(std::isfinite(y), ErrorKind::invalid_parameter, "logistic label must be finite");
  ComponentFunction h(Family::logistic, z.size());
  h.y_ = y;
  h.w_ = y * z;
  return h;
}

ComponentFunction ComponentFunction::l1(Index dim, double lambda) {
  require(dim > 0, ErrorKind::invalid_parameter, "l1 dimension must be positive");
  check_nonnegative(lambda, "lambda");
  ComponentFunction h(Family::l1, dim);
  h.lambda1_ = lambda;
  return h;
}

ComponentFunction ComponentFunction::elastic_net(Index dim, double lambda1, double lambda2) {
  require(dim > 0, ErrorKind::invalid_parameter, "elastic-net dimension must be positive");
  check_nonnegative(lambda1, "lambda1");
  check_nonnegative(lambda2, "lambda2");
  ComponentFunction h(Family::elastic_net, dim);
  h.lambda1_ = lambda1;
  h.lambda2_ = lambda2;
  return h;
}

ComponentFunction ComponentFunction::indicator_hyperplane(Vector a, double b) {
  check_vector(a, "hyperplane normal");
  require(a.squaredNorm() > 0.0, ErrorKind::invalid_parameter, "hyperplane normal is zero");
  require(std::isfinite(b), ErrorKind::invalid_parameter, "hyperplane offset must be finite");
  ComponentFunction h(Family::indicator_hyperplane, a.size());
  h.c_ = b;
  h.w_ = std::move(a);
  h.set_ = SetKind::hyperplane;
  return h;
}

ComponentFunction ComponentFunction::indicator_halfspace(Vector a, double b) {
  check_vector(a, "halfspace normal");
  require(a.squaredNorm() > 0.0, ErrorKind::invalid_parameter, "halfspace normal is zero");
  require(std::isfinite(b), ErrorKind::invalid_parameter, "halfspace offset must be finite");
  ComponentFunction h(Family::indicator_halfspace, a.size());
  h.c_ = b;
  h.w_ = std::move(a);
  h.set_ = SetKind::halfspace;
  return h;
}

ComponentFunction ComponentFunction::indicator_box(Vector lo, Vector hi) {
  check_vector(lo, "box lower bound");
  check_vector(hi, "box upper bound");
  require(lo.size() == hi.size(), ErrorKind::dimension_mismatch, "box bounds differ in size");
  require((lo.array() <= hi.array()).all(), ErrorKind::invalid_parameter,
          "box lower bound exceeds upper bound");
  ComponentFunction h(Family::indicator_box, lo.size());
  h.lo_ = std::move(lo);
  h.hi_ = std::move(hi);
  h.set_ = SetKind::box;
  return h;
}

ComponentFunction ComponentFunction::zero(Index dim) {
  require(dim > 0, ErrorKind::invalid_parameter, "zero-function dimension must be positive");
  return ComponentFunction(Family::zero, dim);
}

ComponentFunction ComponentFunction::set_distance_sq(Vector a, double b, SetKind kind,
                                                     double weight) {
  require(kind != SetKind::box, ErrorKind::invalid_parameter,
          "use set_distance_sq_box for box sets");
  check_vector(a, "set normal");
  require(a.squaredNorm() > 0.0, ErrorKind::invalid_parameter, "set normal is zero");
  require(std::isfinite(b), ErrorKind::invalid_parameter, "set offset must be finite");
  require(std::isfinite(weight) && weight > 0.0, ErrorKind::invalid_parameter,
          "set-distance weight must be positive");
  ComponentFunction h(Family::scaled_set_distance_sq, a.size());
  h.c_ = b;
  h.w_ = std::move(a);
  h.set_ = kind;
  h.weight_ = weight;
  return h;
}

ComponentFunction ComponentFunction::set_distance_sq_box(Vector lo, Vector hi, double weight) {
  ComponentFunction box = indicator_box(std::move(lo), std::move(hi));
  require(std::isfinite(weight) && weight > 0.0, ErrorKind::invalid_parameter,
          "set-distance weight must be positive");
  box.family_ = Family::scaled_set_distance_sq;
  box.weight_ = weight;
  return box;
}

// ---- queries ---------------------------------------------------------------

bool ComponentFunction::is_indicator() const noexcept {
  return family_ == Family::indicator_hyperplane || family_ == Family::indicator_halfspace ||
         family_ == Family::indicator_box;
}

bool ComponentFunction::is_linear_model() const noexcept {
  switch (family_) {
    case Family::quadratic:
    case Family::hinge:
    case Family::absolute:
    case Family::delta_insensitive:
    case Family::logistic:
      return true;
    default:
      return false;
  }
}

std::optional<double> ComponentFunction::subgradient_bound() const noexcept {
  switch (family_) {
    case Family::hinge:
    case Family::absolute:
    case Family::delta_insensitive:
    case Family::logistic:
      return w_.norm();
    case Family::l1:
      return lambda1_ * std::sqrt(static_cast<double>(dim_));
    case Family::indicator_hyperplane:
    case Family::indicator_halfspace:
    case Family::indicator_box:
    case Family::zero:
      return 0.0;
    case Family::quadratic:
    case Family::elastic_net:
    case Family::scaled_set_distance_sq:
      return std::nullopt;
  }
  return std::nullopt;
}

void ComponentFunction::check_dim(const Vector& x, const char* op) const {
  if (x.size() != dim_)
    fail(ErrorKind::dimension_mismatch,
         fmt::format("{} on {} component: expected dimension {}, got {}", op,
                     to_string(family_), dim_, x.size()));
}

bool ComponentFunction::in_set(const Vector& x) const {
  switch (set_) {
    case SetKind::hyperplane:
      return std::abs(residual(x)) <= kFeasibilityTol * (1.0 + std::abs(c_) + w_.norm() * x.norm());
    case SetKind::halfspace:
      return residual(x) <= kFeasibilityTol * (1.0 + std::abs(c_) + w_.norm() * x.norm());
    case SetKind::box:
      for (Index i = 0; i < dim_; ++i) {
        if (x[i] < lo_[i] - kFeasibilityTol * (1.0 + std::abs(lo_[i]))) return false;
        if (x[i] > hi_[i] + kFeasibilityTol * (1.0 + std::abs(hi_[i]))) return false;
      }
      return true;
  }
  return false;
}

bool ComponentFunction::feasible(const Vector& x) const {
  check_dim(x, "feasible");
  return !is_indicator() || in_set(x);
}

double ComponentFunction::scalar_loss(double s) const {
  switch (family_) {
    case Family::quadratic: return s * s;
    case Family::absolute: return std::abs(s);
    case Family::delta_insensitive: return std::max(std::abs(s) - delta_, 0.0);
    case Family::hinge: return std::max(0.0, 1.0 - s);
    case Family::logistic: return logistic_loss(s);
    default: return 0.0;
  }
}

double ComponentFunction::scalar_slope(double s) const {
  switch (family_) {
    case Family::quadratic: return 2.0 * s;
    case Family::absolute: return sign(s);
    case Family::delta_insensitive: return std::abs(s) > delta_ ? sign(s) : 0.0;
    case Family::hinge: return s < 1.0 ? -1.0 : 0.0;
    case Family::logistic: return logistic_slope(s);
    default: return 0.0;
  }
}

// prox of tau * phi at r.
double ComponentFunction::scalar_prox(double r, double tau) const {
  switch (family_) {
    case Family::quadratic:
      return r / (1.0 + 2.0 * tau);
    case Family::absolute:
      return soft_threshold(r, tau);
    case Family::delta_insensitive:
      if (std::abs(r) <= delta_) return r;
      if (std::abs(r) <= delta_ + tau) return sign(r) * delta_;
      return r - sign(r) * tau;
    case Family::hinge:
      if (r >= 1.0) return r;
      if (r >= 1.0 - tau) return 1.0;
      return r + tau;
    case Family::logistic:
      return logistic_scalar_prox(r, tau);
    default:
      return r;
  }
}

double ComponentFunction::eval(const Vector& x) const {
  check_dim(x, "eval");
  if (is_linear_model()) return scalar_loss(residual(x));
  switch (family_) {
    case Family::l1:
      return lambda1_ * x.lpNorm<1>();
    case Family::elastic_net:
      return lambda1_ * x.squaredNorm() + lambda2_ * x.lpNorm<1>();
    case Family::indicator_hyperplane:
    case Family::indicator_halfspace:
    case Family::indicator_box:
      return in_set(x) ? 0.0 : kInf;
    case Family::zero:
      return 0.0;
    case Family::scaled_set_distance_sq:
      return 0.5 * weight_ * (x - project(x)).squaredNorm();
    default:
      return 0.0;
  }
}

Vector ComponentFunction::subgradient(const Vector& x) const {
  check_dim(x, "subgradient");
  if (is_linear_model()) return scalar_slope(residual(x)) * w_;
  switch (family_) {
    case Family::l1:
      return x.unaryExpr([this](double v) { return lambda1_ * sign(v); });
    case Family::elastic_net:
      return x.unaryExpr([this](double v) { return 2.0 * lambda1_ * v + lambda2_ * sign(v); });
    case Family::indicator_hyperplane:
    case Family::indicator_halfspace:
    case Family::indicator_box:
      if (!in_set(x))
        fail(ErrorKind::infeasible_point,
             fmt::format("subgradient of {} requested at an infeasible point", to_string(family_)));
      return Vector::Zero(dim_);
    case Family::scaled_set_distance_sq:
      return weight_ * (x - project(x));
    default:
      return Vector::Zero(dim_);
  }
}

Vector ComponentFunction::prox(const Vector& x, double gamma) const {
  check_dim(x, "prox");
  check_gamma(gamma);
  if (is_linear_model()) {
    const double wsq = w_.squaredNorm();
    if (wsq == 0.0) return x;
    const double r = residual(x);
    const double s = scalar_prox(r, gamma * wsq);
    return x + ((s - r) / wsq) * w_;
  }
  switch (family_) {
    case Family::l1: {
      const double tau = gamma * lambda1_;
      return x.unaryExpr([tau](double v) { return soft_threshold(v, tau); });
    }
    case Family::elastic_net: {
      const double tau = gamma * lambda2_;
      const double scale = 1.0 / (1.0 + 2.0 * gamma * lambda1_);
      return x.unaryExpr([tau, scale](double v) { return scale * soft_threshold(v, tau); });
    }
    case Family::indicator_hyperplane:
    case Family::indicator_halfspace:
    case Family::indicator_box:
      return project(x);
    case Family::scaled_set_distance_sq: {
      const double theta = gamma * weight_ / (1.0 + gamma * weight_);
      return x + theta * (project(x) - x);
    }
    default:
      return x;
  }
}

Vector ComponentFunction::project(const Vector& x) const {
  check_dim(x, "project");
  require(is_indicator() || family_ == Family::scaled_set_distance_sq,
          ErrorKind::invalid_parameter,
          fmt::format("{} component has no constraint set", to_string(family_)));
  switch (set_) {
    case SetKind::hyperplane:
      return x - (residual(x) / w_.squaredNorm()) * w_;
    case SetKind::halfspace: {
      const double r = residual(x);
      if (r <= 0.0) return x;
      return x - (r / w_.squaredNorm()) * w_;
    }
    case SetKind::box:
      return x.cwiseMax(lo_).cwiseMin(hi_);
  }
  return x;
}

bool ComponentFunction::operator==(const ComponentFunction& o) const {
  auto same = [](const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; };
  return family_ == o.family_ && dim_ == o.dim_ && same(w_, o.w_) && c_ == o.c_ && y_ == o.y_ &&
         lambda1_ == o.lambda1_ && lambda2_ == o.lambda2_ && delta_ == o.delta_ &&
         weight_ == o.weight_ && set_ == o.set_ && same(lo_, o.lo_) && same(hi_, o.hi_);
}

}  // namespace sfo
