#pragma once

#include "sfo/types.hpp"

#include <optional>
#include <string_view>

namespace sfo {

enum class Family {
  quadratic,          // (z'x - y)^2
  hinge,              // max(0, 1 - y z'x)
  absolute,           // |z'x - y|
  delta_insensitive,  // max(|z'x - y| - delta, 0)
  logistic,           // log(1 + exp(-y z'x))
  l1,                 // lambda ||x||_1
  elastic_net,        // lambda1 ||x||^2 + lambda2 ||x||_1
  indicator_hyperplane,
  indicator_halfspace,
  indicator_box,
  zero,
  scaled_set_distance_sq,  // (weight / 2) dist(x, C)^2
};

inline constexpr Family kAllFamilies[] = {
    Family::quadratic,           Family::hinge,
    Family::absolute,            Family::delta_insensitive,
    Family::logistic,            Family::l1,
    Family::elastic_net,         Family::indicator_hyperplane,
    Family::indicator_halfspace, Family::indicator_box,
    Family::zero,                Family::scaled_set_distance_sq,
};

std::string_view to_string(Family family) noexcept;
std::optional<Family> family_from_string(std::string_view name) noexcept;

/// Set used by the scaled squared-distance family.
enum class SetKind { hyperplane, halfspace, box };

/// Points whose constraint residual is within this relative tolerance count
/// as feasible for the indicator families.
inline constexpr double kFeasibilityTol = 1e-9;

/// Residual tolerance and iteration cap of the safeguarded Newton solve in
/// the logistic prox.
inline constexpr double kLogisticResidualTol = 1e-12;
inline constexpr int kLogisticMaxIterations = 100;

/// One stochastic summand f(., xi) or g(., xi) with exact value, a
/// deterministic subgradient selection and its proximal operator.
///
/// Loss families are functions of a single affine form s = w'x - c, so their
/// prox reduces to a scalar prox along w. Values are immutable after
/// construction; all member functions are safe to call concurrently.
class ComponentFunction {
 public:
  static ComponentFunction quadratic(Vector z, double y);
  static ComponentFunction hinge(Vector z, double y);
  static ComponentFunction absolute(Vector z, double y);
  static ComponentFunction delta_insensitive(Vector z, double y, double delta);
  static ComponentFunction logistic(Vector z, double y);
  static ComponentFunction l1(Index dim, double lambda);
  static ComponentFunction elastic_net(Index dim, double lambda1, double lambda2);
  static ComponentFunction indicator_hyperplane(Vector a, double b);
  static ComponentFunction indicator_halfspace(Vector a, double b);
  static ComponentFunction indicator_box(Vector lo, Vector hi);
  static ComponentFunction zero(Index dim);
  /// (weight / 2) dist(x, {a'x = b})^2, or {a'x <= b} for SetKind::halfspace.
  static ComponentFunction set_distance_sq(Vector a, double b,
                                           SetKind kind = SetKind::hyperplane,
                                           double weight = 1.0);
  static ComponentFunction set_distance_sq_box(Vector lo, Vector hi, double weight = 1.0);

  Family family() const noexcept { return family_; }
  Index dim() const noexcept { return dim_; }
  bool is_indicator() const noexcept;

  /// Valid bound on the norm of every subgradient this component returns,
  /// present for globally Lipschitz families.
  std::optional<double> subgradient_bound() const noexcept;

  bool feasible(const Vector& x) const;

  /// h(x); +infinity outside the domain of an indicator.
  double eval(const Vector& x) const;

  /// An element of the subdifferential at x. Returns the minimum-norm
  /// element, which is zero at every kink of the supported families.
  Vector subgradient(const Vector& x) const;

  /// argmin_y h(y) + ||y - x||^2 / (2 gamma).
  Vector prox(const Vector& x, double gamma) const;

  /// Euclidean projection onto the constraint set of an indicator or of the
  /// set-distance family.
  Vector project(const Vector& x) const;

  // Parameter access for oracles and reporting.
  const Vector& direction() const noexcept { return w_; }
  double offset() const noexcept { return c_; }
  double label() const noexcept { return y_; }
  double lambda1() const noexcept { return lambda1_; }
  double lambda2() const noexcept { return lambda2_; }
  double delta() const noexcept { return delta_; }
  double weight() const noexcept { return weight_; }
  SetKind set_kind() const noexcept { return set_; }
  const Vector& lower() const noexcept { return lo_; }
  const Vector& upper() const noexcept { return hi_; }

  bool operator==(const ComponentFunction& other) const;

 private:
  explicit ComponentFunction(Family family, Index dim) : family_(family), dim_(dim) {}

  bool is_linear_model() const noexcept;
  void check_dim(const Vector& x, const char* op) const;
  double residual(const Vector& x) const { return w_.dot(x) - c_; }
  double scalar_loss(double s) const;
  double scalar_slope(double s) const;
  double scalar_prox(double r, double tau) const;
  bool in_set(const Vector& x) const;

  Family family_;
  Index dim_;
  Vector w_;           // direction of the affine form or constraint normal
  double c_ = 0.0;     // offset of the affine form or constraint right-hand side
  double y_ = 0.0;
  double lambda1_ = 0.0;
  double lambda2_ = 0.0;
  double delta_ = 0.0;
  double weight_ = 1.0;
  SetKind set_ = SetKind::hyperplane;
  Vector lo_;
  Vector hi_;
};

/// Scalar safeguarded Newton solve of s - r + tau * phi'(s) = 0 for the
/// logistic slope phi'(s) = -1 / (1 + e^s). Exposed for testing.
double logistic_scalar_prox(double r, double tau);

}  // namespace sfo
