#pragma once

#include "sfo/components.hpp"
#include "sfo/random.hpp"
#include "sfo/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sfo {

/// Finite sample space {0..N-1} with a probability vector.
class SampleSpace {
 public:
  static SampleSpace uniform(std::size_t n);
  explicit SampleSpace(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(std::size_t xi) const { return weights_.at(xi); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  bool is_uniform() const noexcept { return uniform_; }

  /// i.i.d. draw with probability weights[xi].
  std::size_t draw(RandomStream& rng) const;

 private:
  SampleSpace() = default;

  std::vector<double> weights_;
  std::vector<double> cumulative_;
  bool uniform_ = false;
};

/// Describes the optimal set X* well enough to project onto it.
class OptimalSet {
 public:
  enum class Kind { single_point, affine, reference_point };

  static OptimalSet single_point(Vector x_star);
  /// X* = {x : A x = b}; projection uses the minimum-norm least-squares
  /// correction, so rank-deficient A is handled.
  static OptimalSet affine(Matrix A, Vector b);
  /// Stand-in for problems without a closed-form X*: a high-accuracy solution.
  static OptimalSet reference_point(Vector x_ref);

  Kind kind() const noexcept { return kind_; }
  Index dim() const noexcept { return dim_; }
  Vector project(const Vector& x) const;
  /// A point of X*: the stored point, or the minimum-norm solution of A x = b.
  const Vector& anchor() const noexcept { return point_; }
  const Matrix& matrix() const noexcept { return A_; }
  const Vector& rhs() const noexcept { return b_; }

 private:
  OptimalSet() = default;

  Kind kind_ = Kind::single_point;
  Index dim_ = 0;
  Vector point_;
  Matrix A_;
  Vector b_;
  Matrix pinv_;
};

const char* to_string(OptimalSet::Kind kind) noexcept;

/// Constants a problem family knows in closed form; estimation uses them
/// instead of fitting. `extras` carries informational values for reports.
struct AnalyticConstants {
  std::optional<double> L;
  std::optional<double> B_sq;
  std::optional<double> Bg_sq;
  std::optional<double> nu;
  std::map<std::string, double> extras;
  std::string source;
};

/// F(x) = E[f(x, xi) + g(x, xi)] over a finite sample space.
class CompositeProblem {
 public:
  CompositeProblem(std::vector<ComponentFunction> f, std::vector<ComponentFunction> g,
                   SampleSpace samples, OptimalSet optimal_set,
                   std::optional<double> f_star = std::nullopt, std::string name = {});

  Index dim() const noexcept { return dim_; }
  std::size_t num_samples() const noexcept { return samples_.size(); }
  const std::string& name() const noexcept { return name_; }
  const SampleSpace& samples() const noexcept { return samples_; }
  const ComponentFunction& f(std::size_t xi) const { return f_.at(xi); }
  const ComponentFunction& g(std::size_t xi) const { return g_.at(xi); }
  const std::vector<ComponentFunction>& f_components() const noexcept { return f_; }
  const std::vector<ComponentFunction>& g_components() const noexcept { return g_; }
  const OptimalSet& optimal_set() const noexcept { return optimal_set_; }
  std::optional<double> f_star() const noexcept { return f_star_; }

  const std::optional<AnalyticConstants>& analytic_constants() const noexcept {
    return analytic_;
  }
  void set_analytic_constants(AnalyticConstants c) { analytic_ = std::move(c); }

  std::size_t draw_sample(RandomStream& rng) const { return samples_.draw(rng); }

  /// Exact expectation; +infinity when an indicator with positive weight is violated.
  double full_objective(const Vector& x) const;

  /// grad f(x, xi) + grad g(x, xi) with the components' tie-break rule.
  Vector stochastic_subgradient(const Vector& x, std::size_t xi) const;
  /// E_xi of stochastic_subgradient; an element of dF(x).
  Vector expected_subgradient(const Vector& x) const;
  /// E_xi ||grad F(x, xi)||^2.
  double expected_sq_subgradient_norm(const Vector& x) const;

  Vector project_optimal(const Vector& x) const;
  double distance_to_optimum_sq(const Vector& x) const;

  /// F*: the declared value, else F evaluated at the optimal-set anchor.
  double optimal_value() const;

  /// True when every g(., xi) is the same function.
  bool has_shared_regularizer() const;

 private:
  void check_dim(const Vector& x, const char* op) const;

  Index dim_;
  std::vector<ComponentFunction> f_;
  std::vector<ComponentFunction> g_;
  SampleSpace samples_;
  OptimalSet optimal_set_;
  std::optional<double> f_star_;
  std::optional<AnalyticConstants> analytic_;
  std::string name_;
};

/// Plain-text dense matrix: first line "rows cols", then one row per line.
Matrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const Matrix& m);

}  // namespace sfo
