#include "sfo/problem.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace sfo {

// ---- SampleSpace -----------------------------------------------------------

SampleSpace SampleSpace::uniform(std::size_t n) {
  require(n > 0, ErrorKind::invalid_parameter, "sample space must be nonempty");
  SampleSpace s;
  s.weights_.assign(n, 1.0 / static_cast<double>(n));
  s.uniform_ = true;
  return s;
}

SampleSpace::SampleSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  require(!weights_.empty(), ErrorKind::invalid_parameter, "sample space must be nonempty");
  double total = 0.0;
  for (double w : weights_) {
    require(std::isfinite(w) && w >= 0.0, ErrorKind::invalid_parameter,
            "sample weights must be finite and nonnegative");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, ErrorKind::invalid_parameter,
          fmt::format("sample weights must sum to 1, got {:.17g}", total));
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
  cumulative_.back() = 1.0;
  uniform_ = std::all_of(weights_.begin(), weights_.end(),
                         [&](double w) { return w == weights_.front(); });
}

std::size_t SampleSpace::draw(RandomStream& rng) const {
  if (uniform_) return rng.index(weights_.size());
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                               static_cast<std::ptrdiff_t>(weights_.size()) - 1));
}

// ---- OptimalSet ------------------------------------------------------------

const char* to_string(OptimalSet::Kind kind) noexcept {
  switch (kind) {
    case OptimalSet::Kind::single_point: return "single_point";
    case OptimalSet::Kind::affine: return "affine";
    case OptimalSet::Kind::reference_point: return "reference_point";
  }
  return "unknown";
}

OptimalSet OptimalSet::single_point(Vector x_star) {
  require(x_star.size() > 0 && all_finite(x_star), ErrorKind::invalid_parameter,
          "optimal point must be a finite nonempty vector");
  OptimalSet s;
  s.kind_ = Kind::single_point;
  s.dim_ = x_star.size();
  s.point_ = std::move(x_star);
  return s;
}

OptimalSet OptimalSet::reference_point(Vector x_ref) {
  OptimalSet s = single_point(std::move(x_ref));
  s.kind_ = Kind::reference_point;
  return s;
}

OptimalSet OptimalSet::affine(Matrix A, Vector b) {
  require(A.rows() > 0 && A.cols() > 0, ErrorKind::invalid_parameter, "affine set needs a matrix");
  require(A.rows() == b.size(), ErrorKind::dimension_mismatch,
          fmt::format("affine set: A has {} rows but b has {} entries", A.rows(), b.size()));
  require(A.allFinite() && all_finite(b), ErrorKind::invalid_parameter,
          "affine set data must be finite");
  OptimalSet s;
  s.kind_ = Kind::affine;
  s.dim_ = A.cols();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  s.pinv_ = cod.pseudoInverse();
  s.point_ = s.pinv_ * b;
  s.A_ = std::move(A);
  s.b_ = std::move(b);
  return s;
}

Vector OptimalSet::project(const Vector& x) const {
  require(x.size() == dim_, ErrorKind::dimension_mismatch,
          fmt::format("projection onto optimal set: expected dimension {}, got {}", dim_, x.size()));
  if (kind_ == Kind::affine) return x - pinv_ * (A_ * x - b_);
  return point_;
}

// ---- CompositeProblem ------------------------------------------------------

CompositeProblem::CompositeProblem(std::vector<ComponentFunction> f,
                                   std::vector<ComponentFunction> g, SampleSpace samples,
                                   OptimalSet optimal_set, std::optional<double> f_star,
                                   std::string name)
    : dim_(optimal_set.dim()),
      f_(std::move(f)),
      g_(std::move(g)),
      samples_(std::move(samples)),
      optimal_set_(std::move(optimal_set)),
      f_star_(f_star),
      name_(std::move(name)) {
  const std::size_t n = samples_.size();
  require(f_.size() == n && g_.size() == n, ErrorKind::dimension_mismatch,
          fmt::format("problem needs {} f and g components, got {} and {}", n, f_.size(),
                      g_.size()));
  for (std::size_t i = 0; i < n; ++i) {
    require(f_[i].dim() == dim_ && g_[i].dim() == dim_, ErrorKind::dimension_mismatch,
            fmt::format("component {} has dimension ({}, {}), problem dimension is {}", i,
                        f_[i].dim(), g_[i].dim(), dim_));
  }
  if (f_star_) require(std::isfinite(*f_star_), ErrorKind::invalid_parameter, "F* must be finite");
}

void CompositeProblem::check_dim(const Vector& x, const char* op) const {
  if (x.size() != dim_)
    fail(ErrorKind::dimension_mismatch,
         fmt::format("{}: expected dimension {}, got {}", op, dim_, x.size()));
}

double CompositeProblem::full_objective(const Vector& x) const {
  check_dim(x, "full_objective");
  double total = 0.0;
  for (std::size_t i = 0; i < f_.size(); ++i) {
    const double w = samples_.weight(i);
    if (w == 0.0) continue;
    const double v = f_[i].eval(x) + g_[i].eval(x);
    if (std::isinf(v)) return std::numeric_limits<double>::infinity();
    total += w * v;
  }
  return total;
}

Vector CompositeProblem::stochastic_subgradient(const Vector& x, std::size_t xi) const {
  check_dim(x, "stochastic_subgradient");
  return f_.at(xi).subgradient(x) + g_.at(xi).subgradient(x);
}

Vector CompositeProblem::expected_subgradient(const Vector& x) const {
  check_dim(x, "expected_subgradient");
  Vector total = Vector::Zero(dim_);
  for (std::size_t i = 0; i < f_.size(); ++i) {
    const double w = samples_.weight(i);
    if (w != 0.0) total += w * stochastic_subgradient(x, i);
  }
  return total;
}

double CompositeProblem::expected_sq_subgradient_norm(const Vector& x) const {
  check_dim(x, "expected_sq_subgradient_norm");
  double total = 0.0;
  for (std::size_t i = 0; i < f_.size(); ++i) {
    const double w = samples_.weight(i);
    if (w != 0.0) total += w * stochastic_subgradient(x, i).squaredNorm();
  }
  return total;
}

Vector CompositeProblem::project_optimal(const Vector& x) const {
  check_dim(x, "project_optimal");
  return optimal_set_.project(x);
}

double CompositeProblem::distance_to_optimum_sq(const Vector& x) const {
  return (x - project_optimal(x)).squaredNorm();
}

double CompositeProblem::optimal_value() const {
  if (f_star_) return *f_star_;
  const double v = full_objective(optimal_set_.anchor());
  require(std::isfinite(v), ErrorKind::unresolvable_optimum,
          "optimal-set anchor lies outside dom F");
  return v;
}

bool CompositeProblem::has_shared_regularizer() const {
  return std::all_of(g_.begin(), g_.end(), [&](const ComponentFunction& h) { return h == g_.front(); });
}

// ---- matrix text format ----------------------------------------------------

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::io, fmt::format("cannot open matrix file '{}'", path.string()));
  long rows = 0;
  long cols = 0;
  {
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    require(static_cast<bool>(hs >> rows >> cols) && rows > 0 && cols > 0, ErrorKind::io,
            fmt::format("'{}': first line must be \"rows cols\"", path.string()));
  }
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorKind::io,
            fmt::format("'{}': expected {} rows, found {}", path.string(), rows, r));
    std::istringstream ls(line);
    for (long c = 0; c < cols; ++c) {
      require(static_cast<bool>(ls >> m(r, c)), ErrorKind::io,
              fmt::format("'{}': row {} has fewer than {} entries", path.string(), r + 1, cols));
    }
  }
  require(m.allFinite(), ErrorKind::io,
          fmt::format("'{}': matrix has non-finite entries", path.string()));
  return m;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::io, fmt::format("cannot write matrix file '{}'", path.string()));
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) out << (c ? " " : "") << fmt::format("{:.17g}", m(r, c));
    out << '\n';
  }
  require(out.good(), ErrorKind::io, fmt::format("write failed for '{}'", path.string()));
}

}  // namespace sfo
