#include "sfo/harness/generators.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sfo::harness {

namespace {

void check_shape(Index m, Index n) {
  require(m >= 1 && n >= 1, ErrorKind::invalid_parameter,
          fmt::format("problem dimensions must be positive, got m = {}, n = {}", m, n));
  require(n <= 1000, ErrorKind::invalid_parameter,
          fmt::format("dimension {} exceeds the supported maximum of 1000", n));
}

double smallest_nonzero_eigenvalue(const Matrix& AtA) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(AtA);
  const Vector ev = eig.eigenvalues();
  const double tol = 1e-10 * std::max(1.0, ev.maxCoeff());
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > tol) return ev(i);
  return 0.0;
}

CompositeProblem kaczmarz_problem(const Matrix& A, const Vector& b, std::string name) {
  const Index m = A.rows();
  std::vector<ComponentFunction> f, g;
  f.reserve(static_cast<std::size_t>(m));
  g.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    f.push_back(ComponentFunction::set_distance_sq(A.row(i).transpose(), b(i)));
    g.push_back(ComponentFunction::zero(A.cols()));
  }
  CompositeProblem p(std::move(f), std::move(g), SampleSpace::uniform(static_cast<std::size_t>(m)),
                     OptimalSet::affine(A, b), 0.0, std::move(name));
  AnalyticConstants c;
  c.L = 2.0;
  c.B_sq = 0.0;
  c.Bg_sq = 0.0;
  c.source = "analytic-kaczmarz";
  // Linear-regularity constants for unit-weight rows: lambda_min^nz(A'WA)
  // with W the row weights scaled by the squared row norms.
  Matrix AtWA = Matrix::Zero(A.cols(), A.cols());
  for (Index i = 0; i < m; ++i) {
    const Vector a = A.row(i).transpose();
    AtWA += (a * a.transpose()) / (a.squaredNorm() * static_cast<double>(m));
  }
  const double lam = smallest_nonzero_eigenvalue(AtWA);
  c.extras["lambda_min_nz"] = lam * static_cast<double>(m);
  c.extras["mu_linear_regularity"] = lam;
  if (lam > 0.0) c.extras["kappa_stated"] = 1.0 / lam;
  p.set_analytic_constants(std::move(c));
  return p;
}

CompositeProblem quadratic_problem(const Matrix& Z, const Vector& y, std::string name) {
  const Index m = Z.rows();
  std::vector<ComponentFunction> f, g;
  for (Index i = 0; i < m; ++i) {
    f.push_back(ComponentFunction::quadratic(Z.row(i).transpose(), y(i)));
    g.push_back(ComponentFunction::zero(Z.cols()));
  }
  const Vector x_ref = Z.completeOrthogonalDecomposition().solve(y);
  CompositeProblem p(std::move(f), std::move(g), SampleSpace::uniform(static_cast<std::size_t>(m)),
                     OptimalSet::reference_point(x_ref), std::nullopt, std::move(name));
  return p;
}

}  // namespace

Matrix unit_row_matrix(Index m, Index n, RandomStream& rng) {
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i) {
    Vector r = rng.normal_vector(n);
    A.row(i) = (r / r.norm()).transpose();
  }
  return A;
}

CompositeProblem consistent_linear_system(Index m, Index n, std::uint64_t seed) {
  check_shape(m, n);
  RandomStream rng(seed);
  const Matrix A = unit_row_matrix(m, n, rng);
  const Vector x_star = rng.normal_vector(n);
  const Vector b = A * x_star;
  return kaczmarz_problem(A, b, fmt::format("consistent_linear_system({}, {}, {})", m, n, seed));
}

CompositeProblem least_squares(Index m, Index n, double noise, std::uint64_t seed) {
  check_shape(m, n);
  require(std::isfinite(noise) && noise >= 0.0, ErrorKind::invalid_parameter,
          "noise level must be finite and nonnegative");
  RandomStream rng(seed);
  const Matrix Z = unit_row_matrix(m, n, rng);
  const Vector x_true = rng.normal_vector(n);
  Vector y = Z * x_true;
  for (Index i = 0; i < m; ++i) y(i) += noise * rng.normal();
  return quadratic_problem(Z, y, fmt::format("least_squares({}, {}, {}, {})", m, n, noise, seed));
}

double quadratic_smoothness(const CompositeProblem& p) {
  Matrix H = Matrix::Zero(p.dim(), p.dim());
  for (std::size_t i = 0; i < p.num_samples(); ++i) {
    const auto& f = p.f(i);
    require(f.family() == Family::quadratic, ErrorKind::invalid_parameter,
            "smoothness constant needs quadratic losses");
    H += 2.0 * p.samples().weight(i) * f.direction() * f.direction().transpose();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  return eig.eigenvalues().maxCoeff();
}

ReferenceSolve full_proximal_gradient(const CompositeProblem& p, Vector x, double step,
                                      std::size_t max_iters, double tol) {
  require(p.has_shared_regularizer(), ErrorKind::invalid_parameter,
          "full proximal gradient needs a regularizer shared by all samples");
  require(step > 0.0, ErrorKind::invalid_parameter, "step must be positive");
  const ComponentFunction& g = p.g(0);
  ReferenceSolve out;
  for (std::size_t k = 0; k < max_iters; ++k) {
    Vector grad = Vector::Zero(p.dim());
    for (std::size_t i = 0; i < p.num_samples(); ++i)
      grad += p.samples().weight(i) * p.f(i).subgradient(x);
    Vector next = g.prox(x - step * grad, step);
    out.mapping_norm = (x - next).norm() / step;
    x = std::move(next);
    out.iterations = k + 1;
    if (out.mapping_norm < tol) break;
  }
  out.value = p.full_objective(x);
  out.x = std::move(x);
  return out;
}

CompositeProblem lasso(Index m, Index n, double lambda, std::uint64_t seed) {
  check_shape(m, n);
  require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::invalid_parameter,
          "lasso weight must be positive");
  RandomStream rng(seed);
  Matrix Z(m, n);
  for (Index i = 0; i < m; ++i) Z.row(i) = rng.normal_vector(n).transpose();
  Vector x_true = Vector::Zero(n);
  for (Index j = 0; j < n; j += 4) x_true(j) = rng.uniform(-2.0, 2.0);
  Vector y = Z * x_true;
  for (Index i = 0; i < m; ++i) y(i) += 0.1 * rng.normal();

  std::vector<ComponentFunction> f, g;
  for (Index i = 0; i < m; ++i) {
    f.push_back(ComponentFunction::quadratic(Z.row(i).transpose(), y(i)));
    g.push_back(ComponentFunction::l1(n, lambda));
  }
  const auto samples = SampleSpace::uniform(static_cast<std::size_t>(m));
  // Provisional problem to drive the reference solve.
  CompositeProblem draft(f, g, samples, OptimalSet::single_point(Vector::Zero(n)), 0.0);
  const double Lf = quadratic_smoothness(draft);
  const ReferenceSolve ref = full_proximal_gradient(draft, Vector::Zero(n), 1.0 / Lf, 1000000, 1e-12);
  CompositeProblem p(std::move(f), std::move(g), samples, OptimalSet::reference_point(ref.x),
                     std::nullopt, fmt::format("lasso({}, {}, {}, {})", m, n, lambda, seed));
  AnalyticConstants c;
  c.extras["smoothness"] = Lf;
  c.extras["reference_iterations"] = static_cast<double>(ref.iterations);
  c.extras["reference_mapping_norm"] = ref.mapping_norm;
  c.source = "fitted";
  p.set_analytic_constants(std::move(c));
  return p;
}

CompositeProblem sharp_polyhedral(Index m, Index n, std::uint64_t seed) {
  check_shape(m, n);
  require(m >= n, ErrorKind::invalid_parameter,
          fmt::format("sharp_polyhedral needs m >= n for a unique solution, got {} < {}", m, n));
  RandomStream rng(seed);
  const Matrix A = unit_row_matrix(m, n, rng);
  Vector x_star(n);
  for (Index j = 0; j < n; ++j) x_star(j) = rng.uniform(-1.0, 1.0);
  const Vector b = A * x_star;
  Eigen::JacobiSVD<Matrix> svd(A);
  const double smin = svd.singularValues()(n - 1);
  require(smin > 1e-8, ErrorKind::invalid_parameter, "sharp_polyhedral matrix is rank deficient");

  std::vector<ComponentFunction> f, g;
  const Vector lo = Vector::Constant(n, -2.0);
  const Vector hi = Vector::Constant(n, 2.0);
  for (Index i = 0; i < m; ++i) {
    f.push_back(ComponentFunction::absolute(A.row(i).transpose(), b(i)));
    g.push_back(ComponentFunction::indicator_box(lo, hi));
  }
  CompositeProblem p(std::move(f), std::move(g), SampleSpace::uniform(static_cast<std::size_t>(m)),
                     OptimalSet::single_point(x_star), 0.0,
                     fmt::format("sharp_polyhedral({}, {}, {})", m, n, seed));
  AnalyticConstants c;
  c.L = 0.0;
  c.B_sq = 2.0;
  c.Bg_sq = 0.0;
  c.nu = 1.0;
  c.source = "subgradient-bounds";
  // mean |a_i'e| >= ||A e||_2 / m >= sigma_min(A) ||e|| / m.
  c.extras["mu_sharp_lower"] = smin / static_cast<double>(m);
  p.set_analytic_constants(std::move(c));
  return p;
}

CompositeProblem generate_problem(const ProblemSpec& spec) {
  if (spec.generator == "consistent_linear_system") return consistent_linear_system(spec.m, spec.n, spec.seed);
  if (spec.generator == "least_squares") return least_squares(spec.m, spec.n, spec.noise, spec.seed);
  if (spec.generator == "lasso") return lasso(spec.m, spec.n, spec.lambda, spec.seed);
  if (spec.generator == "sharp_polyhedral") return sharp_polyhedral(spec.m, spec.n, spec.seed);
  if (spec.generator == "from_file") {
    const Matrix A = load_matrix(spec.matrix);
    const Matrix B = load_matrix(spec.rhs);
    require(B.cols() == 1 && B.rows() == A.rows(), ErrorKind::dimension_mismatch,
            fmt::format("right-hand side must be {} x 1, got {} x {}", A.rows(), B.rows(), B.cols()));
    require(A.cols() <= 1000, ErrorKind::invalid_parameter, "dimension exceeds 1000");
    const Vector b = B.col(0);
    const std::string name = fmt::format("from_file({})", spec.matrix.string());
    if (spec.loss == "quadratic") return quadratic_problem(A, b, name);
    const Vector x_ls = A.completeOrthogonalDecomposition().solve(b);
    const double resid = (A * x_ls - b).lpNorm<Eigen::Infinity>();
    require(resid <= 1e-9 * std::max(1.0, b.lpNorm<Eigen::Infinity>()), ErrorKind::unresolvable_optimum,
            fmt::format("system is inconsistent (residual {}); the {} loss has no closed-form optimal set",
                        resid, spec.loss));
    for (Index i = 0; i < A.rows(); ++i)
      require(A.row(i).norm() > 0.0, ErrorKind::invalid_parameter, "matrix has a zero row");
    if (spec.loss == "kaczmarz") return kaczmarz_problem(A, b, name);
    if (spec.loss == "absolute") {
      Eigen::JacobiSVD<Matrix> svd(A);
      require(A.rows() >= A.cols() && svd.singularValues().minCoeff() > 1e-10,
              ErrorKind::unresolvable_optimum, "absolute loss needs a full-column-rank system");
      std::vector<ComponentFunction> f, g;
      for (Index i = 0; i < A.rows(); ++i) {
        f.push_back(ComponentFunction::absolute(A.row(i).transpose(), b(i)));
        g.push_back(ComponentFunction::zero(A.cols()));
      }
      return CompositeProblem(std::move(f), std::move(g),
                              SampleSpace::uniform(static_cast<std::size_t>(A.rows())),
                              OptimalSet::single_point(x_ls), 0.0, name);
    }
    fail(ErrorKind::config, fmt::format("unknown loss '{}' for from_file", spec.loss));
  }
  fail(ErrorKind::config, fmt::format("unknown generator '{}'", spec.generator));
}

}  // namespace sfo::harness
