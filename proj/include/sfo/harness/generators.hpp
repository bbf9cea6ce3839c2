#pragma once

#include "sfo/problem.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace sfo::harness {

/// m x n Gaussian matrix with rows scaled to unit norm.
Matrix unit_row_matrix(Index m, Index n, RandomStream& rng);

/// Randomized Kaczmarz instance: f(x, i) = dist(x, {a_i'x = b_i})^2 / 2 with
/// unit-norm Gaussian rows and b = A x* for Gaussian x*; g = 0; X* is the
/// affine solution set. Carries L = 2, B = 0.
CompositeProblem consistent_linear_system(Index m, Index n, std::uint64_t seed);

/// f(x, i) = (z_i'x - y_i)^2 with unit rows and y = Z x_true + noise * N(0, 1);
/// g = 0. The reference point is the exact least-squares solution.
CompositeProblem least_squares(Index m, Index n, double noise, std::uint64_t seed);

/// f(x, i) = (z_i'x - y_i)^2 with Gaussian z_i and a sparse planted solution,
/// g = lambda ||x||_1 shared by all samples. The reference point comes from
/// full proximal gradient iterated to a stall.
CompositeProblem lasso(Index m, Index n, double lambda, std::uint64_t seed);

/// f(x, i) = |a_i'x - b_i| on a consistent full-column-rank system with unit
/// rows, g = indicator of [-2, 2]^n, x* uniform in [-1, 1]^n. Sharp minimum
/// (nu = 1), L = 0 and B^2 = 2.
CompositeProblem sharp_polyhedral(Index m, Index n, std::uint64_t seed);

struct ReferenceSolve {
  Vector x;
  double value = 0.0;
  std::size_t iterations = 0;
  double mapping_norm = 0.0;
};

/// Full proximal gradient x <- prox_{s g}(x - s grad f_mean(x)) for a problem
/// whose regularizer is shared by all samples. Stops when the gradient
/// mapping norm falls below `tol` or after `max_iters` iterations.
ReferenceSolve full_proximal_gradient(const CompositeProblem& p, Vector x, double step,
                                      std::size_t max_iters, double tol);

/// Smooth-part Lipschitz constant 2 lambda_max(Z' W Z) of a quadratic-loss problem.
double quadratic_smoothness(const CompositeProblem& p);

struct ProblemSpec {
  std::string generator;
  Index m = 0;
  Index n = 0;
  std::uint64_t seed = 1;
  double lambda = 0.1;
  double noise = 0.5;
  std::string loss = "kaczmarz";  // from_file: kaczmarz | quadratic | absolute
  std::filesystem::path matrix;
  std::filesystem::path rhs;
};

/// Dispatches on spec.generator: consistent_linear_system, least_squares,
/// lasso, sharp_polyhedral or from_file.
CompositeProblem generate_problem(const ProblemSpec& spec);

}  // namespace sfo::harness
