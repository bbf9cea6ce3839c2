#pragma once

// Reference implementations used to cross-check the closed-form routines.
// They rely only on function values (plus the defining constraint data for
// hyperplane indicators), never on the closed-form proximal maps.

#include "sfo/components.hpp"
#include "sfo/problem.hpp"

#include <functional>
#include <vector>

namespace sfo::oracle {

/// Minimizer of a convex function on the real line, located by an expanding
/// uniform grid followed by golden-section search between the grid
/// neighbours of the best point. `center` and `half_width` seed the grid.
double minimize_1d(const std::function<double(double)>& q, double center, double half_width = 1.0);

/// argmin_y h(y) + ||y - x||^2 / (2 gamma) by direct numerical minimization.
Vector prox(const ComponentFunction& h, const Vector& x, double gamma);

/// Randomized Kaczmarz x <- x - ((a_i'x - b_i) / ||a_i||^2) a_i with the row
/// sequence of a uniform sample stream seeded by `seed`.
std::vector<Vector> kaczmarz(const Matrix& A, const Vector& b, const Vector& x0, std::size_t iters,
                             std::uint64_t seed);

/// Equality case r_{t+1} = max(0, (1 - c/(t+1)) r_t + d/(t+1)^2), t = t0..T.
std::vector<double> simulate_lemma11(double c, double d, std::size_t t0, double r_t0, std::size_t T);

/// Equality case r_{t+1} = max(0, (1 - c/(t+1)^g) r_t + d/(t+1)^z), t = t0..T.
std::vector<double> simulate_lemma12(double c, double d, double gamma_exp, double zeta,
                                     std::size_t t0, double r_t0, std::size_t T);

/// Random component of the given family in dimension `dim`.
ComponentFunction random_component(Family family, Index dim, RandomStream& rng);

struct FamilyCheck {
  Family family = Family::zero;
  std::size_t samples = 0;
  double max_oracle_error = 0.0;      // ||prox - oracle|| / max(1, ||x||)
  double max_moreau_violation = 0.0;  // rhs - lhs of the three-point inequality, relative
  double max_firm_violation = 0.0;    // ||p - q||^2 - <p - q, x - y>, relative
  bool pass = false;
};

struct ProxCheckOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 2024;
  double oracle_tol = 1e-6;
  double moreau_tol = 1e-10;
  double firm_tol = 1e-10;
};

struct ProxCheckReport {
  std::vector<FamilyCheck> families;
  bool pass = false;
};

ProxCheckReport prox_check(const ProxCheckOptions& options = {});

}  // namespace sfo::oracle
