#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace sfo {

/// Stepsize policy t -> gamma_t.
class StepsizeSchedule {
 public:
  enum class Kind { constant, optimal_constant, inv_sqrt, hybrid };

  /// gamma_t = gamma. When L is given, gamma must lie in (0, 2/L].
  static StepsizeSchedule constant(double gamma, std::optional<double> L = std::nullopt);

  /// gamma = R0 / sqrt(T B^2) for a fixed horizon T, with R0 the initial
  /// distance to the optimal set and B the effective noise constant. When L
  /// is given, requires T B^2 > R0^2 L^2 and refuses the schedule otherwise.
  static StepsizeSchedule optimal_constant(double R0, double B_eff, std::size_t T,
                                           std::optional<double> L = std::nullopt);

  /// gamma_t = gamma0 / sqrt(max(t, 1)).
  static StepsizeSchedule inv_sqrt(double gamma0);
  static StepsizeSchedule inv_sqrt_for(double L) { return inv_sqrt(1.0 / L); }

  /// gamma_t = min(1/L, c / (t+1)^alpha), alpha in (0, 1].
  static StepsizeSchedule hybrid(double L, double c, double alpha = 1.0);

  double at(std::size_t t) const noexcept;
  double operator()(std::size_t t) const noexcept { return at(t); }

  Kind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  double L() const noexcept { return L_; }
  double c() const noexcept { return c_; }
  double alpha() const noexcept { return alpha_; }

  /// Hybrid switch index t0 = floor((cL)^(1/alpha)); the schedule equals 1/L
  /// for t < t0 and decays for t >= t0. Zero for other kinds.
  std::size_t switch_index() const noexcept;

  std::string describe() const;

 private:
  StepsizeSchedule(Kind kind) : kind_(kind) {}

  Kind kind_;
  double gamma_ = 0.0;  // constant value, or gamma0 for inv_sqrt
  double L_ = 0.0;
  double c_ = 0.0;
  double alpha_ = 1.0;
};

inline double stepsize_at(const StepsizeSchedule& s, std::size_t t) noexcept { return s.at(t); }

/// Hybrid schedule with c = 2/mu and alpha = 1.
StepsizeSchedule recommended_hybrid(double L, double mu);

std::string_view to_string(StepsizeSchedule::Kind kind) noexcept;
/// Accepts "constant", "optimal-constant", "inv-sqrt", "hybrid".
std::optional<StepsizeSchedule::Kind> schedule_kind_from_string(std::string_view name) noexcept;

}  // namespace sfo
