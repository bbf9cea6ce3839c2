#include "sfo/schedules.hpp"

#include "sfo/types.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace sfo {

namespace {

void require_positive(double v, const char* what) {
  require(std::isfinite(v) && v > 0.0, ErrorKind::invalid_parameter,
          fmt::format("{} must be positive and finite, got {}", what, v));
}

}  // namespace

StepsizeSchedule StepsizeSchedule::constant(double gamma, std::optional<double> L) {
  require_positive(gamma, "constant stepsize");
  StepsizeSchedule s(Kind::constant);
  s.gamma_ = gamma;
  if (L) {
    require(std::isfinite(*L) && *L >= 0.0, ErrorKind::invalid_parameter, "L must be nonnegative");
    require(*L == 0.0 || gamma <= 2.0 / *L, ErrorKind::invalid_parameter,
            fmt::format("constant stepsize {} outside (0, 2/L] for L = {}", gamma, *L));
    s.L_ = *L;
  }
  return s;
}

StepsizeSchedule StepsizeSchedule::optimal_constant(double R0, double B_eff, std::size_t T,
                                                    std::optional<double> L) {
  require_positive(R0, "R0");
  require_positive(B_eff, "effective noise constant");
  require(T > 0, ErrorKind::invalid_parameter, "horizon T must be positive");
  const double Td = static_cast<double>(T);
  if (L) {
    require(std::isfinite(*L) && *L >= 0.0, ErrorKind::invalid_parameter, "L must be nonnegative");
    require(Td * B_eff * B_eff > R0 * R0 * *L * *L, ErrorKind::invalid_parameter,
            fmt::format("optimal constant stepsize refused: T B^2 = {} does not exceed "
                        "R0^2 L^2 = {}",
                        Td * B_eff * B_eff, R0 * R0 * *L * *L));
  }
  StepsizeSchedule s(Kind::optimal_constant);
  s.gamma_ = R0 / std::sqrt(Td * B_eff * B_eff);
  s.L_ = L.value_or(0.0);
  return s;
}

StepsizeSchedule StepsizeSchedule::inv_sqrt(double gamma0) {
  require_positive(gamma0, "gamma0");
  StepsizeSchedule s(Kind::inv_sqrt);
  s.gamma_ = gamma0;
  return s;
}

StepsizeSchedule StepsizeSchedule::hybrid(double L, double c, double alpha) {
  require_positive(L, "L");
  require_positive(c, "c");
  require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 1.0, ErrorKind::invalid_parameter,
          fmt::format("hybrid exponent must lie in (0, 1], got {}", alpha));
  StepsizeSchedule s(Kind::hybrid);
  s.L_ = L;
  s.c_ = c;
  s.alpha_ = alpha;
  return s;
}

double StepsizeSchedule::at(std::size_t t) const noexcept {
  switch (kind_) {
    case Kind::constant:
    case Kind::optimal_constant:
      return gamma_;
    case Kind::inv_sqrt:
      return gamma_ / std::sqrt(static_cast<double>(std::max<std::size_t>(t, 1)));
    case Kind::hybrid: {
      const double tail = alpha_ == 1.0 ? c_ / static_cast<double>(t + 1)
                                        : c_ / std::pow(static_cast<double>(t + 1), alpha_);
      return std::min(1.0 / L_, tail);
    }
  }
  return gamma_;
}

std::size_t StepsizeSchedule::switch_index() const noexcept {
  if (kind_ != Kind::hybrid) return 0;
  const double cl = c_ * L_;
  const double t0 = alpha_ == 1.0 ? std::floor(cl) : std::floor(std::pow(cl, 1.0 / alpha_));
  return static_cast<std::size_t>(std::max(0.0, t0));
}

std::string StepsizeSchedule::describe() const {
  switch (kind_) {
    case Kind::constant: return fmt::format("constant(gamma={:.6g})", gamma_);
    case Kind::optimal_constant: return fmt::format("optimal-constant(gamma={:.6g})", gamma_);
    case Kind::inv_sqrt: return fmt::format("inv-sqrt(gamma0={:.6g})", gamma_);
    case Kind::hybrid:
      return fmt::format("hybrid(L={:.6g}, c={:.6g}, alpha={:.6g}, t0={})", L_, c_, alpha_,
                         switch_index());
  }
  return "unknown";
}

StepsizeSchedule recommended_hybrid(double L, double mu) {
  require_positive(mu, "mu");
  return StepsizeSchedule::hybrid(L, 2.0 / mu, 1.0);
}

std::string_view to_string(StepsizeSchedule::Kind kind) noexcept {
  switch (kind) {
    case StepsizeSchedule::Kind::constant: return "constant";
    case StepsizeSchedule::Kind::optimal_constant: return "optimal-constant";
    case StepsizeSchedule::Kind::inv_sqrt: return "inv-sqrt";
    case StepsizeSchedule::Kind::hybrid: return "hybrid";
  }
  return "unknown";
}

std::optional<StepsizeSchedule::Kind> schedule_kind_from_string(std::string_view name) noexcept {
  using K = StepsizeSchedule::Kind;
  for (K k : {K::constant, K::optimal_constant, K::inv_sqrt, K::hybrid})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

}  // namespace sfo
