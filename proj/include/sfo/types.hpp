#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sfo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ErrorKind {
  dimension_mismatch,
  infeasible_point,
  invalid_parameter,
  solver_failure,
  vacuous_bound,
  unresolvable_optimum,
  io,
  config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Structured error carried by every failing operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

bool all_finite(const Vector& v) noexcept;

}  // namespace sfo
