#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dpk {

enum class ErrorCode {
  Alignment,
  NonFiniteEntry,
  NotInDpk,
  NotInvertible,
  NotUnitary,
  NotPositive,
  NoConvergence,
  BadResidue,
  ModelViolation,
  NotProjection,
  NotComparable,
  OracleMismatch,
  IndexNotZero,
  InsufficientRoom,
  NotConjugate,
  ModelLimitation,
  NotDpkAutomorphism,
  NotInBall,
  StepTooLarge,
  KindMismatch,
  NotOrthogonalPatterns,
  InvalidArgument,
  Config,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by iterative solvers that exhaust their budget.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(std::size_t iterations, double residual, const std::string& what)
      : Error(ErrorCode::NoConvergence,
              what + " (iterations=" + std::to_string(iterations) +
                  ", residual=" + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

}  // namespace dpk
