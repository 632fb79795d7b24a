#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dpk/eop.hpp"

namespace dpk {

/// U = D e^{iX}: D diagonal unitary, X self-adjoint with exactly zero tail.
struct UnitaryFactorization {
  Diagonal diagonal_unitary;
  EopOperator exponent;

  EopOperator reconstruct() const;
};

/// A = D^{1/2} e^Z D^{1/2}: D positive diagonal, Z self-adjoint, compact,
/// zero diagonal.
struct PortaRechtFactorization {
  Diagonal diagonal;
  EopOperator exponent;

  EopOperator reconstruct() const;
};

struct PortaRechtOptions {
  double tol = 1e-10;
  std::size_t max_iter = 500;
  /// Starting log-diagonal for the head; defaults to log(Delta(A)).
  std::optional<RealVector> initial_log_head;
  bool trace = false;
};

struct PortaRechtStep {
  std::size_t iteration = 0;
  double alpha = 1.0;
  double diagonal_residual = 0.0;
  double reconstruction_residual = 0.0;
  bool accepted = true;
};

struct PortaRechtResult {
  PortaRechtFactorization factorization;
  std::size_t iterations = 0;
  double diagonal_residual = 0.0;
  double reconstruction_residual = 0.0;
  std::vector<PortaRechtStep> trace;
};

/// e^{iX} block-wise for self-adjoint X; a zero tail maps to an exact identity.
EopOperator exp_i(const EopOperator& x);
/// e^{X} block-wise for self-adjoint X.
EopOperator exp_self_adjoint(const EopOperator& x);

/// Principal logarithm: X = X*, e^{iX} = U, eigenphases in [-pi, pi).
EopOperator log_unitary(const EopOperator& u);

UnitaryFactorization unitary_factorize(const EopOperator& u);

/// t -> D(t) e^{itX}, a path of D+K unitaries from I to U.
class UnitaryPath {
 public:
  explicit UnitaryPath(const EopOperator& u);

  EopOperator at(double t) const;
  /// pi (1 + ||X||), an upper bound for ||U(t) - U(s)|| / |t - s|.
  double lipschitz_bound() const;
  const UnitaryFactorization& factorization() const noexcept { return factorization_; }

 private:
  UnitaryFactorization factorization_;
  Vector head_phases_;
  Vector tail_phases_;
};

EopOperator unitary_path(const EopOperator& u, double t);

/// Damped fixed-point iteration on the log-diagonal l:
///   Z = log(D^{-1/2} A D^{-1/2}),  rho = Delta(Z),  l <- l + alpha * rho.
/// alpha starts at 1 and halves (down to 1/64) whenever the diagonal
/// residual would grow. The tail is solved exactly: D_tail = A_tail, Z_tail = 0.
PortaRechtResult porta_recht(const EopOperator& a, const PortaRechtOptions& options = {});

}  // namespace dpk
