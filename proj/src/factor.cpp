#include "dpk/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dpk {

namespace {

void require_unitary(const EopOperator& u) {
  const double defect = unitarity_defect(u);
  if (defect > tol::kUnitary) throw Error(ErrorCode::NotUnitary, "unitarity defect " + std::to_string(defect));
}

double phase_or_zero(Complex d) {
  return std::abs(d) < tol::kPhaseZero ? 0.0 : linalg::principal_phase(d);
}

Vector unit_phases(const RealVector& theta) {
  Vector out(theta.size());
  for (Index i = 0; i < theta.size(); ++i) out(i) = std::polar(1.0, theta(i));
  return out;
}

}  // namespace

EopOperator UnitaryFactorization::reconstruct() const {
  return mul(diagonal_unitary.to_operator(), exp_i(exponent));
}

EopOperator PortaRechtFactorization::reconstruct() const {
  const Diagonal& d = diagonal;
  Vector hs = d.head_entries().cwiseSqrt();
  Vector ts = d.tail_pattern().cwiseSqrt();
  const EopOperator root = Diagonal::make(hs, ts).to_operator();
  return mul(mul(root, exp_self_adjoint(exponent)), root);
}

EopOperator exp_i(const EopOperator& x) {
  return EopOperator::make(linalg::exp_i_hermitian(x.head()), linalg::exp_i_hermitian(x.tail_block()));
}

EopOperator exp_self_adjoint(const EopOperator& x) {
  return EopOperator::make(linalg::exp_hermitian(x.head()), linalg::exp_hermitian(x.tail_block()));
}

EopOperator log_unitary(const EopOperator& u) {
  require_unitary(u);
  return EopOperator::make(linalg::log_unitary(u.head()), linalg::log_unitary(u.tail_block()));
}

UnitaryFactorization unitary_factorize(const EopOperator& u) {
  require_unitary(u);
  if (!is_dpk_member(u)) throw Error(ErrorCode::NotInDpk, "unitary is not in D+K");
  const Index m = u.head_size();
  const Index p = u.period();
  RealVector head_theta(m), tail_theta(p);
  for (Index i = 0; i < m; ++i) head_theta(i) = phase_or_zero(u.head()(i, i));
  for (Index r = 0; r < p; ++r) tail_theta(r) = phase_or_zero(u.tail_block()(r, r));
  const Vector head_d = unit_phases(head_theta);
  Diagonal d = Diagonal::make(head_d, unit_phases(tail_theta));

  // D*U = I + D*K is unitary; its logarithm lives on the head only.
  const Matrix w = head_d.conjugate().asDiagonal() * u.head();
  EopOperator x = EopOperator::make(linalg::log_unitary(w), Matrix::Zero(p, p));
  return UnitaryFactorization{std::move(d), std::move(x)};
}

UnitaryPath::UnitaryPath(const EopOperator& u) : factorization_(unitary_factorize(u)) {
  const Diagonal& d = factorization_.diagonal_unitary;
  head_phases_ = d.head_entries();
  tail_phases_ = d.tail_pattern();
  for (Index i = 0; i < head_phases_.size(); ++i) head_phases_(i) = linalg::principal_phase(head_phases_(i));
  for (Index i = 0; i < tail_phases_.size(); ++i) tail_phases_(i) = linalg::principal_phase(tail_phases_(i));
}

EopOperator UnitaryPath::at(double t) const {
  const RealVector ht = head_phases_.real() * t;
  const RealVector tt = tail_phases_.real() * t;
  const EopOperator d_t = Diagonal::make(unit_phases(ht), unit_phases(tt)).to_operator();
  return mul(d_t, exp_i(scale(t, factorization_.exponent)));
}

double UnitaryPath::lipschitz_bound() const {
  return std::numbers::pi * (1.0 + operator_norm(factorization_.exponent));
}

EopOperator unitary_path(const EopOperator& u, double t) { return UnitaryPath(u).at(t); }

// ---- Porta-Recht -------------------------------------------------------------

namespace {

struct PortaRechtState {
  Matrix z;              // log(D^{-1/2} A D^{-1/2}) with its diagonal removed
  RealVector rho;        // diagonal of the log before removal
  double diagonal_residual = 0.0;
  double reconstruction_residual = 0.0;
};

PortaRechtState evaluate(const Matrix& a, const RealVector& log_d) {
  const RealVector inv_root = (-0.5 * log_d.array()).exp().matrix();
  const Matrix b = linalg::hermitian_part(inv_root.asDiagonal() * a * inv_root.asDiagonal());
  PortaRechtState s;
  s.z = linalg::log_positive(b);
  s.rho = s.z.diagonal().real();
  s.z.diagonal().setZero();
  s.diagonal_residual = s.rho.size() ? s.rho.cwiseAbs().maxCoeff() : 0.0;
  const RealVector root = (0.5 * log_d.array()).exp().matrix();
  const Matrix rebuilt = root.asDiagonal() * linalg::exp_hermitian(s.z) * root.asDiagonal();
  s.reconstruction_residual = linalg::spectral_norm(rebuilt - a);
  return s;
}

}  // namespace

PortaRechtResult porta_recht(const EopOperator& a, const PortaRechtOptions& options) {
  if (!is_dpk_member(a)) throw Error(ErrorCode::NotInDpk, "Porta-Recht factorization needs a D+K member");
  if (!is_self_adjoint(a, 1e-10)) throw Error(ErrorCode::NotPositive, "operator is not self-adjoint");
  const RealVector head_eigs = linalg::hermitian_eigenvalues(a.head());
  const RealVector tail_eigs = linalg::hermitian_eigenvalues(a.tail_block());
  const double lowest = std::min(head_eigs.size() ? head_eigs.minCoeff() : INFINITY, tail_eigs.minCoeff());
  if (!(lowest > tol::kInvertible))
    throw Error(ErrorCode::NotPositive, "smallest eigenvalue " + std::to_string(lowest));

  const Index m = a.head_size();
  const Index p = a.period();
  const Vector tail_d = a.tail_block().diagonal().real().cast<Complex>();
  const Matrix head = linalg::hermitian_part(a.head());

  PortaRechtResult result;
  RealVector log_d = options.initial_log_head.value_or(RealVector(head.diagonal().real().array().log().matrix()));
  if (log_d.size() != m) throw Error(ErrorCode::Config, "initial log-diagonal has the wrong length");

  constexpr double kMinAlpha = 1.0 / 64.0;
  double alpha = 1.0;
  PortaRechtState state = evaluate(head, log_d);
  std::size_t iter = 0;
  auto record = [&](double a_used, const PortaRechtState& s, bool accepted) {
    if (options.trace)
      result.trace.push_back({iter, a_used, s.diagonal_residual, s.reconstruction_residual, accepted});
  };
  record(0.0, state, true);

  while (m > 0 && (state.diagonal_residual > options.tol || state.reconstruction_residual > options.tol)) {
    if (iter == options.max_iter)
      throw NoConvergenceError(iter, std::max(state.diagonal_residual, state.reconstruction_residual),
                               "Porta-Recht iteration");
    ++iter;
    const RealVector candidate = log_d + alpha * state.rho;
    PortaRechtState next = evaluate(head, candidate);
    if (next.diagonal_residual > state.diagonal_residual && alpha > kMinAlpha) {
      record(alpha, next, false);
      alpha = std::max(alpha / 2.0, kMinAlpha);
      continue;
    }
    record(alpha, next, true);
    log_d = candidate;
    state = std::move(next);
  }

  const Vector head_d = log_d.array().exp().matrix().cast<Complex>();
  result.factorization.diagonal = Diagonal::make(head_d, tail_d);
  result.factorization.exponent =
      EopOperator::make(m > 0 ? linalg::hermitian_part(state.z) : Matrix(0, 0), Matrix::Zero(p, p));
  result.iterations = iter;
  result.diagonal_residual = state.diagonal_residual;
  result.reconstruction_residual = state.reconstruction_residual;
  return result;
}

}  // namespace dpk
