#include "dpk/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

namespace dpk {

InvertibilityResult is_invertible(const EopOperator& t) {
  InvertibilityResult out;
  out.min_singular_value =
      std::min(linalg::min_singular_value(t.head()), linalg::min_singular_value(t.tail_block()));
  out.invertible = out.min_singular_value > tol::kInvertible;
  if (out.invertible) {
    const Matrix head_inv = t.head_size() > 0 ? Matrix(t.head().inverse()) : Matrix(0, 0);
    out.inverse = EopOperator::make(head_inv, t.tail_block().inverse());
  }
  return out;
}

std::pair<Diagonal, EopOperator> invertible_diagonal_decomposition(const EopOperator& t) {
  if (!is_dpk_member(t)) throw Error(ErrorCode::NotInDpk, "decomposition needs a D+K member");
  const InvertibilityResult inv = is_invertible(t);
  if (!inv.invertible)
    throw Error(ErrorCode::NotInvertible,
                "smallest singular value " + std::to_string(inv.min_singular_value));
  const Diagonal d = delta(t);
  Vector head = d.head_entries();
  const Vector& tail = d.tail_pattern();

  double smallest = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < head.size(); ++i)
    if (std::abs(head(i)) > tol::kInvertible) smallest = std::min(smallest, std::abs(head(i)));
  for (Index i = 0; i < tail.size(); ++i)
    if (std::abs(tail(i)) > tol::kInvertible) smallest = std::min(smallest, std::abs(tail(i)));
  // An invertible D+K member has an invertible tail, so `smallest` is finite.
  const double r = 0.5 * std::max(tol::kInvertible, smallest);

  for (Index i = 0; i < head.size(); ++i) {
    if (std::abs(head(i)) > tol::kInvertible) continue;
    const Complex bumped = head(i) + r;
    head(i) = std::abs(bumped) > tol::kInvertible ? bumped : head(i) - r;
  }
  Diagonal d0 = Diagonal::make(head, tail);
  Matrix k_head = t.head() - head.asDiagonal().toDenseMatrix();
  EopOperator k0 = EopOperator::make(std::move(k_head), Matrix::Zero(t.period(), t.period()));
  return {std::move(d0), std::move(k0)};
}

namespace {

bool head_is_safely_invertible(const Vector& d_eps, const Matrix& m) {
  const Matrix h = Matrix(d_eps.asDiagonal()) + m;
  if (h.size() == 0) return true;
  if (linalg::min_singular_value(h) <= tol::kInvertible) return false;
  // -1 must stay away from the spectrum of D_eps^{-1} M.
  const Matrix a = d_eps.cwiseInverse().asDiagonal() * m;
  for (const Complex& z : linalg::eigenvalues(a))
    if (std::abs(z + 1.0) <= 1e-8) return false;
  return true;
}

/// Lifts the smallest singular direction of `h` by `shift`, in place on `m`.
void lift_smallest_direction(const Vector& d_eps, Matrix& m, double shift, bool hermitian) {
  const Matrix h = Matrix(d_eps.asDiagonal()) + m;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(h));
    Index k = 0;
    for (Index i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(k))) k = i;
    const double sign = es.eigenvalues()(k) >= 0.0 ? 1.0 : -1.0;
    const Vector v = es.eigenvectors().col(k);
    m += (sign * shift) * v * v.adjoint();
    m = linalg::hermitian_part(m);
  } else {
    Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Index k = svd.singularValues().size() - 1;
    m += shift * svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
  }
}

}  // namespace

EopOperator invertible_approx(const EopOperator& t, double epsilon) {
  if (!is_dpk_member(t)) throw Error(ErrorCode::NotInDpk, "invertible approximation needs a D+K member");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::Config, "epsilon must be positive");
  const bool hermitian = is_self_adjoint(t);

  auto lift = [epsilon](const Vector& d) {
    Vector out = d;
    for (Index i = 0; i < out.size(); ++i)
      if (std::abs(out(i)) < epsilon) out(i) = epsilon;
    return out;
  };
  const Diagonal d = delta(t);
  const Vector head_eps = lift(d.head_entries());
  const Vector tail_eps = lift(d.tail_pattern());

  // The compact part is already finite rank, so it is its own approximant M.
  Matrix m = t.head();
  m.diagonal().setZero();

  const double shift = std::min(1e-6, epsilon / 4.0);
  constexpr int kMaxRetries = 3;
  int retries = 0;
  while (!head_is_safely_invertible(head_eps, m)) {
    if (retries == kMaxRetries)
      throw NoConvergenceError(static_cast<std::size_t>(retries), 0.0, "could not move -1 out of the spectrum");
    lift_smallest_direction(head_eps, m, shift, hermitian);
    ++retries;
  }
  return EopOperator::make(Matrix(head_eps.asDiagonal()) + m, tail_eps.asDiagonal().toDenseMatrix());
}

FredholmData fredholm_data(const EopOperator& t) {
  FredholmData out;
  out.tail_min_singular_value = linalg::min_singular_value(t.tail_block());
  out.is_fredholm = out.tail_min_singular_value > tol::kInvertible;
  if (!out.is_fredholm) {
    out.infinite_kernel = true;
    return out;
  }
  const Index kernel = linalg::null_dimension(t.head(), tol::kInvertible);
  const Index cokernel = linalg::null_dimension(t.head().adjoint(), tol::kInvertible);
  out.kernel_dim = kernel;
  out.cokernel_dim = cokernel;
  out.index = kernel - cokernel;
  return out;
}

IsometryKind isometry_classify(const EopOperator& v) {
  auto defect = [](const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return linalg::spectral_norm(a - Matrix::Identity(a.rows(), a.cols()));
  };
  const double left = std::max(defect(v.head().adjoint() * v.head()),
                               defect(v.tail_block().adjoint() * v.tail_block()));
  if (left > tol::kUnitary) return IsometryKind::NotIsometry;
  const double right = std::max(defect(v.head() * v.head().adjoint()),
                                defect(v.tail_block() * v.tail_block().adjoint()));
  if (right > 1e-9) throw Error(ErrorCode::ModelViolation, "proper isometry encountered");
  return IsometryKind::Unitary;
}

}  // namespace dpk
