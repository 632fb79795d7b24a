#include "dpk/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpk/factor.hpp"

namespace dpk::gen {

Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  const double s = 1.0 / std::sqrt(static_cast<double>(std::max<Index>(1, rows)));
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = s * rng.complex_normal();
  return m;
}

Matrix random_hermitian(Rng& rng, Index n) { return linalg::hermitian_part(random_matrix(rng, n, n)); }

Matrix random_low_rank(Rng& rng, Index n, Index rank) {
  return random_matrix(rng, n, rank) * random_matrix(rng, rank, n);
}

namespace {

Matrix random_diagonal_block(Rng& rng, Index p) {
  Vector d(p);
  for (Index i = 0; i < p; ++i) d(i) = rng.complex_normal();
  return d.asDiagonal();
}

}  // namespace

EopOperator random_dpk(Rng& rng, Index m, Index p) {
  Matrix head = random_matrix(rng, m, m);
  return EopOperator::make(std::move(head), random_diagonal_block(rng, p));
}

EopOperator random_self_adjoint_dpk(Rng& rng, Index m, Index p) {
  RealVector t(p);
  for (Index i = 0; i < p; ++i) t(i) = rng.normal();
  Matrix head = random_hermitian(rng, m);
  return EopOperator::make(std::move(head), t.cast<Complex>().asDiagonal());
}

EopOperator random_operator(Rng& rng, Index m, Index p) {
  if (rng.coin()) return random_dpk(rng, m, p);
  Matrix head = random_matrix(rng, m, m);
  return EopOperator::make(std::move(head), random_matrix(rng, p, p));
}

EopOperator random_singular_dpk(Rng& rng, Index m, Index p) {
  Matrix head = rng.coin() ? random_low_rank(rng, m, std::max<Index>(0, m - 1 - rng.below(3)))
                           : random_matrix(rng, m, m);
  Matrix tail = random_diagonal_block(rng, p);
  for (Index r = 0; r < p; ++r)
    if (rng.coin(0.15)) tail(r, r) = 0.0;
  if (rng.coin(0.3))
    for (Index i = 0; i < m; ++i)
      if (rng.coin(0.2)) head(i, i) = 0.0;
  return EopOperator::make(std::move(head), std::move(tail));
}

EopOperator random_compact_hermitian(Rng& rng, Index m, Index p, double norm) {
  Matrix h = random_hermitian(rng, m);
  const double n = linalg::spectral_norm(h);
  if (n > 0.0) h *= norm / n;
  return EopOperator::make(std::move(h), Matrix::Zero(p, p));
}

Diagonal random_phase_diagonal(Rng& rng, Index m, Index p) {
  Vector h(m), t(p);
  for (Index i = 0; i < m; ++i) h(i) = std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi));
  for (Index i = 0; i < p; ++i) t(i) = std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi));
  return Diagonal::make(std::move(h), std::move(t));
}

EopOperator random_unitary(Rng& rng, Index m, Index p) {
  const Diagonal d = random_phase_diagonal(rng, m, p);
  const EopOperator x = random_compact_hermitian(rng, m, p, rng.uniform(0.0, 3.0));
  return mul(d.to_operator(), exp_i(x));
}

EopOperator random_ball_unitary(Rng& rng, Index m, Index p) {
  RealVector t(p);
  for (Index i = 0; i < p; ++i) t(i) = rng.uniform(-1.5, 1.5);
  Matrix head = random_hermitian(rng, m);
  for (Index i = 0; i < m; ++i) head(i, i) += rng.uniform(-1.5, 1.5);
  EopOperator z = EopOperator::make(std::move(head), t.cast<Complex>().asDiagonal());
  const double n = operator_norm(z);
  const double target = rng.uniform(0.1, 2.9);
  if (n > target) z = scale(target / n, z);
  return exp_i(z);
}

RealVector random_pattern(Rng& rng, Index p) {
  RealVector pattern(p);
  for (Index i = 0; i < p; ++i) pattern(i) = rng.coin() ? 1.0 : 0.0;
  return pattern;
}

Diagonal random_diagonal_projection(Rng& rng, Index m, const RealVector& pattern) {
  Vector h(m);
  for (Index i = 0; i < m; ++i) h(i) = rng.coin() ? 1.0 : 0.0;
  return Diagonal::make(std::move(h), pattern.cast<Complex>());
}

ModelProjection random_projection(Rng& rng, Index m, Index p, double max_angle) {
  const Diagonal e = random_diagonal_projection(rng, m, random_pattern(rng, p));
  const EopOperator u = exp_i(random_compact_hermitian(rng, m, p, rng.uniform(0.0, max_angle)));
  return ModelProjection::make(mul(mul(u, e.to_operator()), adjoint(u)));
}

EopOperator random_positive(Rng& rng, Index m, Index p, double epsilon) {
  const EopOperator s = random_dpk(rng, m, p);
  return mul(adjoint(s), s) + EopOperator::scalar(epsilon, p);
}

PositiveFunctional random_functional(Rng& rng, Index size, Index period) {
  const Matrix b = random_matrix(rng, size, size);
  Matrix a = b.adjoint() * b;
  a /= std::max(1.0, a.trace().real());
  RealVector w(period);
  for (Index i = 0; i < period; ++i) w(i) = rng.uniform();
  return PositiveFunctional::make(linalg::hermitian_part(a), w);
}

PermutationSpec random_permutation(Rng& rng, Index m, Index p, bool tail_nontrivial) {
  std::vector<Index> head = rng.permutation(m);
  std::vector<Index> tail = rng.permutation(p);
  if (tail_nontrivial) {
    if (p < 2) throw Error(ErrorCode::Config, "a tail-nontrivial permutation needs period >= 2");
    bool trivial = true;
    for (Index r = 0; r < p; ++r) trivial = trivial && tail[static_cast<std::size_t>(r)] == r;
    if (trivial) std::swap(tail[0], tail[1]);
  } else {
    for (Index r = 0; r < p; ++r) tail[static_cast<std::size_t>(r)] = r;
  }
  return PermutationSpec::make(std::move(head), std::move(tail));
}

}  // namespace dpk::gen
