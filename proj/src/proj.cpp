#include "dpk/proj.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dpk/factor.hpp"

namespace dpk {

namespace {

constexpr double kTailMatch = 1e-10;
// Singular values of Q restricted to R(P) at or below this are kernel
// directions; matches |eig(P - Q)| >= 1 - kEigenCluster.
const double kAngleZero = std::sqrt(2.0 * tol::kEigenCluster);

Index round_index(double x) { return static_cast<Index>(std::llround(x)); }

void require_comparable(const EopOperator& a, const EopOperator& b) {
  if (linalg::spectral_norm(a.tail_block() - b.tail_block()) > kTailMatch)
    throw Error(ErrorCode::NotComparable, "projections differ by a non-compact operator");
}

Index count_small_singular(const Matrix& m) {
  if (m.cols() == 0 || m.rows() == 0) return m.cols();
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  Index n = m.cols() - s.size();  // rank-deficient shapes contribute zeros
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) <= kAngleZero) ++n;
  return n;
}

RealVector minimal_pattern(const RealVector& pattern) {
  const Diagonal d = normalize(Diagonal::make(Vector(0), pattern.cast<Complex>()));
  return d.tail_pattern().real();
}

}  // namespace

// ---- ModelProjection ---------------------------------------------------------------

ModelProjection ModelProjection::make(const EopOperator& p) {
  if (operator_norm(p - adjoint(p)) > tol::kProjection)
    throw Error(ErrorCode::NotProjection, "operator is not self-adjoint");
  if (operator_norm(mul(p, p) - p) > tol::kProjection)
    throw Error(ErrorCode::NotProjection, "operator is not idempotent");
  Matrix head = linalg::hermitian_part(p.head());
  Matrix tail = linalg::hermitian_part(p.tail_block());
  if (is_dpk_member(p)) {
    RealVector bits = tail.diagonal().real();
    for (Index r = 0; r < bits.size(); ++r) bits(r) = bits(r) > 0.5 ? 1.0 : 0.0;
    tail = bits.cast<Complex>().asDiagonal();
  }
  return ModelProjection(EopOperator::make(std::move(head), std::move(tail)));
}

ModelProjection ModelProjection::from_diagonal(const Diagonal& e) { return make(e.to_operator()); }

bool ModelProjection::in_dpk() const { return is_dpk_member(op_); }

RealVector ModelProjection::tail_pattern() const {
  if (!in_dpk()) throw Error(ErrorCode::NotInDpk, "projection is not in D+K");
  return op_.tail_block().diagonal().real();
}

ProjectionDecomposition projection_diag_decompose(const ModelProjection& p) {
  const RealVector pattern = p.tail_pattern();
  const EopOperator& op = p.op();
  Vector head(op.head_size());
  for (Index i = 0; i < head.size(); ++i) head(i) = op.head()(i, i).real() >= 0.5 ? 1.0 : 0.0;
  Diagonal e = Diagonal::make(std::move(head), pattern.cast<Complex>());
  EopOperator k = op - e.to_operator();
  k = EopOperator::make(k.head(), Matrix::Zero(op.period(), op.period()));
  return {std::move(e), std::move(k)};
}

// ---- index -----------------------------------------------------------------------

PairIndexReport pair_index_report(const ModelProjection& p, const ModelProjection& q) {
  const auto [a, b] = align(p.op(), q.op());
  require_comparable(a, b);
  PairIndexReport r;

  // Route 1: eigenvalues +-1 of the compact difference.
  const RealVector eigs = linalg::hermitian_eigenvalues(a.head() - b.head());
  for (Index i = 0; i < eigs.size(); ++i) {
    if (eigs(i) >= 1.0 - tol::kEigenCluster) ++r.plus_one;
    if (eigs(i) <= -1.0 + tol::kEigenCluster) ++r.minus_one;
  }

  // Route 2: principal angles between ranges.
  const auto upper = [](double x) { return x > 0.5; };
  const Matrix range_p = linalg::hermitian_eigenspace(a.head(), upper);
  const Matrix range_q = linalg::hermitian_eigenspace(b.head(), upper);
  r.range_null = count_small_singular(b.head() * range_p);
  r.null_range = count_small_singular(a.head() * range_q);

  if (r.plus_one != r.range_null || r.minus_one != r.null_range)
    throw Error(ErrorCode::OracleMismatch,
                "index routes disagree: eigenvalues (" + std::to_string(r.plus_one) + ", " +
                    std::to_string(r.minus_one) + ") vs angles (" + std::to_string(r.range_null) + ", " +
                    std::to_string(r.null_range) + ")");
  r.index = r.plus_one - r.minus_one;
  return r;
}

Index pair_index(const ModelProjection& p, const ModelProjection& q) { return pair_index_report(p, q).index; }

Diagonal zero_index_diagonal(const ModelProjection& p, const Diagonal* frozen) {
  Diagonal e = projection_diag_decompose(p).diagonal_projection;
  const Index ind = pair_index(p, ModelProjection::from_diagonal(e));
  if (ind == 0) return e;

  // ind > 0: P has ind more range than E, switch ind zeros of E on.
  const double from = ind > 0 ? 0.0 : 1.0;
  const double to = 1.0 - from;
  const Index needed = std::abs(ind);

  Diagonal lock = frozen ? *frozen : Diagonal::constant(0.0);
  auto [m, per] = common_grid(e.head_size(), e.period(), lock.head_size(), lock.period());
  const auto usable = [&](const Diagonal& ee, const Diagonal& ll, Index n) {
    return std::abs(ee.at(n) - from) < 0.5 && std::abs(ll.at(n)) < 0.5;
  };
  Diagonal ee = e.expanded(m, per);
  Diagonal ll = lock.expanded(m, per);
  Index available = 0;
  for (Index n = 0; n < m; ++n) available += usable(ee, ll, n) ? 1 : 0;
  if (available < needed) {
    Index per_block = 0;
    for (Index r = 0; r < per; ++r) per_block += usable(ee, ll, m + r) ? 1 : 0;
    if (per_block == 0)
      throw Error(ErrorCode::InsufficientRoom, "no diagonal positions available to balance the index");
    const Index blocks = (needed - available + per_block - 1) / per_block;
    m += blocks * per;
    ee = e.expanded(m, per);
    ll = lock.expanded(m, per);
  }
  Vector head = ee.head_entries();
  Index flipped = 0;
  for (Index n = 0; n < m && flipped < needed; ++n) {
    if (!usable(ee, ll, n)) continue;
    head(n) = to;
    ++flipped;
  }
  return Diagonal::make(std::move(head), ee.tail_pattern());
}

// ---- conjugation and geodesics -----------------------------------------------------

GeodesicExponent conjugating_exponential(const ModelProjection& target, const ModelProjection& source) {
  const auto [pa, ea] = align(target.op(), source.op());
  require_comparable(pa, ea);
  const Index ind = pair_index(target, source);
  if (ind != 0) throw Error(ErrorCode::IndexNotZero, "index " + std::to_string(ind) + " is not zero");

  const Index m = pa.head_size();
  const Matrix& ph = pa.head();
  const Matrix& eh = ea.head();
  const Matrix k = linalg::hermitian_part(ph - eh);
  const double edge = 1.0 - tol::kEigenCluster;

  Matrix x = Matrix::Zero(m, m);
  if (m > 0) {
    // Part where ||P - E|| < 1: direct rotation, the unitary polar factor of
    // PE + (1-P)(1-E).
    const Matrix b0 = linalg::hermitian_eigenspace(k, [edge](double l) { return std::abs(l) < edge; });
    if (b0.cols() > 0) {
      const Matrix id = Matrix::Identity(m, m);
      const Matrix w = ph * eh + (id - ph) * (id - eh);
      const Matrix rotation = linalg::unitary_polar_factor(b0.adjoint() * w * b0);
      x += b0 * linalg::log_unitary(rotation) * b0.adjoint();
    }
    // Part where P - E = +-1: quarter turns pairing R(E) cap N(P) with R(P) cap N(E).
    const Matrix plus = linalg::hermitian_eigenspace(k, [edge](double l) { return l >= edge; });
    const Matrix minus = linalg::hermitian_eigenspace(k, [edge](double l) { return l <= -edge; });
    if (plus.cols() != minus.cols())
      throw Error(ErrorCode::ModelViolation, "unbalanced +-1 eigenspaces at index zero");
    if (plus.cols() > 0) {
      const Matrix v = plus * minus.adjoint();
      x += Complex(0.0, std::numbers::pi / 2.0) * (v - v.adjoint());
    }
    x = linalg::hermitian_part(x);
  }
  GeodesicExponent g;
  g.x = EopOperator::make(std::move(x), Matrix::Zero(pa.period(), pa.period()));
  g.length = operator_norm(g.x);
  return g;
}

GeodesicExponent minimal_geodesic(const ModelProjection& p, const ModelProjection& q) {
  return conjugating_exponential(q, p);
}

EopOperator geodesic_point(const ModelProjection& p, const GeodesicExponent& g, double t) {
  const EopOperator u = exp_i(scale(t, g.x));
  return mul(mul(u, p.op()), adjoint(u));
}

// ---- components --------------------------------------------------------------------

std::string to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::FiniteRank: return "finite-rank";
    case ComponentKind::CofiniteRank: return "cofinite-rank";
    case ComponentKind::Infinite: return "infinite";
  }
  return "unknown";
}

ComponentClass classify_component(const ModelProjection& p) {
  const RealVector pattern = minimal_pattern(p.tail_pattern());
  const double trace = p.op().head().trace().real();
  ComponentClass c;
  if (pattern.size() == 1 && pattern(0) == 0.0) {
    c.kind = ComponentKind::FiniteRank;
    c.count = round_index(trace);
  } else if (pattern.size() == 1 && pattern(0) == 1.0) {
    c.kind = ComponentKind::CofiniteRank;
    c.count = round_index(static_cast<double>(p.op().head_size()) - trace);
  } else {
    c.kind = ComponentKind::Infinite;
    c.base_index = pair_index(p, ModelProjection::from_diagonal(canonical_pattern_projection(pattern, 0)));
  }
  c.pattern = pattern;
  return c;
}

bool same_component(const ComponentClass& a, const ComponentClass& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != ComponentKind::Infinite) return a.count == b.count;
  return a.pattern.size() == b.pattern.size() && a.pattern == b.pattern && a.base_index == b.base_index;
}

AutomorphismWord rank_nullity_conjugacy(const ModelProjection& p, const ModelProjection& q) {
  const ComponentClass cp = classify_component(p);
  const ComponentClass cq = classify_component(q);
  if (cp.kind != cq.kind)
    throw Error(ErrorCode::NotConjugate, to_string(cp.kind) + " vs " + to_string(cq.kind));
  if (cp.kind != ComponentKind::Infinite && cp.count != cq.count)
    throw Error(ErrorCode::NotConjugate,
                "ranks differ: " + std::to_string(cp.count) + " vs " + std::to_string(cq.count));

  const auto [e0, f0] = align(zero_index_diagonal(p), zero_index_diagonal(q));
  const Index m = e0.head_size();
  const Index per = e0.period();

  const auto ones_and_zeros = [](const Vector& v) {
    std::pair<std::vector<Index>, std::vector<Index>> split;
    for (Index i = 0; i < v.size(); ++i) (std::abs(v(i)) > 0.5 ? split.first : split.second).push_back(i);
    return split;
  };
  const auto [e_tail_ones, e_tail_zeros] = ones_and_zeros(e0.tail_pattern());
  const auto [f_tail_ones, f_tail_zeros] = ones_and_zeros(f0.tail_pattern());
  const auto [e_head_ones, e_head_zeros] = ones_and_zeros(e0.head_entries());
  const auto [f_head_ones, f_head_zeros] = ones_and_zeros(f0.head_entries());
  if (e_tail_ones.size() != f_tail_ones.size() || e_head_ones.size() != f_head_ones.size())
    throw Error(ErrorCode::ModelLimitation,
                "no block-preserving permutation carries one diagonal projection to the other");

  std::vector<Index> head(static_cast<std::size_t>(m)), tail(static_cast<std::size_t>(per));
  for (std::size_t i = 0; i < e_head_ones.size(); ++i) head[static_cast<std::size_t>(e_head_ones[i])] = f_head_ones[i];
  for (std::size_t i = 0; i < e_head_zeros.size(); ++i)
    head[static_cast<std::size_t>(e_head_zeros[i])] = f_head_zeros[i];
  for (std::size_t i = 0; i < e_tail_ones.size(); ++i) tail[static_cast<std::size_t>(e_tail_ones[i])] = f_tail_ones[i];
  for (std::size_t i = 0; i < e_tail_zeros.size(); ++i)
    tail[static_cast<std::size_t>(e_tail_zeros[i])] = f_tail_zeros[i];
  const PermutationSpec sigma = PermutationSpec::make(std::move(head), std::move(tail));

  const GeodesicExponent to_p = conjugating_exponential(p, ModelProjection::from_diagonal(e0));
  const GeodesicExponent to_q = conjugating_exponential(q, ModelProjection::from_diagonal(f0));
  AutomorphismWord word = normal_form({ExponentialGenerator{to_q.x}, PermutationGenerator{sigma},
                                       ExponentialGenerator{scale(-1.0, to_p.x)}});
  const double residual = operator_norm(apply_automorphism(word, p.op()) - q.op());
  if (residual > 1e-8) throw NoConvergenceError(1, residual, "conjugating word misses the target projection");
  return word;
}

}  // namespace dpk
