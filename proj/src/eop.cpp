#include "dpk/eop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dpk {

namespace {

void require_grid(Index m, Index p) {
  if (p <= 0) throw Error(ErrorCode::Alignment, "period must be positive, got " + std::to_string(p));
  if (m < 0 || m % p != 0)
    throw Error(ErrorCode::Alignment,
                "period " + std::to_string(p) + " does not divide head size " + std::to_string(m));
}

Matrix repeat_block(const Matrix& block, Index copies) {
  return linalg::block_diagonal(std::vector<Matrix>(static_cast<std::size_t>(copies), block));
}

Vector repeat_pattern(const Vector& pattern, Index copies) {
  Vector out(pattern.size() * copies);
  for (Index k = 0; k < copies; ++k) out.segment(k * pattern.size(), pattern.size()) = pattern;
  return out;
}

double max_abs(const Matrix& m) {
  double out = 0.0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out = std::max(out, std::abs(m(i, j)));
  return out;
}

}  // namespace

// ---- EopOperator -------------------------------------------------------------

EopOperator::EopOperator() : head_(0, 0), tail_(Matrix::Zero(1, 1)) {}

EopOperator EopOperator::make(Matrix head, Matrix tail_block) {
  if (head.rows() != head.cols() || tail_block.rows() != tail_block.cols())
    throw Error(ErrorCode::Alignment, "head and tail block must be square");
  require_grid(head.rows(), tail_block.rows());
  if (!linalg::all_finite(head) || !linalg::all_finite(tail_block))
    throw Error(ErrorCode::NonFiniteEntry, "operator has NaN or infinite entries");
  return EopOperator(std::move(head), std::move(tail_block));
}

EopOperator EopOperator::identity(Index period) {
  return make(Matrix(0, 0), Matrix::Identity(period, period));
}

EopOperator EopOperator::zero(Index head_size, Index period) {
  return make(Matrix::Zero(head_size, head_size), Matrix::Zero(period, period));
}

EopOperator EopOperator::scalar(Complex value, Index period) {
  return make(Matrix(0, 0), Matrix::Identity(period, period) * value);
}

EopOperator EopOperator::expanded(Index head_size, Index period) const {
  require_grid(head_size, period);
  if (head_size < this->head_size() || period % this->period() != 0)
    throw Error(ErrorCode::Alignment, "expansion must refine the grid");
  const Index p = this->period();
  const Index extra_blocks = (head_size - this->head_size()) / p;
  std::vector<Matrix> blocks{head_};
  for (Index k = 0; k < extra_blocks; ++k) blocks.push_back(tail_);
  return EopOperator(linalg::block_diagonal(blocks), repeat_block(tail_, period / p));
}

Matrix EopOperator::dense(Index n) const {
  Matrix out = Matrix::Zero(n, n);
  const Index m = head_size();
  const Index p = period();
  const Index hm = std::min(n, m);
  out.topLeftCorner(hm, hm) = head_.topLeftCorner(hm, hm);
  for (Index start = m; start < n; start += p) {
    const Index len = std::min(p, n - start);
    out.block(start, start, len, len) = tail_.topLeftCorner(len, len);
  }
  return out;
}

Complex EopOperator::entry(Index i, Index j) const {
  const Index m = head_size();
  if (i < m && j < m) return head_(i, j);
  if (i < m || j < m) return Complex(0.0, 0.0);
  const Index p = period();
  if ((i - m) / p != (j - m) / p) return Complex(0.0, 0.0);
  return tail_((i - m) % p, (j - m) % p);
}

bool EopOperator::has_zero_tail() const { return tail_.isZero(0.0); }

// ---- Diagonal ----------------------------------------------------------------

Diagonal::Diagonal() : head_(0), tail_(Vector::Zero(1)) {}

Diagonal Diagonal::make(Vector head_entries, Vector tail_pattern) {
  require_grid(head_entries.size(), tail_pattern.size());
  if (!linalg::all_finite(head_entries) || !linalg::all_finite(tail_pattern))
    throw Error(ErrorCode::NonFiniteEntry, "diagonal has NaN or infinite entries");
  return Diagonal(std::move(head_entries), std::move(tail_pattern));
}

Diagonal Diagonal::constant(Complex value, Index period) {
  return make(Vector(0), Vector::Constant(period, value));
}

Complex Diagonal::at(Index n) const {
  if (n < head_size()) return head_(n);
  return tail_((n - head_size()) % period());
}

Diagonal Diagonal::expanded(Index head_size, Index period) const {
  require_grid(head_size, period);
  if (head_size < this->head_size() || period % this->period() != 0)
    throw Error(ErrorCode::Alignment, "expansion must refine the grid");
  Vector head(head_size);
  for (Index n = 0; n < head_size; ++n) head(n) = at(n);
  return Diagonal(std::move(head), repeat_pattern(tail_, period / this->period()));
}

EopOperator Diagonal::to_operator() const {
  return EopOperator::make(head_.asDiagonal().toDenseMatrix(), tail_.asDiagonal().toDenseMatrix());
}

double Diagonal::norm() const {
  double out = 0.0;
  for (Index i = 0; i < head_.size(); ++i) out = std::max(out, std::abs(head_(i)));
  for (Index i = 0; i < tail_.size(); ++i) out = std::max(out, std::abs(tail_(i)));
  return out;
}

EopOperator DpkElement::reconstruct() const { return add(diagonal_part.to_operator(), compact_part); }

// ---- alignment and algebra -----------------------------------------------------

Index lcm_index(Index a, Index b) { return std::lcm(a, b); }

std::pair<Index, Index> common_grid(Index m_a, Index p_a, Index m_b, Index p_b) {
  const Index p = lcm_index(p_a, p_b);
  const Index need = std::max(m_a, m_b);
  const Index m = ((need + p - 1) / p) * p;
  return {m, p};
}

std::pair<EopOperator, EopOperator> align(const EopOperator& a, const EopOperator& b) {
  if (a.head_size() == b.head_size() && a.period() == b.period()) return {a, b};
  const auto [m, p] = common_grid(a.head_size(), a.period(), b.head_size(), b.period());
  return {a.expanded(m, p), b.expanded(m, p)};
}

std::pair<Diagonal, Diagonal> align(const Diagonal& a, const Diagonal& b) {
  if (a.head_size() == b.head_size() && a.period() == b.period()) return {a, b};
  const auto [m, p] = common_grid(a.head_size(), a.period(), b.head_size(), b.period());
  return {a.expanded(m, p), b.expanded(m, p)};
}

EopOperator add(const EopOperator& a, const EopOperator& b) {
  const auto [x, y] = align(a, b);
  return EopOperator::make(x.head() + y.head(), x.tail_block() + y.tail_block());
}

EopOperator subtract(const EopOperator& a, const EopOperator& b) {
  const auto [x, y] = align(a, b);
  return EopOperator::make(x.head() - y.head(), x.tail_block() - y.tail_block());
}

EopOperator mul(const EopOperator& a, const EopOperator& b) {
  const auto [x, y] = align(a, b);
  return EopOperator::make(x.head() * y.head(), x.tail_block() * y.tail_block());
}

EopOperator adjoint(const EopOperator& a) {
  return EopOperator::make(a.head().adjoint(), a.tail_block().adjoint());
}

EopOperator scale(Complex lambda, const EopOperator& a) {
  return EopOperator::make(a.head() * lambda, a.tail_block() * lambda);
}

EopOperator commutator(const EopOperator& s, const EopOperator& t) {
  return subtract(mul(s, t), mul(t, s));
}

Diagonal mul(const Diagonal& a, const Diagonal& b) {
  const auto [x, y] = align(a, b);
  return Diagonal::make(x.head_entries().cwiseProduct(y.head_entries()),
                        x.tail_pattern().cwiseProduct(y.tail_pattern()));
}

Diagonal conj(const Diagonal& a) {
  return Diagonal::make(a.head_entries().conjugate(), a.tail_pattern().conjugate());
}

bool approx_equal(const EopOperator& a, const EopOperator& b, double tolerance) {
  const auto [x, y] = align(a, b);
  return max_abs(x.head() - y.head()) <= tolerance && max_abs(x.tail_block() - y.tail_block()) <= tolerance;
}

bool approx_equal(const Diagonal& a, const Diagonal& b, double tolerance) {
  const auto [x, y] = align(a, b);
  return max_abs(x.head_entries() - y.head_entries()) <= tolerance &&
         max_abs(x.tail_pattern() - y.tail_pattern()) <= tolerance;
}

EopOperator normalize(const EopOperator& t, double tolerance) {
  const Index p = t.period();
  const Matrix& tail = t.tail_block();
  Index q = p;
  for (Index d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    const Matrix block = tail.topLeftCorner(d, d);
    if (max_abs(tail - repeat_block(block, p / d)) <= tolerance) {
      q = d;
      break;
    }
  }
  const Matrix block = tail.topLeftCorner(q, q);
  const Matrix& head = t.head();
  Index m = t.head_size();
  while (m >= q) {
    const Index s = m - q;
    if (max_abs(head.block(s, s, q, q) - block) > tolerance) break;
    if (s > 0 && (max_abs(head.block(s, 0, q, s)) > tolerance || max_abs(head.block(0, s, s, q)) > tolerance))
      break;
    m = s;
  }
  return EopOperator::make(head.topLeftCorner(m, m), block);
}

Diagonal normalize(const Diagonal& d, double tolerance) {
  const Index p = d.period();
  const Vector& tail = d.tail_pattern();
  Index q = p;
  for (Index c = 1; c < p; ++c) {
    if (p % c != 0) continue;
    if (max_abs(tail - repeat_pattern(tail.head(c), p / c)) <= tolerance) {
      q = c;
      break;
    }
  }
  const Vector pattern = tail.head(q);
  Index m = d.head_size();
  while (m >= q && max_abs(d.head_entries().segment(m - q, q) - pattern) <= tolerance) m -= q;
  return Diagonal::make(d.head_entries().head(m), pattern);
}

// ---- structure -------------------------------------------------------------

Diagonal delta(const EopOperator& t) {
  return Diagonal::make(t.head().diagonal(), t.tail_block().diagonal());
}

bool is_dpk_member(const EopOperator& s) {
  const double scale = std::max(1.0, max_abs(s.tail_block()));
  return linalg::is_diagonal(s.tail_block(), tol::kRepresentation * scale);
}

bool is_dpk_member_by_probes(const EopOperator& s) {
  const Index p = s.period();
  const double scale = std::max(1.0, max_abs(s.tail_block()));
  for (Index r = 0; r < p; ++r) {
    Vector pattern = Vector::Zero(p);
    pattern(r) = 1.0;
    const EopOperator probe = Diagonal::make(Vector(0), pattern).to_operator();
    const EopOperator c = commutator(s, probe);
    if (max_abs(c.tail_block()) > tol::kRepresentation * scale) return false;
  }
  return true;
}

DpkElement canonical_decompose(const EopOperator& t) {
  if (!is_dpk_member(t)) throw Error(ErrorCode::NotInDpk, "tail block of T - Delta(T) is nonzero");
  Matrix k_head = t.head();
  k_head.diagonal().setZero();
  return DpkElement{delta(t), EopOperator::make(std::move(k_head), Matrix::Zero(t.period(), t.period()))};
}

double operator_norm(const EopOperator& t) {
  return std::max(linalg::spectral_norm(t.head()), linalg::spectral_norm(t.tail_block()));
}

namespace {

std::vector<Complex> dedupe(std::vector<Complex> values, double tolerance) {
  std::vector<Complex> out;
  for (const Complex& v : values) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](Complex w) { return std::abs(v - w) <= tolerance; });
    if (!seen) out.push_back(v);
  }
  std::stable_sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

}  // namespace

Spectrum spectrum(const EopOperator& t) {
  std::vector<Complex> ess = linalg::eigenvalues(t.tail_block());
  std::vector<Complex> pts = linalg::eigenvalues(t.head());
  pts.insert(pts.end(), ess.begin(), ess.end());
  return Spectrum{dedupe(std::move(pts), 1e-9), dedupe(std::move(ess), 1e-9)};
}

bool is_self_adjoint(const EopOperator& t, double tolerance) {
  return max_abs(t.head() - t.head().adjoint()) <= tolerance &&
         max_abs(t.tail_block() - t.tail_block().adjoint()) <= tolerance;
}

double unitarity_defect(const EopOperator& u) {
  auto defect = [](const Matrix& m) {
    if (m.size() == 0) return 0.0;
    const Matrix id = Matrix::Identity(m.rows(), m.cols());
    return std::max(linalg::spectral_norm(m.adjoint() * m - id), linalg::spectral_norm(m * m.adjoint() - id));
  };
  return std::max(defect(u.head()), defect(u.tail_block()));
}

EopOperator finite_spectrum_approx(const EopOperator& t, double epsilon) {
  if (!is_dpk_member(t)) throw Error(ErrorCode::NotInDpk, "finite spectrum approximation needs a D+K member");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::Config, "epsilon must be positive");
  const Index p = t.period();
  Matrix tail = Matrix::Zero(p, p);
  for (Index r = 0; r < p; ++r) {
    const Complex d = t.tail_block()(r, r);
    tail(r, r) = Complex(epsilon * std::round(d.real() / epsilon), epsilon * std::round(d.imag() / epsilon));
  }
  return EopOperator::make(t.head(), std::move(tail));
}

std::size_t distinct_spectral_values(const EopOperator& t, double tolerance) {
  std::vector<Complex> values = linalg::eigenvalues(t.head());
  for (Index r = 0; r < t.period(); ++r) values.push_back(t.tail_block()(r, r));
  return dedupe(std::move(values), tolerance).size();
}

Diagonal canonical_pattern_projection(const RealVector& pattern, Index head_size) {
  const Index p = pattern.size();
  require_grid(head_size, p);
  Vector tail = pattern.cast<Complex>();
  return Diagonal::make(repeat_pattern(tail, head_size / p), tail);
}

}  // namespace dpk
