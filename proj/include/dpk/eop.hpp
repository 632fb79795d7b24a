#pragma once

// Eventually block-periodic operators on l2(N).
//
// An operator is stored as a finite m x m `head` followed by a p x p
// `tail_block` that repeats forever along the diagonal:
//
//     T = head (+) tail (+) tail (+) ...
//
// The grid invariant p | m keeps every pair of operators alignable: expanding
// a representation by whole tail blocks does not change the operator, and the
// residue of an absolute index n inside the tail is simply n mod p.
//
// Diagonal operators have diagonal head and tail; compact operators have a
// zero tail. D+K membership is exactly "the tail block is diagonal".

#include <utility>
#include <vector>

#include "dpk/error.hpp"
#include "dpk/linalg.hpp"

namespace dpk {

class Diagonal;

class EopOperator {
 public:
  /// The zero operator with period 1 and empty head.
  EopOperator();

  /// Validates p | m, square shapes and finite entries.
  static EopOperator make(Matrix head, Matrix tail_block);

  static EopOperator identity(Index period = 1);
  static EopOperator zero(Index head_size = 0, Index period = 1);
  static EopOperator scalar(Complex value, Index period = 1);

  Index head_size() const noexcept { return head_.rows(); }
  Index period() const noexcept { return tail_.rows(); }
  const Matrix& head() const noexcept { return head_; }
  const Matrix& tail_block() const noexcept { return tail_; }

  /// Same operator on a finer grid. `head_size` must be >= the current head
  /// size, `period` a multiple of the current period and `period | head_size`.
  EopOperator expanded(Index head_size, Index period) const;

  /// Top-left n x n corner of the infinite matrix.
  Matrix dense(Index n) const;

  /// Matrix entry at absolute position (i, j).
  Complex entry(Index i, Index j) const;

  bool has_zero_tail() const;

 private:
  EopOperator(Matrix head, Matrix tail) : head_(std::move(head)), tail_(std::move(tail)) {}

  Matrix head_;
  Matrix tail_;
};

/// Eventually periodic diagonal: head entries then a repeating tail pattern.
class Diagonal {
 public:
  Diagonal();
  static Diagonal make(Vector head_entries, Vector tail_pattern);
  static Diagonal constant(Complex value, Index period = 1);

  Index head_size() const noexcept { return head_.size(); }
  Index period() const noexcept { return tail_.size(); }
  const Vector& head_entries() const noexcept { return head_; }
  const Vector& tail_pattern() const noexcept { return tail_; }

  /// Entry at absolute index n.
  Complex at(Index n) const;

  Diagonal expanded(Index head_size, Index period) const;
  EopOperator to_operator() const;

  /// Largest modulus over all entries.
  double norm() const;

 private:
  Diagonal(Vector head, Vector tail) : head_(std::move(head)), tail_(std::move(tail)) {}

  Vector head_;
  Vector tail_;
};

/// T = diagonal_part + compact_part with a zero-diagonal, zero-tail compact part.
struct DpkElement {
  Diagonal diagonal_part;
  EopOperator compact_part;

  EopOperator reconstruct() const;
};

struct Spectrum {
  std::vector<Complex> point;      // eig(head) together with eig(tail_block)
  std::vector<Complex> essential;  // eig(tail_block)
};

// ---- alignment and algebra -------------------------------------------------

Index lcm_index(Index a, Index b);

/// Smallest common grid: period lcm(p_a, p_b), head the least multiple of
/// that period which covers both heads.
std::pair<Index, Index> common_grid(Index m_a, Index p_a, Index m_b, Index p_b);

std::pair<EopOperator, EopOperator> align(const EopOperator& a, const EopOperator& b);
std::pair<Diagonal, Diagonal> align(const Diagonal& a, const Diagonal& b);

EopOperator add(const EopOperator& a, const EopOperator& b);
EopOperator subtract(const EopOperator& a, const EopOperator& b);
EopOperator mul(const EopOperator& a, const EopOperator& b);
EopOperator adjoint(const EopOperator& a);
EopOperator scale(Complex lambda, const EopOperator& a);

inline EopOperator operator+(const EopOperator& a, const EopOperator& b) { return add(a, b); }
inline EopOperator operator-(const EopOperator& a, const EopOperator& b) { return subtract(a, b); }
inline EopOperator operator*(const EopOperator& a, const EopOperator& b) { return mul(a, b); }
inline EopOperator operator*(Complex lambda, const EopOperator& a) { return scale(lambda, a); }

/// Commutator ST - TS.
EopOperator commutator(const EopOperator& s, const EopOperator& t);

Diagonal mul(const Diagonal& a, const Diagonal& b);
Diagonal conj(const Diagonal& a);

/// Entrywise equality of the aligned representations.
bool approx_equal(const EopOperator& a, const EopOperator& b, double tolerance = tol::kRepresentation);
bool approx_equal(const Diagonal& a, const Diagonal& b, double tolerance = tol::kRepresentation);

/// Shrinks period and head while the representation stays the same operator.
EopOperator normalize(const EopOperator& t, double tolerance = tol::kRepresentation);
Diagonal normalize(const Diagonal& d, double tolerance = tol::kRepresentation);

// ---- structure -------------------------------------------------------------

/// Conditional expectation onto the diagonal: zeroes every off-diagonal entry.
Diagonal delta(const EopOperator& t);

/// True iff the tail block is diagonal (tolerance scaled by the tail size).
bool is_dpk_member(const EopOperator& s);

/// Membership decided through commutators: [S, P] has zero tail for every
/// diagonal projection P whose tail pattern is a single residue indicator.
bool is_dpk_member_by_probes(const EopOperator& s);

DpkElement canonical_decompose(const EopOperator& t);

double operator_norm(const EopOperator& t);
Spectrum spectrum(const EopOperator& t);

bool is_self_adjoint(const EopOperator& t, double tolerance = tol::kRepresentation);

/// ||U*U - I|| and ||UU* - I||, the larger of the two.
double unitarity_defect(const EopOperator& u);

/// Approximant within `epsilon` whose tail pattern lies on the lattice
/// epsilon * (Z + iZ); the head corner is kept. Self-adjointness is preserved.
EopOperator finite_spectrum_approx(const EopOperator& t, double epsilon);

/// Number of distinct values (clustered at `tolerance`) among the head
/// eigenvalues and tail-pattern entries of a D+K member.
std::size_t distinct_spectral_values(const EopOperator& t, double tolerance = 1e-9);

/// Diagonal projection with the given 0/1 tail pattern and head equal to the
/// pattern repeated, i.e. the periodic projection from index 0.
Diagonal canonical_pattern_projection(const RealVector& pattern, Index head_size);

}  // namespace dpk
