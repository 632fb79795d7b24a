#pragma once

// Random model instances. Every generator satisfies its type invariants by
// construction: unitaries are built from exponentials and permutations,
// projections by conjugating diagonal projections, positives as S*S + eps I.

#include "dpk/autos.hpp"
#include "dpk/eop.hpp"
#include "dpk/proj.hpp"
#include "dpk/quotient.hpp"
#include "dpk/random.hpp"

namespace dpk::gen {

/// Entries (N(0,1) + i N(0,1)) / sqrt(2 n).
Matrix random_matrix(Rng& rng, Index rows, Index cols);
Matrix random_hermitian(Rng& rng, Index n);
/// Matrix of rank at most `rank`.
Matrix random_low_rank(Rng& rng, Index n, Index rank);

EopOperator random_dpk(Rng& rng, Index head_size, Index period);
EopOperator random_self_adjoint_dpk(Rng& rng, Index head_size, Index period);
/// Tail block dense with probability 1/2, diagonal otherwise.
EopOperator random_operator(Rng& rng, Index head_size, Index period);
/// D+K operator whose head may be rank deficient and whose tail diagonal may
/// contain exact zeros.
EopOperator random_singular_dpk(Rng& rng, Index head_size, Index period);

/// Self-adjoint with zero tail and operator norm `norm`.
EopOperator random_compact_hermitian(Rng& rng, Index head_size, Index period, double norm);
Diagonal random_phase_diagonal(Rng& rng, Index head_size, Index period);
/// D e^{iX} with ||X|| uniform in [0, 3].
EopOperator random_unitary(Rng& rng, Index head_size, Index period);
/// e^{iZ} with Z self-adjoint in D+K and ||Z|| <= 2.9, so ||U - I|| < 2.
EopOperator random_ball_unitary(Rng& rng, Index head_size, Index period);

RealVector random_pattern(Rng& rng, Index period);
Diagonal random_diagonal_projection(Rng& rng, Index head_size, const RealVector& pattern);
/// e^{iX} E e^{-iX} with ||X|| uniform in [0, max_angle].
ModelProjection random_projection(Rng& rng, Index head_size, Index period, double max_angle = 2.0);

EopOperator random_positive(Rng& rng, Index head_size, Index period, double epsilon = 0.1);
PositiveFunctional random_functional(Rng& rng, Index size, Index period);
PermutationSpec random_permutation(Rng& rng, Index head_size, Index period, bool tail_nontrivial);

}  // namespace dpk::gen
