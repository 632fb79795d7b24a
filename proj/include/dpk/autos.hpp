#pragma once

// Automorphisms generated by diagonal unitaries, exponentials of compact
// self-adjoint operators and basis permutations, and their normal form
// theta_w theta_X theta_sigma = Ad(D_w e^{iX} U_sigma).

#include <optional>
#include <variant>
#include <vector>

#include "dpk/eop.hpp"

namespace dpk {

/// Model permutation of N: an arbitrary permutation of the head indices plus a
/// residue permutation applied inside every tail block. The permutation has
/// infinite support iff the residue permutation is not the identity.
class PermutationSpec {
 public:
  PermutationSpec();
  static PermutationSpec make(std::vector<Index> head_perm, std::vector<Index> tail_residue_perm);
  static PermutationSpec identity(Index head_size = 0, Index period = 1);

  Index head_size() const noexcept { return static_cast<Index>(head_.size()); }
  Index period() const noexcept { return static_cast<Index>(tail_.size()); }
  const std::vector<Index>& head_perm() const noexcept { return head_; }
  const std::vector<Index>& tail_residue_perm() const noexcept { return tail_; }

  /// sigma(n) for an absolute index n.
  Index operator()(Index n) const;

  PermutationSpec expanded(Index head_size, Index period) const;
  PermutationSpec inverse() const;
  bool has_infinite_support() const;
  bool is_identity() const;

 private:
  PermutationSpec(std::vector<Index> head, std::vector<Index> tail) : head_(std::move(head)), tail_(std::move(tail)) {}

  std::vector<Index> head_;
  std::vector<Index> tail_;
};

/// a o b, so that U_{a o b} = U_a U_b.
PermutationSpec compose(const PermutationSpec& a, const PermutationSpec& b);

/// U_sigma e_n = e_{sigma(n)}.
EopOperator permutation_unitary(const PermutationSpec& sigma);

/// The diagonal x with U_sigma D_w U_sigma^* = D_x, i.e. x_{sigma(n)} = w_n.
Diagonal permute_diagonal(const PermutationSpec& sigma, const Diagonal& w);

struct AutomorphismWord {
  Diagonal w;         // unit-modulus entries
  EopOperator x;      // self-adjoint, zero tail
  PermutationSpec sigma;

  static AutomorphismWord identity();
  /// D_w e^{iX} U_sigma.
  EopOperator implementing_unitary() const;
};

EopOperator apply_automorphism(const AutomorphismWord& word, const EopOperator& t);

struct DiagonalGenerator {
  Diagonal w;
};
struct ExponentialGenerator {
  EopOperator x;
};
struct PermutationGenerator {
  PermutationSpec sigma;
};
using Generator = std::variant<DiagonalGenerator, ExponentialGenerator, PermutationGenerator>;

EopOperator generator_unitary(const Generator& g);

/// Folds theta_{g_1} theta_{g_2} ... theta_{g_k} into a single word using
/// U_sigma D_w = D_{sigma(w)} U_sigma and U_sigma e^{iX} = e^{i U_sigma X U_sigma^*} U_sigma.
AutomorphismWord normal_form(const std::vector<Generator>& generators);

/// Matrix units of the head plus residue diagonal projections.
std::vector<EopOperator> probe_basis(Index head_size, Index period);

/// Largest ||Ad(V1)(P) - Ad(V2)(P)|| over the probe basis of the common grid.
double action_distance(const EopOperator& v1, const EopOperator& v2);

struct DpkAutomorphismWitness {
  Vector tail_phases;                 // w with tail = D_w P_tau
  std::vector<Index> tail_permutation;  // tau
  AutomorphismWord word;              // U = D_w e^{iX} U_sigma
};

/// Ad(U) preserves model D+K iff the tail block of U is a diagonal unitary
/// times a permutation matrix. Returns the witness in that case.
std::optional<DpkAutomorphismWitness> is_dpk_automorphism(const EopOperator& u);

/// Same decision through probes: Ad(U)(P_r) must be in D+K for every residue
/// diagonal projection P_r.
bool is_dpk_automorphism_by_probes(const EopOperator& u);

struct StampfliResult {
  double derivation_norm = 0.0;  // 2 inf_lambda ||A - lambda I||
  Complex center;                // minimizing lambda
  double radius = 0.0;           // inf_lambda ||A - lambda I||
};

/// Nested golden-section search over Re(lambda), Im(lambda) in the box
/// |Re|, |Im| <= ||A||, followed by a compass search polish.
StampfliResult stampfli(const EopOperator& a, double tolerance = 1e-8);
double stampfli_derivation_norm(const EopOperator& a, double tolerance = 1e-8);

/// Word (w = 1, X, sigma) with e^{iX} U_sigma D0 U_sigma^* e^{-iX} = U D0 U^*,
/// built by matching the spectral projections of D0 one at a time.
AutomorphismWord match_finite_spectrum_conjugation(const EopOperator& u, const Diagonal& d0);

}  // namespace dpk
