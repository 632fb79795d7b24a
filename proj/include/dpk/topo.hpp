#pragma once

// Computable invariants for the unitary group of D+K: the local section of
// U_D x U_inf -> U_{D+K}, winding numbers of sampled loops and the K0 class of
// a projection.

#include <functional>
#include <vector>

#include "dpk/eop.hpp"
#include "dpk/proj.hpp"

namespace dpk {

/// U = D V with D a diagonal unitary and V - I compact (tail exactly I).
struct BundleSection {
  Diagonal diagonal;
  EopOperator fiber;

  EopOperator reconstruct() const;
};

/// D = e^{i Delta(Z)}, V = e^{-i Delta(Z)} e^{iZ} with Z = log U.
/// Requires ||U - I|| < 2 - 1e-9 (else NotInBall).
BundleSection bundle_section(const EopOperator& u);

/// Closed loop U_0, ..., U_{N-1} (U_N = U_0). Samples are unitary within 1e-9
/// and consecutive gaps, including the closing one, are below 0.5.
class UnitaryLoop {
 public:
  static UnitaryLoop make(std::vector<EopOperator> samples);
  /// Samples f(k / n) for k = 0..n-1.
  static UnitaryLoop sample(const std::function<EopOperator(double)>& f, int n);

  const std::vector<EopOperator>& samples() const noexcept { return samples_; }
  double max_step() const noexcept { return max_step_; }

 private:
  UnitaryLoop(std::vector<EopOperator> samples, double max_step)
      : samples_(std::move(samples)), max_step_(max_step) {}

  std::vector<EopOperator> samples_;
  double max_step_ = 0.0;
};

/// Loop traversing `a` then `b`; both must start at the same point.
UnitaryLoop concatenate(const UnitaryLoop& a, const UnitaryLoop& b);

enum class LoopKind { Diagonal, Compact };

struct Winding {
  LoopKind kind = LoopKind::Diagonal;
  std::vector<long long> head;  // per head entry (diagonal kind)
  std::vector<long long> tail;  // per tail residue (diagonal kind)
  long long compact = 0;        // winding of det(head) (compact kind)
};

/// Accumulated principal-phase increments: of every diagonal entry for the
/// diagonal kind, of the eigenphases of U_k^* U_{k+1} for the compact kind.
Winding loop_winding(const UnitaryLoop& loop, LoopKind kind);

/// t -> D_{exp(2 pi i t k)} with k supported on the first k.size() indices.
UnitaryLoop diagonal_generator_loop(const std::vector<long long>& k, int samples);

struct IotaLoops {
  UnitaryLoop diagonal;  // t -> D_{exp(2 pi i t k)}
  UnitaryLoop compact;   // t -> D_{exp(-2 pi i t k)}, tail I
};
IotaLoops iota_loops(const std::vector<long long>& k, int samples);

struct Pi1Pair {
  std::vector<long long> diagonal;
  long long compact = 0;
};
/// Windings of the two coordinates of iota applied to the generator loop of k.
Pi1Pair pi1_iota(const std::vector<long long>& k, int samples = 64);

struct K0Class {
  RealVector tail_pattern;  // minimal 0/1 pattern
  Index z_part = 0;         // ind(P, E_can(pattern))
};

K0Class k0_class(const ModelProjection& p);
/// Class of P + Q for PQ = 0; patterns must stay 0/1 (else NotOrthogonalPatterns).
K0Class k0_sum(const K0Class& a, const K0Class& b);
bool operator==(const K0Class& a, const K0Class& b);

}  // namespace dpk
