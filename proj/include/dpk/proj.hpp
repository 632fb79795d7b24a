#pragma once

// Projections in D+K: diagonal decomposition, the index of a pair of
// projections with compact difference, conjugation by exponentials and the
// component classification of the projection space.

#include <optional>
#include <string>

#include "dpk/autos.hpp"
#include "dpk/eop.hpp"

namespace dpk {

/// Self-adjoint idempotent in the model. D+K members get an exact 0/1 tail.
class ModelProjection {
 public:
  /// Validates P = P* and P^2 = P within tol::kProjection.
  static ModelProjection make(const EopOperator& p);
  static ModelProjection from_diagonal(const Diagonal& e);

  const EopOperator& op() const noexcept { return op_; }
  bool in_dpk() const;
  /// 0/1 tail pattern of a D+K projection.
  RealVector tail_pattern() const;

 private:
  explicit ModelProjection(EopOperator op) : op_(std::move(op)) {}
  EopOperator op_;
};

/// P = E + K with E a diagonal projection: head diagonal entries are rounded
/// (>= 1/2 goes to 1), the tail pattern is copied.
struct ProjectionDecomposition {
  Diagonal diagonal_projection;
  EopOperator compact_part;
};
ProjectionDecomposition projection_diag_decompose(const ModelProjection& p);

struct PairIndexReport {
  Index index = 0;
  Index plus_one = 0;          // dim ker(P - Q - 1) = dim R(P) cap N(Q)
  Index minus_one = 0;         // dim ker(P - Q + 1) = dim N(P) cap R(Q)
  Index range_null = 0;        // same two counts from principal angles
  Index null_range = 0;
};

/// ind(P, Q) = dim(R(P) cap N(Q)) - dim(N(P) cap R(Q)) for P - Q compact.
/// Two independent routes are computed and must agree (else OracleMismatch).
PairIndexReport pair_index_report(const ModelProjection& p, const ModelProjection& q);
Index pair_index(const ModelProjection& p, const ModelProjection& q);

/// Diagonal projection E with P - E compact and ind(P, E) = 0. Head positions
/// where `frozen` is 1 are never flipped.
Diagonal zero_index_diagonal(const ModelProjection& p, const Diagonal* frozen = nullptr);

struct GeodesicExponent {
  EopOperator x;        // self-adjoint, zero tail
  double length = 0.0;  // ||X||
};

/// X with e^{iX} source e^{-iX} = target. Requires target - source compact
/// with index 0. X is the direct rotation on the part where ||target - source||
/// is below 1 and a pi/2 rotation pairing N(K+1) with N(K-1) elsewhere.
GeodesicExponent conjugating_exponential(const ModelProjection& target, const ModelProjection& source);

/// Geodesic from P to Q: t -> e^{itX} P e^{-itX}.
GeodesicExponent minimal_geodesic(const ModelProjection& p, const ModelProjection& q);
EopOperator geodesic_point(const ModelProjection& p, const GeodesicExponent& g, double t);

enum class ComponentKind { FiniteRank, CofiniteRank, Infinite };
std::string to_string(ComponentKind kind);

struct ComponentClass {
  ComponentKind kind = ComponentKind::FiniteRank;
  Index count = 0;         // rank or corank for the finite kinds
  RealVector pattern;      // minimal tail pattern for Infinite
  Index base_index = 0;    // ind(P, E_pattern) for Infinite
};

ComponentClass classify_component(const ModelProjection& p);
bool same_component(const ComponentClass& a, const ComponentClass& b);

/// Word theta with theta(P) = Q when P and Q have matching rank data.
/// Throws NotConjugate for mismatched rank or corank, ModelLimitation when no
/// model permutation realizes the infinite-rank conjugation.
AutomorphismWord rank_nullity_conjugacy(const ModelProjection& p, const ModelProjection& q);

}  // namespace dpk
