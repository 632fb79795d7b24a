#pragma once

// The quotient (D+K)/K in model form. A class is the tail diagonal pattern;
// characters evaluate it at one residue.

#include <map>
#include <optional>
#include <vector>

#include "dpk/eop.hpp"

namespace dpk {

class QuotientClass {
 public:
  explicit QuotientClass(Vector values);

  Index period() const noexcept { return values_.size(); }
  const Vector& values() const noexcept { return values_; }
  /// Value at an absolute index n (eventual diagonal entry of residue n mod p).
  Complex at(Index n) const { return values_(n % period()); }

  double norm() const;
  QuotientClass expanded(Index period) const;
  bool is_zero(double tolerance = tol::kRepresentation) const;

 private:
  Vector values_;
};

bool approx_equal(const QuotientClass& a, const QuotientClass& b, double tolerance = tol::kRepresentation);
QuotientClass operator*(const QuotientClass& a, const QuotientClass& b);
QuotientClass operator+(const QuotientClass& a, const QuotientClass& b);
QuotientClass conj(const QuotientClass& a);

QuotientClass quotient_class(const EopOperator& t);

/// inf over compact K of ||T + K||, attained in the model by zeroing the head.
double essential_norm(const EopOperator& t);

/// Psi_r(T): eventual diagonal value of T on the residue class r mod p_T.
Complex character_eval(const EopOperator& t, Index residue);

/// Character indexed by a residue of an arbitrary modulus. It evaluates
/// the eventual diagonal along n = residue + k * lcm(modulus, p_T), which is
/// tail entry residue mod p_T.
struct ResidueCharacter {
  Index residue = 0;
  Index modulus = 1;

  Complex operator()(const EopOperator& t) const;
};

/// phi = Tr(A .) + sum_r w_r Psi_r. `a` acts on coordinates 0..N-1.
struct PositiveFunctional {
  Matrix a;
  RealVector w;

  /// Validates A >= 0 (within 1e-12) and w >= 0.
  static PositiveFunctional make(Matrix a, RealVector w);

  Complex normal_value(const EopOperator& t) const;
  /// sum_r w_r Psi_r(T) with Psi_r = ResidueCharacter{r, w.size()}.
  Complex singular_value(const EopOperator& t) const;
  Complex operator()(const EopOperator& t) const { return normal_value(t) + singular_value(t); }
  double total_mass() const;
};

struct FunctionalDecomposition {
  PositiveFunctional normal_part;    // Tr(A .)
  PositiveFunctional singular_part;  // vanishes on compacts
};

FunctionalDecomposition functional_decompose(const PositiveFunctional& phi);

/// *-endomorphism onto diagonals built from characters. Output pattern (period
/// `modulus`, empty head): entry r is Psi_{base}(T) for r in `collapsed`,
/// Psi_{assignment[r]}(T) otherwise. Characters are taken with the same modulus.
class CharacterEndomorphism {
 public:
  CharacterEndomorphism(Index modulus, std::vector<Index> collapsed, Index base,
                        std::map<Index, Index> assignment);

  Diagonal operator()(const EopOperator& t) const;
  Index modulus() const noexcept { return modulus_; }

 private:
  Index modulus_;
  std::vector<bool> in_collapsed_;
  Index base_;
  std::map<Index, Index> assignment_;
};

CharacterEndomorphism endomorphism_from_characters(Index modulus, std::vector<Index> collapsed, Index base,
                                                   std::map<Index, Index> assignment);

}  // namespace dpk
