#include "dpk/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dpk {

QuotientClass::QuotientClass(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0) throw Error(ErrorCode::Alignment, "quotient class needs a positive period");
}

double QuotientClass::norm() const { return values_.cwiseAbs().maxCoeff(); }

QuotientClass QuotientClass::expanded(Index period) const {
  if (period % this->period() != 0) throw Error(ErrorCode::Alignment, "period must be a multiple");
  Vector out(period);
  for (Index n = 0; n < period; ++n) out(n) = at(n);
  return QuotientClass(std::move(out));
}

bool QuotientClass::is_zero(double tolerance) const { return norm() <= tolerance; }

namespace {

std::pair<QuotientClass, QuotientClass> align(const QuotientClass& a, const QuotientClass& b) {
  const Index p = lcm_index(a.period(), b.period());
  return {a.expanded(p), b.expanded(p)};
}

}  // namespace

bool approx_equal(const QuotientClass& a, const QuotientClass& b, double tolerance) {
  const auto [x, y] = align(a, b);
  return (x.values() - y.values()).cwiseAbs().maxCoeff() <= tolerance;
}

QuotientClass operator*(const QuotientClass& a, const QuotientClass& b) {
  const auto [x, y] = align(a, b);
  return QuotientClass(x.values().cwiseProduct(y.values()));
}

QuotientClass operator+(const QuotientClass& a, const QuotientClass& b) {
  const auto [x, y] = align(a, b);
  return QuotientClass(x.values() + y.values());
}

QuotientClass conj(const QuotientClass& a) { return QuotientClass(a.values().conjugate()); }

QuotientClass quotient_class(const EopOperator& t) {
  if (!is_dpk_member(t)) throw Error(ErrorCode::NotInDpk, "quotient class needs a D+K member");
  return QuotientClass(t.tail_block().diagonal());
}

double essential_norm(const EopOperator& t) { return linalg::spectral_norm(t.tail_block()); }

Complex character_eval(const EopOperator& t, Index residue) {
  if (!is_dpk_member(t)) throw Error(ErrorCode::NotInDpk, "characters are defined on D+K");
  if (residue < 0 || residue >= t.period())
    throw Error(ErrorCode::BadResidue, "residue " + std::to_string(residue) + " outside [0, " +
                                           std::to_string(t.period()) + ")");
  return t.tail_block()(residue, residue);
}

Complex ResidueCharacter::operator()(const EopOperator& t) const {
  if (modulus <= 0 || residue < 0 || residue >= modulus)
    throw Error(ErrorCode::BadResidue, "invalid residue character");
  return character_eval(t, residue % t.period());
}

// ---- positive functionals ------------------------------------------------------

PositiveFunctional PositiveFunctional::make(Matrix a, RealVector w) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::NotPositive, "A must be square");
  if (a.size() > 0) {
    const double herm_defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-12) throw Error(ErrorCode::NotPositive, "A is not Hermitian");
    const RealVector eig = linalg::hermitian_eigenvalues(a);
    if (eig.minCoeff() < -1e-12)
      throw Error(ErrorCode::NotPositive, "A has eigenvalue " + std::to_string(eig.minCoeff()));
  }
  for (Index r = 0; r < w.size(); ++r)
    if (!(w(r) >= 0.0)) throw Error(ErrorCode::NotPositive, "negative singular weight");
  return PositiveFunctional{std::move(a), std::move(w)};
}

Complex PositiveFunctional::normal_value(const EopOperator& t) const {
  if (a.size() == 0) return Complex(0.0, 0.0);
  return (a * t.dense(a.rows())).trace();
}

Complex PositiveFunctional::singular_value(const EopOperator& t) const {
  Complex out(0.0, 0.0);
  const Index modulus = w.size();
  for (Index r = 0; r < modulus; ++r)
    if (w(r) != 0.0) out += w(r) * ResidueCharacter{r, modulus}(t);
  return out;
}

double PositiveFunctional::total_mass() const {
  return (a.size() ? a.trace().real() : 0.0) + (w.size() ? w.sum() : 0.0);
}

FunctionalDecomposition functional_decompose(const PositiveFunctional& phi) {
  const PositiveFunctional checked = PositiveFunctional::make(phi.a, phi.w);
  return FunctionalDecomposition{
      PositiveFunctional{checked.a, RealVector::Zero(checked.w.size())},
      PositiveFunctional{Matrix::Zero(checked.a.rows(), checked.a.cols()), checked.w},
  };
}

// ---- endomorphisms ----------------------------------------------------------------

CharacterEndomorphism::CharacterEndomorphism(Index modulus, std::vector<Index> collapsed, Index base,
                                             std::map<Index, Index> assignment)
    : modulus_(modulus), base_(base), assignment_(std::move(assignment)) {
  if (modulus <= 0) throw Error(ErrorCode::BadResidue, "modulus must be positive");
  auto valid = [modulus](Index r) { return r >= 0 && r < modulus; };
  if (!valid(base)) throw Error(ErrorCode::BadResidue, "base residue out of range");
  in_collapsed_.assign(static_cast<std::size_t>(modulus), false);
  for (Index r : collapsed) {
    if (!valid(r)) throw Error(ErrorCode::BadResidue, "collapsed residue out of range");
    in_collapsed_[static_cast<std::size_t>(r)] = true;
  }
  std::vector<bool> used(static_cast<std::size_t>(modulus), false);
  for (Index r = 0; r < modulus; ++r) {
    if (in_collapsed_[static_cast<std::size_t>(r)]) continue;
    const auto it = assignment_.find(r);
    if (it == assignment_.end()) throw Error(ErrorCode::BadResidue, "no assignment for residue " + std::to_string(r));
    if (!valid(it->second)) throw Error(ErrorCode::BadResidue, "assigned residue out of range");
    if (used[static_cast<std::size_t>(it->second)])
      throw Error(ErrorCode::BadResidue, "assignment is not injective off the collapsed set");
    used[static_cast<std::size_t>(it->second)] = true;
  }
}

Diagonal CharacterEndomorphism::operator()(const EopOperator& t) const {
  Vector pattern(modulus_);
  for (Index r = 0; r < modulus_; ++r) {
    const Index source = in_collapsed_[static_cast<std::size_t>(r)] ? base_ : assignment_.at(r);
    pattern(r) = ResidueCharacter{source, modulus_}(t);
  }
  return Diagonal::make(Vector(0), std::move(pattern));
}

CharacterEndomorphism endomorphism_from_characters(Index modulus, std::vector<Index> collapsed, Index base,
                                                   std::map<Index, Index> assignment) {
  return CharacterEndomorphism(modulus, std::move(collapsed), base, std::move(assignment));
}

}  // namespace dpk
