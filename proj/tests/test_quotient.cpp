#include "dpk/generate.hpp"
#include "dpk/quotient.hpp"
#include "support.hpp"

using namespace dpk;
using namespace testing;

TEST_CASE("quotient classes") {
  CHECK(quotient_class(op({{1.0, 2.0}, {3.0, 4.0}}, {{0.0}})).is_zero());
  const QuotientClass one = quotient_class(EopOperator::identity(3));
  CHECK(one.values().isApproxToConstant(Complex(1.0, 0.0)));

  Rng rng(51);
  for (int n = 0; n < 50; ++n) {
    const EopOperator s = gen::random_dpk(rng, 4, 2);
    const EopOperator t = gen::random_dpk(rng, 6, 3);
    const QuotientClass qs = quotient_class(s), qt = quotient_class(t);
    CHECK(approx_equal(quotient_class(s * t), qs * qt, 0.0));
    CHECK(approx_equal(quotient_class(s + t), qs + qt, 0.0));
    CHECK(essential_norm(s) == doctest::Approx(qs.norm()).epsilon(1e-15));
  }
}

TEST_CASE("characters") {
  for (Index r = 0; r < 3; ++r) CHECK(character_eval(EopOperator::identity(3), r) == Complex(1.0, 0.0));
  CHECK(character_eval(op({{5.0, 1.0}, {1.0, 7.0}}, {{0.0}}), 0) == Complex(0.0, 0.0));

  const EopOperator t = diag_op({9.0, 9.0}, {1.0, 2.0});
  CHECK(character_eval(t, 0) == Complex(1.0, 0.0));
  CHECK(character_eval(t, 1) == Complex(2.0, 0.0));
  // Modulus 4 refines the period: residue 3 sits on tail residue 1.
  CHECK(ResidueCharacter{3, 4}(t) == Complex(2.0, 0.0));
  CHECK(code_of([&] { character_eval(t, 2); }) == ErrorCode::BadResidue);

  Rng rng(53);
  for (int n = 0; n < 100; ++n) {
    const EopOperator s = gen::random_dpk(rng, 4, 2);
    const EopOperator u = gen::random_dpk(rng, 6, 2);
    const Index r = rng.below(2);
    CHECK(std::abs(character_eval(s * u, r) - character_eval(s, r) * character_eval(u, r)) < 1e-12);
  }
}

TEST_CASE("positive functionals split into normal and singular parts") {
  Rng rng(57);
  const PositiveFunctional phi = gen::random_functional(rng, 6, 3);

  const PositiveFunctional normal_only = PositiveFunctional::make(phi.a, RealVector::Zero(3));
  const FunctionalDecomposition dn = functional_decompose(normal_only);
  CHECK(dn.singular_part(op({{1.0, 2.0}, {3.0, 4.0}}, {{0.0}})) == Complex(0.0, 0.0));
  CHECK(std::abs(dn.singular_part(diag_op({1.0, 1.0, 1.0}, {2.0, 3.0, 4.0}))) == 0.0);

  const PositiveFunctional singular_only = PositiveFunctional::make(Matrix::Zero(6, 6), phi.w);
  const FunctionalDecomposition ds = functional_decompose(singular_only);
  const EopOperator t = gen::random_dpk(rng, 6, 3);
  CHECK(ds.normal_part(t) == Complex(0.0, 0.0));
  CHECK(std::abs(ds.singular_part(t) - singular_only(t)) < 1e-15);

  const FunctionalDecomposition d = functional_decompose(phi);
  for (int n = 0; n < 30; ++n) {
    const EopOperator s = gen::random_dpk(rng, 6, 3);
    const EopOperator positive = adjoint(s) * s;
    CHECK(d.normal_part(positive).real() >= -1e-12);
    CHECK(d.singular_part(positive).real() >= -1e-12);
    CHECK(std::abs(d.normal_part(positive) + d.singular_part(positive) - phi(positive)) < 1e-12);
  }

  CHECK(code_of([] { PositiveFunctional::make(-Matrix::Identity(2, 2), RealVector::Zero(1)); }) ==
        ErrorCode::NotPositive);
}

TEST_CASE("character endomorphisms") {
  const EopOperator t = diag_op({5.0, 5.0, 5.0}, {1.0, 2.0, 3.0});
  const CharacterEndomorphism all = endomorphism_from_characters(3, {0, 1, 2}, 1, {});
  const Diagonal collapsed = all(t);
  for (Index r = 0; r < 3; ++r) CHECK(collapsed.at(10 + r) == Complex(2.0, 0.0));

  const CharacterEndomorphism id = endomorphism_from_characters(3, {}, 0, {{0, 0}, {1, 1}, {2, 2}});
  CHECK(approx_equal(id(t).to_operator(), diag_op({}, {1.0, 2.0, 3.0}), 0.0));

  const CharacterEndomorphism mixed = endomorphism_from_characters(3, {0}, 2, {{1, 0}, {2, 1}});
  Rng rng(59);
  for (int n = 0; n < 50; ++n) {
    const EopOperator s = gen::random_dpk(rng, 3, 3);
    const EopOperator u = gen::random_dpk(rng, 3, 3);
    CHECK(approx_equal(mixed(s * u), mul(mixed(s), mixed(u)), 1e-12));
  }
}
