#include <cmath>
#include <numbers>

#include "dpk/factor.hpp"
#include "dpk/generate.hpp"
#include "support.hpp"

using namespace dpk;
using namespace testing;

namespace {

constexpr double kPi = std::numbers::pi;

EopOperator zero_tail_hermitian(const Matrix& h) { return EopOperator::make(h, Matrix::Zero(1, 1)); }

}  // namespace

TEST_CASE("logarithm of unitaries") {
  CHECK(max_abs(log_unitary(EopOperator::identity()).dense(3)) == 0.0);

  const EopOperator x = log_unitary(EopOperator::scalar(-1.0));
  CHECK(approx_equal(x, EopOperator::scalar(-kPi), 0.0));

  Rng rng(41);
  for (int n = 0; n < 30; ++n) {
    Matrix h = gen::random_hermitian(rng, 6);
    h *= 2.5 / linalg::spectral_norm(h);
    const EopOperator z = EopOperator::make(h, Matrix::Zero(3, 3));
    CHECK(operator_norm(log_unitary(exp_i(z)) - z) < 1e-8);
  }
}

TEST_CASE("unitary factorization") {
  const EopOperator d = diag_op({Complex(0.0, 1.0), -1.0}, {Complex(std::cos(1.0), std::sin(1.0))});
  const UnitaryFactorization fd = unitary_factorize(d);
  CHECK(approx_equal(fd.diagonal_unitary.to_operator(), d));
  CHECK(operator_norm(fd.exponent) < 1e-15);

  // e^{iX0} with a zero-diagonal X0: D carries the phases of diag(e^{iX0}).
  const Matrix x0 = mat({{0.0, 0.4}, {0.4, 0.0}});
  const EopOperator u = exp_i(zero_tail_hermitian(x0));
  const UnitaryFactorization fu = unitary_factorize(u);
  for (Index i = 0; i < 2; ++i) {
    const Complex entry = u.head()(i, i);
    CHECK(std::abs(fu.diagonal_unitary.at(i) - entry / std::abs(entry)) < 1e-14);
  }
  CHECK(operator_norm(fu.reconstruct() - u) <= 1e-9);

  // A quarter rotation has zero diagonal; its phase is taken to be 0.
  const EopOperator r = op({{0.0, -1.0}, {1.0, 0.0}}, {{1.0}});
  const UnitaryFactorization fr = unitary_factorize(r);
  CHECK(fr.diagonal_unitary.at(0) == Complex(1.0, 0.0));
  CHECK(fr.diagonal_unitary.at(1) == Complex(1.0, 0.0));
  CHECK(operator_norm(fr.reconstruct() - r) <= 1e-9);
  CHECK(fr.exponent.has_zero_tail());
}

TEST_CASE("unitary path") {
  Rng rng(43);
  const EopOperator u = gen::random_unitary(rng, 6, 3);
  const UnitaryPath path(u);
  CHECK(approx_equal(path.at(0.0), EopOperator::identity(), 1e-12));
  CHECK(operator_norm(path.at(1.0) - u) <= 1e-9);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) worst = std::max(worst, operator_norm(path.at((k + 1) / 100.0) - path.at(k / 100.0)));
  CHECK(worst <= path.lipschitz_bound() / 100.0);
}

TEST_CASE("Porta-Recht factorization") {
  const EopOperator a = diag_op({2.0, 0.5}, {3.0});
  const PortaRechtResult ra = porta_recht(a);
  CHECK(approx_equal(ra.factorization.diagonal.to_operator(), a, 1e-12));
  CHECK(operator_norm(ra.factorization.exponent) < 1e-12);

  // A = e^{Z0} with zero-diagonal Z0: uniqueness forces D = I, Z = Z0.
  const Matrix z0 = mat({{0.0, Complex(0.3, 0.1), 0.0}, {Complex(0.3, -0.1), 0.0, 0.2}, {0.0, 0.2, 0.0}});
  const EopOperator b = exp_self_adjoint(zero_tail_hermitian(z0));
  const PortaRechtResult rb = porta_recht(b);
  CHECK(operator_norm(rb.factorization.diagonal.to_operator() - EopOperator::identity()) < 1e-9);
  CHECK(max_abs(rb.factorization.exponent.dense(3) - z0) < 1e-9);

  Rng rng(47);
  for (int n = 0; n < 10; ++n) {
    const EopOperator c = gen::random_positive(rng, 3, 1);
    const PortaRechtResult r1 = porta_recht(c);
    PortaRechtOptions other;
    other.initial_log_head = RealVector::Constant(3, 0.7);
    const PortaRechtResult r2 = porta_recht(c, other);
    CHECK(r1.reconstruction_residual <= 1e-8);
    CHECK(operator_norm(r1.factorization.diagonal.to_operator() - r2.factorization.diagonal.to_operator()) <= 1e-6);
    CHECK(operator_norm(r1.factorization.exponent - r2.factorization.exponent) <= 1e-6);
  }

  CHECK(code_of([] { porta_recht(diag_op({-1.0}, {1.0})); }) == ErrorCode::NotPositive);
}
