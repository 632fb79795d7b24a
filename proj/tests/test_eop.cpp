#include <cmath>

#include "dpk/eop.hpp"
#include "dpk/generate.hpp"
#include "dpk/oracle.hpp"
#include "support.hpp"

using namespace dpk;
using namespace testing;

TEST_CASE("make validates the grid invariant") {
  const EopOperator id = EopOperator::make(Matrix(0, 0), mat({{1.0}}));
  CHECK(approx_equal(id, EopOperator::identity()));

  const EopOperator finite = op({{1.0, 2.0}, {3.0, 4.0}}, {{0.0}});
  CHECK(finite.has_zero_tail());

  CHECK(code_of([] { EopOperator::make(Matrix::Zero(3, 3), Matrix::Identity(2, 2)); }) == ErrorCode::Alignment);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = Complex(std::nan(""), 0.0);
  CHECK(code_of([&] { EopOperator::make(bad, Matrix::Identity(1, 1)); }) == ErrorCode::NonFiniteEntry);
}

TEST_CASE("align reaches the common grid") {
  Rng rng(7);
  const EopOperator a = gen::random_operator(rng, 2, 1);
  const EopOperator b = EopOperator::make(Matrix(0, 0), mat({{5.0}}));
  const auto [x, y] = align(a, b);
  CHECK(x.head_size() == 2);
  CHECK(y.head_size() == 2);
  CHECK(x.period() == 1);

  const EopOperator c = gen::random_operator(rng, 2, 2);
  const EopOperator d = gen::random_operator(rng, 3, 3);
  const auto [u, v] = align(c, d);
  CHECK(u.head_size() == 6);
  CHECK(u.period() == 6);
  CHECK(v.head_size() == 6);
  CHECK(max_abs(u.dense(18) - c.dense(18)) == 0.0);
  CHECK(max_abs(v.dense(18) - d.dense(18)) == 0.0);

  const auto [s, t] = align(c, c);
  CHECK(approx_equal(s, c, 0.0));
  CHECK(approx_equal(t, c, 0.0));
}

TEST_CASE("algebra agrees with dense embeddings") {
  Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const EopOperator a = gen::random_operator(rng, 4, 2);
    const EopOperator b = gen::random_operator(rng, 6, 3);
    const Index n = cover(a, b);
    // Block-diagonal structure beyond the heads makes the corner product exact.
    CHECK(max_abs((a * b).dense(n) - a.dense(n) * b.dense(n)) < 1e-13);
    CHECK(max_abs((a + b).dense(n) - (a.dense(n) + b.dense(n))) < 1e-15);
    CHECK(max_abs(adjoint(a).dense(n) - a.dense(n).adjoint()) == 0.0);
    CHECK(normalize(a + scale(-1.0, a)).head_size() == 0);
    CHECK(max_abs((a + scale(-1.0, a)).dense(n)) == 0.0);
    CHECK(approx_equal(EopOperator::identity() * a, a));
  }
}

TEST_CASE("delta and the canonical decomposition") {
  CHECK(approx_equal(delta(EopOperator::identity()).to_operator(), EopOperator::identity()));
  CHECK(delta(op({{0.0, 1.0}, {0.0, 0.0}}, {{0.0}})).norm() == 0.0);

  const EopOperator d = diag_op({1.0, Complex(0.0, 2.0)}, {3.0});
  const DpkElement dd = canonical_decompose(d);
  CHECK(approx_equal(dd.diagonal_part.to_operator(), d, 0.0));
  CHECK(max_abs(dd.compact_part.dense(4)) == 0.0);

  const EopOperator k = op({{1.0, 2.0}, {3.0, 4.0}}, {{0.0}});
  const DpkElement kk = canonical_decompose(k);
  CHECK(approx_equal(kk.diagonal_part.to_operator(), diag_op({1.0, 4.0}, {0.0}), 0.0));
  CHECK(approx_equal(kk.compact_part, op({{0.0, 2.0}, {3.0, 0.0}}, {{0.0}}), 0.0));

  Rng rng(3);
  for (int n = 0; n < 50; ++n) {
    const EopOperator h = gen::random_self_adjoint_dpk(rng, 6, 3);
    const DpkElement e = canonical_decompose(h);
    CHECK(e.diagonal_part.head_entries().imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(is_self_adjoint(e.compact_part, 0.0));
    CHECK(approx_equal(e.reconstruct(), h, 0.0));
  }
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(EopOperator::identity()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(operator_norm(diag_op({3.0}, {2.0})) == doctest::Approx(3.0).epsilon(1e-15));
  Rng rng(5);
  for (int n = 0; n < 20; ++n) {
    const EopOperator t = gen::random_operator(rng, 6, 2);
    CHECK(std::abs(operator_norm(t) - oracle::dense_norm(t, t.head_size() + 5 * t.period())) < 1e-10);
  }
}

TEST_CASE("spectrum") {
  const Spectrum s = spectrum(EopOperator::identity());
  REQUIRE(s.point.size() == 1);
  CHECK(std::abs(s.point[0] - 1.0) < 1e-15);
  REQUIRE(s.essential.size() == 1);

  Rng rng(9);
  const ModelProjection p = gen::random_projection(rng, 6, 2);
  for (const Complex z : spectrum(p.op()).point)
    CHECK(std::min(std::abs(z), std::abs(z - 1.0)) < 1e-9);

  // Dense corners at three sizes contain every eigenvalue of the head and tail.
  const EopOperator t = gen::random_self_adjoint_dpk(rng, 4, 2);
  for (const Index n : {Index(6), Index(8), Index(12)}) {
    const RealVector dense = linalg::hermitian_eigenvalues(t.dense(n));
    for (const Complex z : spectrum(t).point) CHECK((dense.array() - z.real()).abs().minCoeff() < 1e-9);
  }
}

TEST_CASE("membership") {
  CHECK(is_dpk_member(diag_op({1.0, 2.0}, {3.0, 4.0})));
  CHECK_FALSE(is_dpk_member(op({}, {{0.0, 1.0}, {1.0, 0.0}})));
  Rng rng(13);
  for (int n = 0; n < 100; ++n) {
    const EopOperator s = gen::random_operator(rng, 6, 3);
    CHECK(is_dpk_member(s) == is_dpk_member_by_probes(s));
  }
}

TEST_CASE("finite spectrum approximation") {
  const EopOperator t = diag_op({1.0, 2.0}, {1.0, 2.0});
  CHECK(approx_equal(finite_spectrum_approx(t, 1e-3), t, 0.0));

  Rng rng(17);
  for (int n = 0; n < 30; ++n) {
    const EopOperator h = gen::random_self_adjoint_dpk(rng, 6, 3);
    const EopOperator a = finite_spectrum_approx(h, 1e-3);
    CHECK(is_self_adjoint(a, 0.0));
    CHECK(operator_norm(a - h) <= 1e-3);
    const EopOperator g = gen::random_dpk(rng, 6, 3);
    CHECK(operator_norm(finite_spectrum_approx(g, 1e-3) - g) <= 1e-3);
  }
}

TEST_CASE("normalize shrinks redundant representations") {
  const EopOperator t = diag_op({2.0, 1.0, 1.0, 1.0}, {1.0, 1.0});
  const EopOperator n = normalize(t);
  CHECK(n.head_size() == 1);
  CHECK(n.period() == 1);
  CHECK(approx_equal(n, t, 0.0));
}
