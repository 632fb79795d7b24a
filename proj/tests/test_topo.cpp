#include <cmath>
#include <numbers>

#include "dpk/factor.hpp"
#include "dpk/generate.hpp"
#include "dpk/topo.hpp"
#include "support.hpp"

using namespace dpk;
using namespace testing;

TEST_CASE("bundle section") {
  const BundleSection id = bundle_section(EopOperator::identity(2));
  CHECK(approx_equal(id.diagonal.to_operator(), EopOperator::identity(), 0.0));
  CHECK(approx_equal(id.fiber, EopOperator::identity(), 0.0));

  const EopOperator d = diag_op({Complex(0.0, 1.0), Complex(std::cos(2.0), std::sin(2.0))}, {Complex(0.0, -1.0)});
  const BundleSection sd = bundle_section(d);
  CHECK(approx_equal(sd.diagonal.to_operator(), d, 1e-14));
  CHECK(approx_equal(sd.fiber, EopOperator::identity(), 1e-14));

  Rng rng(111);
  for (int n = 0; n < 30; ++n) {
    const EopOperator u = gen::random_ball_unitary(rng, 6, 3);
    const BundleSection s = bundle_section(u);
    CHECK(operator_norm(s.reconstruct() - u) <= 1e-9);
    CHECK(max_abs(s.fiber.tail_block() - Matrix::Identity(s.fiber.period(), s.fiber.period())) == 0.0);
  }

  CHECK(code_of([] { bundle_section(EopOperator::scalar(-1.0)); }) == ErrorCode::NotInBall);
}

TEST_CASE("loop windings") {
  const UnitaryLoop constant = UnitaryLoop::make({EopOperator::identity(), EopOperator::identity()});
  const Winding wd = loop_winding(constant, LoopKind::Diagonal);
  for (const long long k : wd.head) CHECK(k == 0);
  for (const long long k : wd.tail) CHECK(k == 0);
  CHECK(loop_winding(constant, LoopKind::Compact).compact == 0);

  for (std::size_t j = 0; j < 5; ++j) {
    std::vector<long long> e(5, 0);
    e[j] = 1;
    CHECK(loop_winding(diagonal_generator_loop(e, 64), LoopKind::Diagonal).head == e);
    const Pi1Pair pair = pi1_iota(e, 64);
    CHECK(pair.diagonal == e);
    CHECK(pair.compact == -1);
  }

  const Pi1Pair mixed = pi1_iota({2, -1, 0, 3}, 64);
  CHECK(mixed.diagonal == std::vector<long long>{2, -1, 0, 3});
  CHECK(mixed.compact == -4);

  CHECK(code_of([] { diagonal_generator_loop({1}, 4); }) == ErrorCode::StepTooLarge);
  const UnitaryLoop tail_loop = UnitaryLoop::sample(
      [](double t) {
        return Diagonal::make(Vector(0), vec({std::polar(1.0, 2.0 * std::numbers::pi * t)})).to_operator();
      },
      64);
  CHECK(loop_winding(tail_loop, LoopKind::Diagonal).tail == std::vector<long long>{1});
  CHECK(code_of([&] { loop_winding(tail_loop, LoopKind::Compact); }) == ErrorCode::KindMismatch);
  const UnitaryLoop rotation = UnitaryLoop::sample(
      [](double t) {
        const double a = 2.0 * std::numbers::pi * t;
        return op({{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}}, {{1.0}});
      },
      64);
  CHECK(loop_winding(rotation, LoopKind::Compact).compact == 0);
  CHECK(code_of([&] { loop_winding(rotation, LoopKind::Diagonal); }) == ErrorCode::KindMismatch);
}

TEST_CASE("K0 classes") {
  const K0Class zero = k0_class(ModelProjection::from_diagonal(Diagonal::make(Vector(0), vec({0.0}))));
  CHECK(zero.tail_pattern.isZero(0.0));
  CHECK(zero.z_part == 0);

  RealVector pattern(3);
  pattern << 1.0, 0.0, 1.0;
  const K0Class self = k0_class(ModelProjection::from_diagonal(canonical_pattern_projection(pattern, 6)));
  CHECK(self.tail_pattern == pattern);
  CHECK(self.z_part == 0);

  Rng rng(113);
  const ModelProjection p = gen::random_projection(rng, 6, 3);
  const K0Class c = k0_class(p);
  for (int n = 0; n < 20; ++n) {
    const EopOperator u = exp_i(gen::random_compact_hermitian(rng, 6, 3, 3.0));
    CHECK(k0_class(ModelProjection::make(u * p.op() * adjoint(u))) == c);
  }

  RealVector left(2), right(2);
  left << 1.0, 0.0;
  right << 0.0, 1.0;
  const K0Class sum = k0_sum({left, 2}, {right, -1});
  CHECK(sum.tail_pattern == RealVector::Ones(1));
  CHECK(sum.z_part == 1);
  CHECK(code_of([&] { k0_sum({left, 0}, {left, 0}); }) == ErrorCode::NotOrthogonalPatterns);
}
