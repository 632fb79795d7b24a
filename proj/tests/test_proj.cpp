#include <cmath>
#include <numbers>

#include "dpk/factor.hpp"
#include "dpk/generate.hpp"
#include "dpk/oracle.hpp"
#include "dpk/proj.hpp"
#include "support.hpp"

using namespace dpk;
using namespace testing;

namespace {

constexpr double kPi = std::numbers::pi;

ModelProjection diag_proj(std::initializer_list<Complex> head, std::initializer_list<Complex> tail) {
  return ModelProjection::from_diagonal(Diagonal::make(vec(head), vec(tail)));
}

/// Rank-one projection onto (cos a, sin a) in the first two coordinates.
ModelProjection line(double angle) {
  const Vector v = vec({std::cos(angle), std::sin(angle)});
  return ModelProjection::make(EopOperator::make(v * v.adjoint(), Matrix::Zero(1, 1)));
}

}  // namespace

TEST_CASE("projection validation") {
  CHECK(code_of([] { ModelProjection::make(diag_op({0.5}, {0.0})); }) == ErrorCode::NotProjection);
  CHECK(code_of([] { ModelProjection::make(op({{0.0, 1.0}, {0.0, 1.0}}, {{0.0}})); }) == ErrorCode::NotProjection);
  const ModelProjection p = diag_proj({1.0, 0.0}, {0.0, 1.0});
  CHECK(p.in_dpk());
  CHECK(p.tail_pattern() == (RealVector(2) << 0.0, 1.0).finished());
}

TEST_CASE("diagonal decomposition of projections") {
  const ModelProjection e = diag_proj({1.0, 0.0}, {1.0});
  const ProjectionDecomposition de = projection_diag_decompose(e);
  CHECK(approx_equal(de.diagonal_projection.to_operator(), e.op(), 0.0));
  CHECK(max_abs(de.compact_part.dense(3)) == 0.0);

  const ModelProjection half = ModelProjection::make(op({{0.5, 0.5}, {0.5, 0.5}}, {{0.0}}));
  const ProjectionDecomposition dh = projection_diag_decompose(half);
  // Both diagonal entries sit at the tie 1/2 and round up.
  CHECK(approx_equal(dh.diagonal_projection.to_operator(), diag_op({1.0, 1.0}, {0.0}), 0.0));
  CHECK(dh.compact_part.has_zero_tail());
  CHECK(approx_equal(dh.diagonal_projection.to_operator() + dh.compact_part, half.op(), 0.0));

  Rng rng(91);
  for (int n = 0; n < 50; ++n) {
    const ModelProjection p = gen::random_projection(rng, 6, 3, 0.6);
    const RealVector diag = p.op().head().diagonal().real();
    if (((diag.array() - 0.5).abs() < 1e-9).any()) continue;
    CHECK(operator_norm(projection_diag_decompose(p).compact_part) < 1.0);
  }
}

TEST_CASE("index of a pair of projections") {
  Rng rng(97);
  const ModelProjection p = gen::random_projection(rng, 6, 3);
  CHECK(pair_index(p, p) == 0);

  // P - Q has eigenvalue +1 twice and -1 once.
  const ModelProjection a = diag_proj({1.0, 1.0, 0.0}, {0.0});
  const ModelProjection b = diag_proj({0.0, 0.0, 1.0}, {0.0});
  const PairIndexReport r = pair_index_report(a, b);
  CHECK(r.plus_one == 2);
  CHECK(r.minus_one == 1);
  CHECK(r.range_null == 2);
  CHECK(r.null_range == 1);
  CHECK(r.index == 1);

  for (int n = 0; n < 30; ++n) {
    const RealVector pattern = gen::random_pattern(rng, 3);
    const auto member = [&] {
      const Diagonal e = gen::random_diagonal_projection(rng, 6, pattern);
      const EopOperator u = exp_i(gen::random_compact_hermitian(rng, 6, 3, 2.0));
      return ModelProjection::make(u * e.to_operator() * adjoint(u));
    };
    const ModelProjection x = member(), y = member(), z = member();
    CHECK(pair_index(x, z) == pair_index(x, y) + pair_index(y, z));
  }

  CHECK(code_of([] { pair_index(diag_proj({}, {1.0}), diag_proj({}, {0.0})); }) == ErrorCode::NotComparable);
}

TEST_CASE("zero index diagonal") {
  const ModelProjection e = diag_proj({1.0, 0.0, 1.0}, {0.0});
  CHECK(approx_equal(zero_index_diagonal(e).to_operator(), e.op(), 0.0));

  // ind(P, E) = 1 for E = diag(1, 0, 0 | 0): one zero of E gets flipped.
  const ModelProjection p = diag_proj({1.0, 1.0, 0.0}, {0.0});
  const ModelProjection base = diag_proj({1.0, 0.0, 0.0}, {0.0});
  REQUIRE(pair_index(p, base) == 1);
  const Diagonal e0 = zero_index_diagonal(p, nullptr);
  CHECK(pair_index(p, ModelProjection::from_diagonal(e0)) == 0);

  Rng rng(101);
  for (int n = 0; n < 50; ++n) {
    const ModelProjection q = gen::random_projection(rng, 6, 3);
    CHECK(pair_index(q, ModelProjection::from_diagonal(zero_index_diagonal(q))) == 0);
  }
}

TEST_CASE("conjugating exponential") {
  const ModelProjection e = diag_proj({1.0, 0.0}, {0.0});
  const GeodesicExponent same = conjugating_exponential(e, e);
  CHECK(same.length == 0.0);

  for (const double theta : {0.1, 0.7, 1.3}) {
    const GeodesicExponent g = conjugating_exponential(line(theta), e);
    CHECK(g.length == doctest::Approx(theta).epsilon(1e-12));
    CHECK(operator_norm(geodesic_point(e, g, 1.0) - line(theta).op()) < 1e-12);
  }

  const ModelProjection swapped = diag_proj({0.0, 1.0}, {0.0});
  const GeodesicExponent sw = conjugating_exponential(swapped, e);
  CHECK(std::abs(sw.length - kPi / 2) < 1e-12);
  CHECK(operator_norm(geodesic_point(e, sw, 1.0) - swapped.op()) < 1e-12);

  CHECK(code_of([&] { conjugating_exponential(diag_proj({1.0, 1.0}, {0.0}), e); }) == ErrorCode::IndexNotZero);
}

TEST_CASE("minimal geodesics") {
  Rng rng(103);
  const ModelProjection p = gen::random_projection(rng, 6, 3);
  CHECK(minimal_geodesic(p, p).length < 1e-12);

  const ModelProjection a = line(0.2), b = line(0.2 + 0.9);
  const double angle = oracle::largest_principal_angle(a.op().head(), b.op().head());
  const GeodesicExponent g = minimal_geodesic(a, b);
  CHECK(angle == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(std::abs(g.length - std::asin(operator_norm(a.op() - b.op()))) < 1e-12);
  CHECK(std::abs(g.length - angle) < 1e-12);

  const ModelProjection c = line(0.0), d = line(kPi / 2);
  CHECK(std::abs(minimal_geodesic(c, d).length - kPi / 2) < 1e-12);
}

TEST_CASE("component classification") {
  const ComponentClass zero = classify_component(diag_proj({}, {0.0}));
  CHECK(zero.kind == ComponentKind::FiniteRank);
  CHECK(zero.count == 0);

  const ComponentClass cof = classify_component(diag_proj({0.0, 1.0}, {1.0, 1.0}));
  CHECK(cof.kind == ComponentKind::CofiniteRank);
  CHECK(cof.count == 1);

  // Pattern (1, 0) flipped up at one head position versus flipped down at another.
  const ModelProjection up = diag_proj({1.0, 1.0}, {1.0, 0.0});
  const ModelProjection down = diag_proj({0.0, 0.0}, {1.0, 0.0});
  const ComponentClass cu = classify_component(up), cd = classify_component(down);
  CHECK(cu.kind == ComponentKind::Infinite);
  CHECK(cu.base_index == 1);
  CHECK(cd.base_index == -1);
  CHECK(pair_index(up, down) == 2);
  CHECK_FALSE(same_component(cu, cd));
}

TEST_CASE("rank and nullity conjugacy") {
  const ModelProjection p = diag_proj({1.0, 0.0}, {1.0, 0.0});
  const AutomorphismWord id = rank_nullity_conjugacy(p, p);
  CHECK(operator_norm(apply_automorphism(id, p.op()) - p.op()) < 1e-12);
  CHECK(id.sigma.is_identity());

  const ModelProjection r1 = line(0.3), r2 = ModelProjection::make(EopOperator::make(
                                            (Matrix(3, 3) << 0, 0, 0, 0, 0, 0, 0, 0, 1).finished().cast<Complex>(),
                                            Matrix::Zero(1, 1)));
  const AutomorphismWord w = rank_nullity_conjugacy(r1, r2);
  CHECK(operator_norm(apply_automorphism(w, r1.op()) - r2.op()) <= 1e-8);

  const ModelProjection a = diag_proj({}, {1.0, 0.0});
  const ModelProjection b = diag_proj({}, {0.0, 1.0});
  const AutomorphismWord ab = rank_nullity_conjugacy(a, b);
  CHECK(ab.sigma.has_infinite_support());
  CHECK(operator_norm(apply_automorphism(ab, a.op()) - b.op()) <= 1e-8);

  CHECK(code_of([&] { rank_nullity_conjugacy(r1, diag_proj({1.0, 1.0}, {0.0})); }) == ErrorCode::NotConjugate);
}
