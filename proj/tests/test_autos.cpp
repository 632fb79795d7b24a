#include <cmath>
#include <numbers>

#include "dpk/autos.hpp"
#include "dpk/factor.hpp"
#include "dpk/generate.hpp"
#include "dpk/oracle.hpp"
#include "support.hpp"

using namespace dpk;
using namespace testing;

namespace {

double word_distance(const AutomorphismWord& w, const EopOperator& u) {
  return operator_norm(w.implementing_unitary() - u);
}

}  // namespace

TEST_CASE("permutation unitaries") {
  CHECK(approx_equal(permutation_unitary(PermutationSpec::identity(4, 2)), EopOperator::identity(), 0.0));

  const PermutationSpec head_swap = PermutationSpec::make({1, 0}, {0});
  CHECK_FALSE(head_swap.has_infinite_support());
  const EopOperator u = permutation_unitary(head_swap);
  CHECK(is_dpk_member(u));
  CHECK(u.entry(1, 0) == Complex(1.0, 0.0));  // U e_0 = e_1

  const PermutationSpec tail_swap = PermutationSpec::make({}, {1, 0});
  CHECK(tail_swap.has_infinite_support());
  CHECK_FALSE(is_dpk_member(permutation_unitary(tail_swap)));
  CHECK(tail_swap(4) == 5);
  CHECK(tail_swap(7) == 6);

  Rng rng(61);
  for (int n = 0; n < 20; ++n) {
    const PermutationSpec a = gen::random_permutation(rng, 6, 3, true);
    const PermutationSpec b = gen::random_permutation(rng, 4, 2, false);
    CHECK(approx_equal(permutation_unitary(compose(a, b)), permutation_unitary(a) * permutation_unitary(b), 0.0));
    CHECK(compose(a, a.inverse()).is_identity());
  }
}

TEST_CASE("automorphism action") {
  Rng rng(67);
  const EopOperator t = gen::random_operator(rng, 6, 3);
  CHECK(approx_equal(apply_automorphism(AutomorphismWord::identity(), t), t, 0.0));

  // U_sigma D_x U_sigma^* = D_{sigma(x)} with sigma(x)_{sigma(n)} = x_n.
  const PermutationSpec sigma = PermutationSpec::make({2, 0, 1}, {1, 2, 0});
  const Diagonal x = Diagonal::make(vec({1.0, 2.0, 3.0}), vec({4.0, 5.0, 6.0}));
  const AutomorphismWord theta{Diagonal::constant(1.0), EopOperator::zero(), sigma};
  const EopOperator image = apply_automorphism(theta, x.to_operator());
  CHECK(approx_equal(image, permute_diagonal(sigma, x).to_operator(), 0.0));
  for (Index n = 0; n < 9; ++n) CHECK(image.entry(sigma(n), sigma(n)) == x.at(n));

  for (int n = 0; n < 30; ++n) {
    const AutomorphismWord w{gen::random_phase_diagonal(rng, 6, 3),
                             gen::random_compact_hermitian(rng, 6, 3, 1.5),
                             gen::random_permutation(rng, 6, 3, rng.coin())};
    const EopOperator s = gen::random_operator(rng, 6, 3);
    CHECK(std::abs(operator_norm(apply_automorphism(w, s)) - operator_norm(s)) < 1e-10);
  }
}

TEST_CASE("normal form") {
  const PermutationSpec sigma = PermutationSpec::make({1, 0}, {1, 0});
  const Diagonal w = Diagonal::make(vec({Complex(0.0, 1.0), -1.0}), vec({1.0, Complex(0.0, -1.0)}));
  const AutomorphismWord sw = normal_form({PermutationGenerator{sigma}, DiagonalGenerator{w}});
  CHECK(approx_equal(sw.w, permute_diagonal(sigma, w), 0.0));
  CHECK(operator_norm(sw.x) == 0.0);
  CHECK(approx_equal(permutation_unitary(sw.sigma), permutation_unitary(sigma), 0.0));

  const Diagonal w2 = Diagonal::make(vec({-1.0}), vec({Complex(0.0, 1.0)}));
  const AutomorphismWord ww = normal_form({DiagonalGenerator{w}, DiagonalGenerator{w2}});
  CHECK(approx_equal(ww.w, mul(w, w2), 0.0));
  CHECK(operator_norm(ww.x) == 0.0);
  CHECK(ww.sigma.is_identity());

  Rng rng(71);
  for (int n = 0; n < 10; ++n) {
    std::vector<Generator> word;
    EopOperator product = EopOperator::identity();
    for (int k = 0; k < 5; ++k) {
      Generator g = DiagonalGenerator{gen::random_phase_diagonal(rng, 6, 3)};
      const Index choice = rng.below(3);
      if (choice == 1) g = ExponentialGenerator{gen::random_compact_hermitian(rng, 6, 3, 1.0)};
      if (choice == 2) g = PermutationGenerator{gen::random_permutation(rng, 6, 3, true)};
      product = product * generator_unitary(g);
      word.push_back(std::move(g));
    }
    const AutomorphismWord nf = normal_form(word);
    CHECK(nf.x.has_zero_tail());
    CHECK(action_distance(nf.implementing_unitary(), product) < 1e-9);
    for (int probe = 0; probe < 5; ++probe) {
      const EopOperator a = gen::random_operator(rng, 6, 3);
      CHECK(operator_norm(apply_automorphism(nf, a) - product * a * adjoint(product)) < 1e-9);
    }
  }

  CHECK(code_of([] { generator_unitary(DiagonalGenerator{Diagonal::constant(2.0)}); }) == ErrorCode::NotUnitary);
}

TEST_CASE("D+K automorphism test") {
  Rng rng(73);
  const Diagonal d = gen::random_phase_diagonal(rng, 4, 2);
  const auto wd = is_dpk_automorphism(d.to_operator());
  REQUIRE(wd.has_value());
  CHECK(wd->tail_permutation == std::vector<Index>{0, 1});
  CHECK(word_distance(wd->word, d.to_operator()) < 1e-12);

  // Tail rotation by pi/4 sends the residue projection (1, 0) outside D+K.
  const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
  const EopOperator rot = op({}, {{c, -s}, {s, c}});
  CHECK_FALSE(is_dpk_automorphism(rot).has_value());
  CHECK_FALSE(is_dpk_automorphism_by_probes(rot));
  const EopOperator p10 = diag_op({}, {1.0, 0.0});
  CHECK_FALSE(is_dpk_member(rot * p10 * adjoint(rot)));

  for (int n = 0; n < 20; ++n) {
    const EopOperator u = gen::random_phase_diagonal(rng, 6, 3).to_operator() *
                          permutation_unitary(gen::random_permutation(rng, 6, 3, true)) *
                          exp_i(gen::random_compact_hermitian(rng, 6, 3, 2.0));
    const auto w = is_dpk_automorphism(u);
    REQUIRE(w.has_value());
    CHECK(is_dpk_automorphism_by_probes(u));
    CHECK(word_distance(w->word, u) < 1e-9);
  }
}

TEST_CASE("Stampfli derivation norm") {
  CHECK(stampfli_derivation_norm(EopOperator::identity()) < 1e-8);

  // Spectrum {0, 2, 1}: brute-force lambda grid at step 1e-4 on the real axis.
  const EopOperator a = diag_op({0.0, 2.0}, {1.0});
  double grid_min = 1e300;
  for (int k = -10000; k <= 30000; ++k) {
    const double lambda = k * 1e-4;
    grid_min = std::min(grid_min, linalg::spectral_norm(a.dense(3) - lambda * Matrix::Identity(3, 3)));
  }
  CHECK(grid_min == doctest::Approx(1.0).epsilon(1e-12));
  const StampfliResult r = stampfli(a);
  CHECK(std::abs(r.derivation_norm - 2.0 * grid_min) < 1e-6);
  CHECK(std::abs(r.center - Complex(1.0, 0.0)) < 1e-6);

  Rng rng(79);
  for (int n = 0; n < 10; ++n) {
    std::vector<Complex> points;
    Vector head(6), tail(2);
    for (Index i = 0; i < 6; ++i) points.push_back(head(i) = rng.complex_normal());
    for (Index i = 0; i < 2; ++i) points.push_back(tail(i) = rng.complex_normal());
    const Matrix v = linalg::exp_i_hermitian(gen::random_hermitian(rng, 6));
    const EopOperator normal = EopOperator::make(v * head.asDiagonal() * v.adjoint(), tail.asDiagonal());
    CHECK(std::abs(stampfli(normal).radius - oracle::smallest_enclosing_circle(points).radius) < 1e-6);
  }
}

TEST_CASE("finite spectrum conjugation matching") {
  const Diagonal d0 = Diagonal::make(vec({1.0, 2.0, 3.0, 1.0}), vec({1.0, 2.0}));

  const PermutationSpec sigma = PermutationSpec::make({3, 2, 1, 0}, {1, 0});
  const EopOperator us = permutation_unitary(sigma);
  const AutomorphismWord ws = match_finite_spectrum_conjugation(us, d0);
  CHECK(operator_norm(ws.x) < 1e-12);
  CHECK(operator_norm(apply_automorphism(ws, d0.to_operator()) - us * d0.to_operator() * adjoint(us)) < 1e-12);

  Rng rng(83);
  const EopOperator inner = exp_i(gen::random_compact_hermitian(rng, 4, 2, 1.0));
  const AutomorphismWord wi = match_finite_spectrum_conjugation(inner, d0);
  CHECK(approx_equal(permutation_unitary(wi.sigma), EopOperator::identity(), 0.0));
  CHECK(operator_norm(apply_automorphism(wi, d0.to_operator()) - inner * d0.to_operator() * adjoint(inner)) <= 1e-8);

  for (int n = 0; n < 10; ++n) {
    const EopOperator u = gen::random_unitary(rng, 6, 3) * permutation_unitary(gen::random_permutation(rng, 6, 3, true));
    RealVector levels(3);
    levels << -1.0, 0.5, 2.0;
    Vector head(6), tail(3);
    for (Index i = 0; i < 6; ++i) head(i) = levels(rng.below(3));
    for (Index i = 0; i < 3; ++i) tail(i) = levels(i);
    const Diagonal d = Diagonal::make(head, tail);
    const AutomorphismWord w = match_finite_spectrum_conjugation(u, d);
    CHECK(operator_norm(apply_automorphism(w, d.to_operator()) - u * d.to_operator() * adjoint(u)) <= 1e-8);
  }
}
