#include "dpk/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "dpk/autos.hpp"
#include "dpk/factor.hpp"
#include "dpk/fredholm.hpp"
#include "dpk/generate.hpp"
#include "dpk/oracle.hpp"
#include "dpk/proj.hpp"
#include "dpk/quotient.hpp"
#include "dpk/topo.hpp"

namespace dpk {

namespace {

constexpr double kPi = std::numbers::pi;

class Trial {
 public:
  Trial(const ExperimentConfig& config, std::uint64_t index)
      : rng(trial_seed(config.seed, index)), config_(config) {
    result.trial = index;
  }

  Index m() const { return config_.head_size; }
  Index p() const { return config_.period; }

  /// Passes iff value <= threshold (or the configured override).
  void check(const std::string& name, double value, double threshold) {
    record(name, value, value <= config_.tolerance.value_or(threshold));
  }
  /// Passes iff value == 0; never overridden.
  void exact(const std::string& name, double value) { record(name, value, value == 0.0); }
  void require(const std::string& name, bool ok) { record(name, ok ? 0.0 : 1.0, ok); }

  Rng rng;
  CaseResult result;

 private:
  void record(const std::string& name, double value, bool ok) {
    result.residuals.emplace_back(name, value);
    if (!ok || !std::isfinite(value)) {
      result.pass = false;
      if (!result.note.empty()) result.note += "; ";
      result.note += name + " failed";
    }
  }

  const ExperimentConfig& config_;
};

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

double entry_distance(const EopOperator& a, const EopOperator& b) {
  const auto [x, y] = align(a, b);
  return std::max(max_abs(x.head() - y.head()), max_abs(x.tail_block() - y.tail_block()));
}

double dist(const EopOperator& a, const EopOperator& b) { return operator_norm(a - b); }

EopOperator conj_by(const EopOperator& u, const EopOperator& t) { return mul(mul(u, t), adjoint(u)); }

Index head_ones(const Diagonal& d) {
  Index n = 0;
  for (Index i = 0; i < d.head_size(); ++i) n += std::abs(d.head_entries()(i)) > 0.5 ? 1 : 0;
  return n;
}

struct ConjugatedProjection {
  ModelProjection p;
  Diagonal e;
};

ConjugatedProjection projection_from(Rng& rng, const Diagonal& e, double max_angle) {
  const EopOperator u =
      exp_i(gen::random_compact_hermitian(rng, e.head_size(), e.period(), rng.uniform(0.0, max_angle)));
  return {ModelProjection::make(conj_by(u, e.to_operator())), e};
}

ConjugatedProjection projection_with_pattern(Rng& rng, Index m, const RealVector& pattern, double max_angle) {
  return projection_from(rng, gen::random_diagonal_projection(rng, m, pattern), max_angle);
}

// Nontrivial residue permutations of {0..p-1} in lexicographic order.
std::vector<std::vector<Index>> nontrivial_residue_perms(Index p, std::size_t limit) {
  std::vector<Index> v(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) v[static_cast<std::size_t>(i)] = i;
  std::vector<std::vector<Index>> out;
  while (std::next_permutation(v.begin(), v.end()) && out.size() < limit) out.push_back(v);
  return out;
}

// ---- suites ------------------------------------------------------------------

void canonical_decomposition(Trial& t) {
  const bool self_adjoint = t.rng.coin();
  const EopOperator a = self_adjoint ? gen::random_self_adjoint_dpk(t.rng, t.m(), t.p())
                                     : gen::random_dpk(t.rng, t.m(), t.p());
  const DpkElement d = canonical_decompose(a);
  const Diagonal dk = delta(d.compact_part);
  t.exact("delta_of_compact_part", std::max(max_abs(dk.head_entries()), max_abs(dk.tail_pattern())));
  t.exact("compact_tail", max_abs(d.compact_part.tail_block()));
  t.exact("reconstruction", entry_distance(d.reconstruct(), a));
  t.check("delta_norm_excess", d.diagonal_part.norm() - operator_norm(a), 1e-12);
  if (self_adjoint) {
    t.exact("diagonal_part_imag", std::max(max_abs(d.diagonal_part.head_entries().imag()),
                                          max_abs(d.diagonal_part.tail_pattern().imag())));
    t.exact("compact_part_asymmetry", entry_distance(d.compact_part, adjoint(d.compact_part)));
  }
}

void delta_contractive(Trial& t) {
  const EopOperator a = gen::random_operator(t.rng, t.m(), t.p());
  const Diagonal d = delta(a);
  t.check("delta_norm_excess", d.norm() - operator_norm(a), 1e-12);
  t.exact("delta_idempotent", entry_distance(delta(d.to_operator()).to_operator(), d.to_operator()));
  const EopOperator b = gen::random_operator(t.rng, t.m(), t.p());
  const Diagonal sum = delta(a + b);
  t.check("delta_linear", entry_distance(sum.to_operator(), d.to_operator() + delta(b).to_operator()), 1e-14);
}

void membership(Trial& t) {
  EopOperator a = gen::random_operator(t.rng, t.m(), t.p());
  if (t.rng.coin(0.25) && t.p() > 1) {
    // Diagonal tail with one small off-diagonal entry: not a member.
    Matrix tail = a.tail_block().diagonal().asDiagonal();
    tail(0, t.p() - 1) = 1e-6;
    a = EopOperator::make(a.head(), tail);
  }
  const bool direct = is_dpk_member(a);
  const bool probes = is_dpk_member_by_probes(a);
  t.require("routes_agree", direct == probes);
}

void closure(Trial& t) {
  const EopOperator s = gen::random_dpk(t.rng, t.m(), t.p());
  const EopOperator u = gen::random_dpk(t.rng, t.m(), t.p());
  t.require("product_member", is_dpk_member(s * u));
  t.require("sum_member", is_dpk_member(s + u));
  t.require("adjoint_member", is_dpk_member(adjoint(s)));
  t.check("submultiplicative_excess", operator_norm(s * u) - operator_norm(s) * operator_norm(u), 1e-12);
}

void norm(Trial& t) {
  const EopOperator a = gen::random_operator(t.rng, t.m(), t.p());
  const double n = operator_norm(a);
  t.check("dense_oracle", std::abs(n - oracle::dense_norm(a, a.head_size() + 2 * a.period())), 1e-10);
  t.check("essential_norm_excess", essential_norm(a) - n, 1e-14);
  t.check("essential_norm_tail", std::abs(essential_norm(a) - linalg::spectral_norm(a.tail_block())), 0.0);
}

void fredholm(Trial& t) {
  const EopOperator a = gen::random_singular_dpk(t.rng, t.m(), t.p());
  const FredholmData fd = fredholm_data(a);
  const Index m = a.head_size(), p = a.period();
  const Index k1 = oracle::dense_kernel_dim(a, m + p);
  const Index k2 = oracle::dense_kernel_dim(a, m + 2 * p);
  const Index k3 = oracle::dense_kernel_dim(a, m + 4 * p);
  const bool stable = k1 == k2 && k2 == k3;
  t.require("fredholm_iff_tail_invertible", fd.is_fredholm == (linalg::min_singular_value(a.tail_block()) > 1e-10));
  t.require("fredholm_iff_kernel_stable", fd.is_fredholm == stable);
  if (fd.is_fredholm) {
    t.require("index_zero", fd.index.has_value() && *fd.index == 0);
    t.require("kernel_matches_dense", fd.kernel_dim.has_value() && *fd.kernel_dim == k1);
  } else {
    t.require("infinite_kernel_flag", fd.infinite_kernel && !fd.index.has_value());
  }
}

Matrix low_rank_hermitian(Rng& rng, Index m) {
  const Index r = std::max<Index>(0, m - 1 - rng.below(3));
  const Matrix b = gen::random_matrix(rng, m, r);
  RealVector w(r);
  for (Index i = 0; i < r; ++i) w(i) = rng.normal();
  return linalg::hermitian_part(b * w.cast<Complex>().asDiagonal() * b.adjoint());
}

void stable_rank(Trial& t) {
  const bool self_adjoint = t.rng.coin();
  EopOperator a;
  if (self_adjoint) {
    RealVector tail(t.p());
    for (Index r = 0; r < t.p(); ++r) tail(r) = t.rng.coin(0.3) ? 0.0 : t.rng.normal();
    a = EopOperator::make(low_rank_hermitian(t.rng, t.m()), tail.cast<Complex>().asDiagonal());
  } else {
    a = gen::random_singular_dpk(t.rng, t.m(), t.p());
  }
  for (const double eps : {1e-1, 1e-3}) {
    const std::string tag = eps == 1e-1 ? "eps1e-1" : "eps1e-3";
    const EopOperator b = invertible_approx(a, eps);
    t.check("distance_over_3eps_" + tag, dist(a, b) / (3.0 * eps), 1.0 - 1e-15);
    t.require("invertible_" + tag, is_invertible(b).invertible);
    if (self_adjoint) t.require("self_adjoint_" + tag, is_self_adjoint(b, 1e-12));
  }
}

void unitary_factorization(Trial& t) {
  EopOperator u = gen::random_unitary(t.rng, t.m(), t.p());
  if (t.rng.coin(0.3)) u = mul(u, permutation_unitary(gen::random_permutation(t.rng, t.m(), t.p(), false)));
  const UnitaryFactorization f = unitary_factorize(u);
  t.check("reconstruction", dist(f.reconstruct(), u), 1e-9);
  t.check("exponent_asymmetry", entry_distance(f.exponent, adjoint(f.exponent)), 1e-12);
  t.exact("exponent_tail", max_abs(f.exponent.tail_block()));
  t.check("exponent_norm_excess", operator_norm(f.exponent) - kPi, 1e-9);
  const UnitaryPath path(u);
  t.check("path_start", dist(path.at(0.0), EopOperator::identity(u.period())), 1e-12);
  t.check("path_end", dist(path.at(1.0), u), 1e-9);
}

Index porta_recht_head(const Trial& t) {
  const Index cap = std::min<Index>(t.m(), 16);
  return cap - cap % t.p();
}

void porta_recht_suite(Trial& t, int& no_convergence) {
  const EopOperator a = gen::random_positive(t.rng, porta_recht_head(t), t.p());
  try {
    const PortaRechtResult r1 = porta_recht(a);
    const PortaRechtFactorization& f = r1.factorization;
    t.check("reconstruction", dist(f.reconstruct(), a), 1e-8);
    const Diagonal dz = delta(f.exponent);
    t.check("exponent_diagonal", std::max(max_abs(dz.head_entries()), max_abs(dz.tail_pattern())), 1e-8);
    PortaRechtOptions second;
    second.initial_log_head = RealVector::Zero(a.head_size());
    const PortaRechtResult r2 = porta_recht(a, second);
    const Diagonal& d1 = f.diagonal;
    const Diagonal& d2 = r2.factorization.diagonal;
    t.check("uniqueness_diagonal",
            std::max(max_abs(d1.head_entries() - d2.head_entries()), max_abs(d1.tail_pattern() - d2.tail_pattern())),
            1e-6);
    t.check("uniqueness_exponent", dist(f.exponent, r2.factorization.exponent), 1e-6);
    t.result.residuals.emplace_back("iterations", static_cast<double>(r1.iterations));
  } catch (const NoConvergenceError& e) {
    ++no_convergence;
    t.require("converged", false);
    t.result.note = e.what();
  }
}

void index_suite(Trial& t) {
  const RealVector pattern = gen::random_pattern(t.rng, t.p());
  const ConjugatedProjection p = projection_with_pattern(t.rng, t.m(), pattern, 3.0);
  const ConjugatedProjection q = projection_with_pattern(t.rng, t.m(), pattern, 3.0);
  const PairIndexReport r = pair_index_report(p.p, q.p);  // throws OracleMismatch on disagreement
  t.exact("routes_plus", static_cast<double>(r.plus_one - r.range_null));
  t.exact("routes_minus", static_cast<double>(r.minus_one - r.null_range));
  t.exact("constructed_value", static_cast<double>(r.index - (head_ones(p.e) - head_ones(q.e))));
  t.exact("antisymmetry", static_cast<double>(pair_index(q.p, p.p) + r.index));
}

void index_additivity(Trial& t) {
  const RealVector pattern = gen::random_pattern(t.rng, t.p());
  const ConjugatedProjection p = projection_with_pattern(t.rng, t.m(), pattern, 3.0);
  const ConjugatedProjection q = projection_with_pattern(t.rng, t.m(), pattern, 3.0);
  const ConjugatedProjection r = projection_with_pattern(t.rng, t.m(), pattern, 3.0);
  const Index pq = pair_index(p.p, q.p), qr = pair_index(q.p, r.p), pr = pair_index(p.p, r.p);
  t.exact("additivity", static_cast<double>(pr - pq - qr));
}

void zero_index(Trial& t) {
  const ModelProjection p = gen::random_projection(t.rng, t.m(), t.p(), 3.0);
  const Diagonal e0 = zero_index_diagonal(p);
  const ModelProjection e0p = ModelProjection::from_diagonal(e0);
  t.exact("index_after_flips", static_cast<double>(pair_index(p, e0p)));
  const GeodesicExponent g = conjugating_exponential(p, e0p);
  const EopOperator u = exp_i(g.x);
  t.check("conjugation_residual", dist(conj_by(u, e0.to_operator()), p.op()), 1e-8);
  t.check("exponent_norm_excess", g.length - kPi / 2.0, 1e-9);
  t.exact("exponent_tail", max_abs(g.x.tail_block()));
}

void geodesic(Trial& t) {
  const Diagonal e = gen::random_diagonal_projection(t.rng, t.m(), gen::random_pattern(t.rng, t.p()));
  const EopOperator u = exp_i(gen::random_compact_hermitian(t.rng, t.m(), t.p(), t.rng.uniform(0.0, 2.0)));
  const ModelProjection p = ModelProjection::make(conj_by(u, e.to_operator()));
  const bool swap_case = t.result.trial % 4 == 3;
  std::optional<ModelProjection> target;
  if (swap_case) {
    // Exchange one range and one null direction of the diagonal model.
    Vector h = e.head_entries();
    Index one = -1, zero = -1;
    for (Index i = 0; i < h.size(); ++i) {
      if (std::abs(h(i)) > 0.5 && one < 0) one = i;
      if (std::abs(h(i)) < 0.5 && zero < 0) zero = i;
    }
    if (one < 0 || zero < 0) {
      t.require("swap_available", true);
      return;
    }
    h(one) = 0.0;
    h(zero) = 1.0;
    target = ModelProjection::make(conj_by(u, Diagonal::make(h, e.tail_pattern()).to_operator()));
  } else {
    const EopOperator v = exp_i(gen::random_compact_hermitian(t.rng, t.m(), t.p(), t.rng.uniform(0.05, 0.7)));
    target = ModelProjection::make(conj_by(v, p.op()));
  }
  const ModelProjection& q = *target;
  const GeodesicExponent g = minimal_geodesic(p, q);
  const double gap = dist(p.op(), q.op());
  t.check("endpoint", dist(geodesic_point(p, g, 1.0), q.op()), 1e-8);
  const auto codiag = [&](const EopOperator& proj) {
    const EopOperator comp = EopOperator::identity(proj.period()) - proj;
    return std::max(operator_norm(proj * g.x * proj), operator_norm(comp * g.x * comp));
  };
  t.check("codiagonal_p", codiag(p.op()), 1e-9);
  t.check("codiagonal_q", codiag(q.op()), 1e-9);
  if (swap_case) {
    t.check("unit_gap_error", std::abs(gap - 1.0), 1e-9);
    t.check("half_pi_length_error", std::abs(g.length - kPi / 2.0), 1e-9);
  } else {
    t.check("arcsin_length_error", std::abs(g.length - std::asin(std::min(1.0, gap))), 1e-7);
  }
}

void separation(Trial& t) {
  const auto perms = nontrivial_residue_perms(t.p(), 5);
  if (perms.empty()) throw Error(ErrorCode::Config, "separation needs period >= 2");
  const EopOperator a = gen::random_dpk(t.rng, t.m(), t.p());
  const EopOperator u = gen::random_unitary(t.rng, t.m(), t.p());
  double worst_member = 0.0, worst_unitary = 0.0;
  for (const auto& tail : perms) {
    const PermutationSpec sigma = PermutationSpec::make(t.rng.permutation(t.m()), tail);
    const EopOperator us = permutation_unitary(sigma);
    worst_member = std::max(worst_member, 1.0 - dist(us, a));
    worst_unitary = std::max(worst_unitary, std::sqrt(2.0) - dist(us, u));
  }
  t.check("member_distance_deficit", worst_member, 1e-9);
  t.check("unitary_distance_deficit", worst_unitary, 1e-9);
}

void stampfli_suite(Trial& t) {
  const PermutationSpec sigma = gen::random_permutation(t.rng, t.m(), t.p(), true);
  const EopOperator u = gen::random_unitary(t.rng, t.m(), t.p());
  // ||Ad U_sigma - Ad U|| is the derivation norm of U^* U_sigma.
  const double d = stampfli_derivation_norm(mul(adjoint(u), permutation_unitary(sigma)));
  t.check("automorphism_distance_deficit", 2.0 - d, 1e-6);

  Vector lambda(t.m()), mu(t.p());
  std::vector<Complex> points;
  for (Index i = 0; i < t.m(); ++i) points.push_back(lambda(i) = 2.0 * t.rng.complex_normal());
  for (Index i = 0; i < t.p(); ++i) points.push_back(mu(i) = 2.0 * t.rng.complex_normal());
  const Matrix v = linalg::exp_i_hermitian(gen::random_hermitian(t.rng, t.m()));
  const EopOperator normal = EopOperator::make(v * lambda.asDiagonal() * v.adjoint(), mu.asDiagonal());
  const StampfliResult s = stampfli(normal);
  const oracle::Circle c = oracle::smallest_enclosing_circle(points);
  t.check("circle_oracle_error", std::abs(s.radius - c.radius), 1e-6);
}

void automorphism(Trial& t) {
  const bool normalizer = t.rng.coin();
  EopOperator u;
  if (normalizer) {
    const PermutationSpec sigma = gen::random_permutation(t.rng, t.m(), t.p(), t.p() > 1 && t.rng.coin());
    u = mul(gen::random_unitary(t.rng, t.m(), t.p()), permutation_unitary(sigma));
  } else {
    const EopOperator z = EopOperator::make(gen::random_hermitian(t.rng, t.m()), gen::random_hermitian(t.rng, t.p()));
    u = exp_i(z);
  }
  const auto witness = is_dpk_automorphism(u);
  const bool probes = is_dpk_automorphism_by_probes(u);
  t.require("routes_agree", witness.has_value() == probes);
  t.require("expected_verdict", witness.has_value() == (normalizer || t.p() == 1));
  if (witness) {
    t.check("witness_reconstruction", dist(witness->word.implementing_unitary(), u), 1e-9);
    const EopOperator a = gen::random_dpk(t.rng, t.m(), t.p());
    t.require("image_member", is_dpk_member(conj_by(u, a)));
  }
}

Generator random_generator(Rng& rng, Index m, Index p) {
  switch (rng.below(3)) {
    case 0: return DiagonalGenerator{gen::random_phase_diagonal(rng, m, p)};
    case 1: return ExponentialGenerator{gen::random_compact_hermitian(rng, m, p, rng.uniform(0.0, 2.0))};
    default: return PermutationGenerator{gen::random_permutation(rng, m, p, p > 1 && rng.coin())};
  }
}

void normal_form_suite(Trial& t) {
  const Index length = 1 + t.rng.below(6);
  std::vector<Generator> word;
  EopOperator product = EopOperator::identity(t.p());
  for (Index k = 0; k < length; ++k) {
    word.push_back(random_generator(t.rng, t.m(), t.p()));
    product = mul(product, generator_unitary(word.back()));
  }
  const AutomorphismWord nf = normal_form(word);
  t.check("unitary_match", dist(nf.implementing_unitary(), product), 1e-9);
  t.exact("exponent_tail", max_abs(nf.x.tail_block()));
  const EopOperator a = gen::random_dpk(t.rng, t.m(), t.p());
  t.check("action_match", dist(apply_automorphism(nf, a), conj_by(product, a)), 1e-9);
}

void match_conjugation(Trial& t) {
  const PermutationSpec sigma = gen::random_permutation(t.rng, t.m(), t.p(), t.p() > 1 && t.rng.coin());
  const EopOperator u = mul(gen::random_unitary(t.rng, t.m(), t.p()), permutation_unitary(sigma));
  const Complex values[3] = {1.0, Complex(-0.5, 2.0), Complex(3.0, -1.0)};
  Vector h(t.m()), tail(t.p());
  for (Index i = 0; i < t.m(); ++i) h(i) = values[t.rng.below(3)];
  for (Index i = 0; i < t.p(); ++i) tail(i) = values[t.rng.below(3)];
  const Diagonal d0 = Diagonal::make(h, tail);
  const AutomorphismWord w = match_finite_spectrum_conjugation(u, d0);
  t.check("conjugation_residual", dist(apply_automorphism(w, d0.to_operator()), conj_by(u, d0.to_operator())), 1e-8);
  t.check("diagonal_factor_trivial", dist(w.w.to_operator(), EopOperator::identity()), 1e-12);
}

void conjugacy(Trial& t) {
  const Index m = t.m(), p = t.p();
  RealVector pattern = RealVector::Zero(p);
  const Index mode = t.rng.below(3);
  if (mode == 1) pattern.setOnes();
  if (mode == 2 && p > 1) pattern(0) = 1.0;
  const Diagonal e = gen::random_diagonal_projection(t.rng, m, pattern);
  // F: same head count, residue-permuted pattern.
  std::vector<Index> tail_perm = t.rng.permutation(p);
  RealVector moved(p);
  for (Index r = 0; r < p; ++r) moved(tail_perm[static_cast<std::size_t>(r)]) = pattern(r);
  const std::vector<Index> order = t.rng.permutation(m);
  Vector fh = Vector::Zero(m);
  for (Index i = 0; i < head_ones(e); ++i) fh(order[static_cast<std::size_t>(i)]) = 1.0;
  const bool mismatch = mode != 2 && m > 0 && t.rng.coin(0.2);
  if (mismatch) fh(order[static_cast<std::size_t>(m - 1)]) = std::abs(fh(order[static_cast<std::size_t>(m - 1)])) > 0.5 ? 0.0 : 1.0;
  const Diagonal f = Diagonal::make(fh, moved.cast<Complex>());
  const ConjugatedProjection pp = projection_from(t.rng, e, 2.0);
  const ConjugatedProjection qq = projection_from(t.rng, f, 2.0);
  if (mismatch) {
    bool refused = false;
    try {
      rank_nullity_conjugacy(pp.p, qq.p);
    } catch (const Error& err) {
      refused = err.code() == ErrorCode::NotConjugate;
    }
    t.require("mismatch_refused", refused);
    return;
  }
  const AutomorphismWord w = rank_nullity_conjugacy(pp.p, qq.p);
  t.check("conjugation_residual", dist(apply_automorphism(w, pp.p.op()), qq.p.op()), 1e-8);
}

void bundle_section_suite(Trial& t) {
  const EopOperator u = gen::random_ball_unitary(t.rng, t.m(), t.p());
  const BundleSection s = bundle_section(u);
  t.check("reconstruction", dist(s.reconstruct(), u), 1e-9);
  const Index p = s.fiber.period();
  t.exact("fiber_tail_identity", max_abs(s.fiber.tail_block() - Matrix::Identity(p, p)));
  t.check("fiber_unitary", unitarity_defect(s.fiber), 1e-9);
}

void pi1_iota_suite(Trial& t) {
  const std::size_t j = static_cast<std::size_t>(t.result.trial % 5);
  std::vector<long long> ej(5, 0);
  ej[j] = 1;
  const Pi1Pair g = pi1_iota(ej);
  t.require("generator_diagonal", g.diagonal == ej);
  t.exact("generator_compact", static_cast<double>(g.compact + 1));

  std::vector<long long> k(3), l(3);
  for (auto& x : k) x = static_cast<long long>(t.rng.below(7)) - 3;
  for (auto& x : l) x = static_cast<long long>(t.rng.below(7)) - 3;
  const Pi1Pair r = pi1_iota(k);
  long long sum = 0;
  for (long long x : k) sum += x;
  t.require("random_diagonal", r.diagonal == k);
  t.exact("random_compact", static_cast<double>(r.compact + sum));

  const UnitaryLoop joined = concatenate(diagonal_generator_loop(k, 64), diagonal_generator_loop(l, 64));
  const Winding w = loop_winding(joined, LoopKind::Diagonal);
  bool additive = true;
  for (std::size_t i = 0; i < 3; ++i) additive = additive && w.head[i] == k[i] + l[i];
  t.require("concatenation_additive", additive);
}

void k0_invariance(Trial& t) {
  const ModelProjection p = gen::random_projection(t.rng, t.m(), t.p(), 3.0);
  const K0Class c = k0_class(p);
  const EopOperator u = exp_i(gen::random_compact_hermitian(t.rng, t.m(), t.p(), t.rng.uniform(0.0, 3.0)));
  const K0Class moved = k0_class(ModelProjection::make(conj_by(u, p.op())));
  t.require("inner_conjugation_invariant", moved == c);

  const Diagonal e = gen::random_diagonal_projection(t.rng, t.m(), gen::random_pattern(t.rng, t.p()));
  if (e.head_size() > 0) {
    const Index i = t.rng.below(e.head_size());
    Vector h = e.head_entries();
    const bool was_one = std::abs(h(i)) > 0.5;
    h(i) = was_one ? 0.0 : 1.0;
    const K0Class before = k0_class(ModelProjection::from_diagonal(e));
    const K0Class after = k0_class(ModelProjection::from_diagonal(Diagonal::make(h, e.tail_pattern())));
    t.exact("flip_changes_z_by_one", static_cast<double>(after.z_part - before.z_part - (was_one ? -1 : 1)));
  }
}

void characters(Trial& t) {
  const EopOperator s = gen::random_dpk(t.rng, t.m(), t.p());
  const EopOperator a = gen::random_dpk(t.rng, t.m(), t.p());
  const Index r = t.rng.below(t.p());
  const Complex ps = character_eval(s, r), pa = character_eval(a, r);
  t.check("multiplicative", std::abs(character_eval(s * a, r) - ps * pa), 1e-12);
  t.check("additive", std::abs(character_eval(s + a, r) - ps - pa), 1e-12);
  t.check("star", std::abs(character_eval(adjoint(s), r) - std::conj(ps)), 0.0);
  const EopOperator k = EopOperator::make(gen::random_matrix(t.rng, t.m(), t.m()), Matrix::Zero(t.p(), t.p()));
  t.exact("vanishes_on_compacts", std::abs(character_eval(k, r)));
  const ResidueCharacter coarse{r + t.p(), 2 * t.p()};
  t.check("modulus_refinement", std::abs(coarse(s) - ps), 0.0);
}

void functionals(Trial& t) {
  const PositiveFunctional phi = gen::random_functional(t.rng, t.m(), t.p());
  const EopOperator a = gen::random_dpk(t.rng, t.m(), t.p());
  const Complex positive = phi(mul(adjoint(a), a));
  t.check("positivity_deficit", -positive.real(), 1e-12);
  t.check("positivity_imag", std::abs(positive.imag()), 1e-12);
  const FunctionalDecomposition d = functional_decompose(phi);
  t.check("decomposition_sum", std::abs(d.normal_part(a) + d.singular_part(a) - phi(a)), 1e-12);
  const EopOperator k = EopOperator::make(a.head(), Matrix::Zero(a.period(), a.period()));
  t.exact("singular_on_compact", std::abs(d.singular_part(k)));
  const Complex trace = (phi.a * a.dense(phi.a.rows())).trace();
  t.check("normal_trace_oracle", std::abs(d.normal_part(a) - trace), 1e-12);
}

using SuiteFn = std::function<void(Trial&, int&)>;

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> suites = [] {
    std::map<std::string, SuiteFn> s;
    const auto plain = [](void (*f)(Trial&)) { return SuiteFn([f](Trial& t, int&) { f(t); }); };
    s["canonical-decomposition"] = plain(canonical_decomposition);
    s["delta-contractive"] = plain(delta_contractive);
    s["membership"] = plain(membership);
    s["closure"] = plain(closure);
    s["norm"] = plain(norm);
    s["fredholm"] = plain(fredholm);
    s["stable-rank"] = plain(stable_rank);
    s["unitary-factorization"] = plain(unitary_factorization);
    s["porta-recht"] = porta_recht_suite;
    s["index"] = plain(index_suite);
    s["index-additivity"] = plain(index_additivity);
    s["zero-index"] = plain(zero_index);
    s["geodesic"] = plain(geodesic);
    s["separation"] = plain(separation);
    s["stampfli"] = plain(stampfli_suite);
    s["automorphism"] = plain(automorphism);
    s["normal-form"] = plain(normal_form_suite);
    s["match-conjugation"] = plain(match_conjugation);
    s["conjugacy"] = plain(conjugacy);
    s["bundle-section"] = plain(bundle_section_suite);
    s["pi1-iota"] = plain(pi1_iota_suite);
    s["k0-invariance"] = plain(k0_invariance);
    s["characters"] = plain(characters);
    s["functionals"] = plain(functionals);
    return s;
  }();
  return suites;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.trials < 1) throw Error(ErrorCode::Config, "trials must be positive");
  if (c.period < 1) throw Error(ErrorCode::Config, "period must be positive");
  if (c.head_size < 0 || c.head_size % c.period != 0)
    throw Error(ErrorCode::Config, "head size must be a non-negative multiple of the period");
  if (c.tolerance && !(*c.tolerance > 0.0)) throw Error(ErrorCode::Config, "tolerance must be positive");
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

SuiteReport run_suite(const ExperimentConfig& config) {
  validate(config);
  const auto it = registry().find(config.suite);
  if (it == registry().end()) throw Error(ErrorCode::Config, "unknown suite '" + config.suite + "'");

  SuiteReport report;
  report.suite = config.suite;
  report.config = config;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < config.trials; ++i) {
    Trial t(config, static_cast<std::uint64_t>(i));
    try {
      it->second(t, report.no_convergence);
    } catch (const NoConvergenceError& e) {
      ++report.no_convergence;
      t.result.pass = false;
      t.result.note = e.what();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Config) throw;
      t.result.pass = false;
      t.result.note = e.what();
    }
    (t.result.pass ? report.passed : report.failed) += 1;
    for (const auto& [name, value] : t.result.residuals) {
      auto w = std::find_if(report.worst.begin(), report.worst.end(), [&](const auto& x) { return x.first == name; });
      if (w == report.worst.end())
        report.worst.emplace_back(name, value);
      else
        w->second = std::max(w->second, value);
    }
    report.cases.push_back(std::move(t.result));
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

io::Json report_to_json(const SuiteReport& r, bool include_meta) {
  io::Json j;
  j["suite"] = r.suite;
  j["seed"] = r.config.seed;
  j["trials"] = r.config.trials;
  j["head_size"] = r.config.head_size;
  j["period"] = r.config.period;
  j["tolerance_override"] = r.config.tolerance ? io::Json(*r.config.tolerance) : io::Json(nullptr);
  j["passed"] = r.passed;
  j["failed"] = r.failed;
  j["no_convergence"] = r.no_convergence;
  io::Json worst = io::Json::object();
  for (const auto& [name, value] : r.worst) worst[name] = value;
  j["worst"] = worst;
  io::Json cases = io::Json::array();
  for (const CaseResult& c : r.cases) {
    io::Json cj;
    cj["trial"] = c.trial;
    cj["pass"] = c.pass;
    io::Json res = io::Json::object();
    for (const auto& [name, value] : c.residuals) res[name] = value;
    cj["residuals"] = res;
    if (!c.note.empty()) cj["note"] = c.note;
    cases.push_back(std::move(cj));
  }
  j["cases"] = cases;
  if (include_meta) {
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["meta"] = {{"wall_time_seconds", r.wall_time_seconds}, {"timestamp", stamp}};
  }
  return j;
}

std::string report_to_csv(const SuiteReport& r) {
  std::vector<std::string> columns;
  for (const auto& [name, value] : r.worst) columns.push_back(name);
  std::ostringstream os;
  os << "trial,pass";
  for (const auto& c : columns) os << ',' << c;
  os << ",note\n";
  for (const CaseResult& c : r.cases) {
    os << c.trial << ',' << (c.pass ? 1 : 0);
    for (const auto& col : columns) {
      os << ',';
      for (const auto& [name, value] : c.residuals)
        if (name == col) {
          os << format_double(value);
          break;
        }
    }
    std::string note = c.note;
    std::replace(note.begin(), note.end(), '"', '\'');
    os << ",\"" << note << "\"\n";
  }
  return os.str();
}

io::Json generate_instance(const ExperimentConfig& config, const std::string& kind, std::uint64_t trial) {
  validate(config);
  Rng rng(trial_seed(config.seed, trial));
  const Index m = config.head_size, p = config.period;
  if (kind == "operator") return io::to_json(gen::random_dpk(rng, m, p));
  if (kind == "unitary") return io::to_json(gen::random_unitary(rng, m, p));
  if (kind == "projection") return io::to_json(gen::random_projection(rng, m, p).op());
  if (kind == "positive") return io::to_json(gen::random_positive(rng, m, p));
  if (kind == "functional") return io::to_json(gen::random_functional(rng, m, p));
  if (kind == "permutation") return io::to_json(gen::random_permutation(rng, m, p, p > 1));
  throw Error(ErrorCode::Config, "unknown instance kind '" + kind + "'");
}

}  // namespace dpk
