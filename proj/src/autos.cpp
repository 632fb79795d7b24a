#include "dpk/autos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dpk/factor.hpp"

namespace dpk {

namespace {

constexpr double kMonomialZero = 1e-9;

bool is_permutation(const std::vector<Index>& v) {
  std::vector<bool> seen(v.size(), false);
  for (Index x : v) {
    if (x < 0 || x >= static_cast<Index>(v.size()) || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = true;
  }
  return true;
}

std::vector<Index> invert(const std::vector<Index>& v) {
  std::vector<Index> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(v[i])] = static_cast<Index>(i);
  return out;
}

Matrix permutation_matrix(const std::vector<Index>& v) {
  const Index n = static_cast<Index>(v.size());
  Matrix out = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) out(v[static_cast<std::size_t>(j)], j) = 1.0;
  return out;
}

std::pair<Index, Index> grid3(std::pair<Index, Index> g, Index m, Index p) {
  return common_grid(g.first, g.second, m, p);
}

struct WordOnGrid {
  Diagonal w;
  EopOperator x;
  PermutationSpec sigma;
};

WordOnGrid on_grid(const AutomorphismWord& word, std::pair<Index, Index> g) {
  return {word.w.expanded(g.first, g.second), word.x.expanded(g.first, g.second),
          word.sigma.expanded(g.first, g.second)};
}

std::pair<Index, Index> word_grid(const AutomorphismWord& word) {
  auto g = common_grid(word.w.head_size(), word.w.period(), word.x.head_size(), word.x.period());
  return grid3(g, word.sigma.head_size(), word.sigma.period());
}

bool is_zero_or_empty(const EopOperator& x) { return x.head().isZero(0.0) && x.tail_block().isZero(0.0); }

EopOperator conjugate_by(const EopOperator& v, const EopOperator& t) { return mul(mul(v, t), adjoint(v)); }

void validate(const Generator& g) {
  if (const auto* d = std::get_if<DiagonalGenerator>(&g)) {
    const auto off_circle = [](const Vector& v) {
      return v.size() > 0 && (v.cwiseAbs().array() - 1.0).abs().maxCoeff() > tol::kUnitary;
    };
    if (off_circle(d->w.head_entries()) || off_circle(d->w.tail_pattern()))
      throw Error(ErrorCode::NotUnitary, "diagonal generator has entries off the unit circle");
  } else if (const auto* x = std::get_if<ExponentialGenerator>(&g)) {
    if (!x->x.has_zero_tail()) throw Error(ErrorCode::InvalidArgument, "exponential generator must be compact");
    if (!is_self_adjoint(x->x, tol::kUnitary))
      throw Error(ErrorCode::InvalidArgument, "exponential generator must be self-adjoint");
  }
}

template <class F>
std::pair<double, double> golden_minimize(const F& f, double lo, double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace

// ---- permutations ------------------------------------------------------------

PermutationSpec::PermutationSpec() : head_(), tail_{0} {}

PermutationSpec PermutationSpec::make(std::vector<Index> head_perm, std::vector<Index> tail_residue_perm) {
  if (tail_residue_perm.empty()) throw Error(ErrorCode::InvalidArgument, "residue permutation must be non-empty");
  if (head_perm.size() % tail_residue_perm.size() != 0)
    throw Error(ErrorCode::Alignment, "period must divide the head size");
  if (!is_permutation(head_perm) || !is_permutation(tail_residue_perm))
    throw Error(ErrorCode::InvalidArgument, "not a permutation");
  return PermutationSpec(std::move(head_perm), std::move(tail_residue_perm));
}

PermutationSpec PermutationSpec::identity(Index head_size, Index period) {
  std::vector<Index> h(static_cast<std::size_t>(head_size)), t(static_cast<std::size_t>(period));
  std::iota(h.begin(), h.end(), Index{0});
  std::iota(t.begin(), t.end(), Index{0});
  return make(std::move(h), std::move(t));
}

Index PermutationSpec::operator()(Index n) const {
  if (n < head_size()) return head_[static_cast<std::size_t>(n)];
  const Index r = n % period();
  return n - r + tail_[static_cast<std::size_t>(r)];
}

PermutationSpec PermutationSpec::expanded(Index m, Index p) const {
  if (m < head_size() || p % period() != 0 || (p > 0 && m % p != 0))
    throw Error(ErrorCode::Alignment, "invalid expansion of a permutation");
  std::vector<Index> h(static_cast<std::size_t>(m)), t(static_cast<std::size_t>(p));
  for (Index n = 0; n < m; ++n) h[static_cast<std::size_t>(n)] = (*this)(n);
  for (Index r = 0; r < p; ++r) t[static_cast<std::size_t>(r)] = r - r % period() + tail_[static_cast<std::size_t>(r % period())];
  return PermutationSpec(std::move(h), std::move(t));
}

PermutationSpec PermutationSpec::inverse() const { return PermutationSpec(invert(head_), invert(tail_)); }

bool PermutationSpec::has_infinite_support() const {
  for (std::size_t r = 0; r < tail_.size(); ++r)
    if (tail_[r] != static_cast<Index>(r)) return true;
  return false;
}

bool PermutationSpec::is_identity() const {
  if (has_infinite_support()) return false;
  for (std::size_t n = 0; n < head_.size(); ++n)
    if (head_[n] != static_cast<Index>(n)) return false;
  return true;
}

PermutationSpec compose(const PermutationSpec& a, const PermutationSpec& b) {
  const auto [m, p] = common_grid(a.head_size(), a.period(), b.head_size(), b.period());
  const PermutationSpec ea = a.expanded(m, p);
  const PermutationSpec eb = b.expanded(m, p);
  std::vector<Index> h(static_cast<std::size_t>(m)), t(static_cast<std::size_t>(p));
  for (std::size_t n = 0; n < h.size(); ++n) h[n] = ea.head_perm()[static_cast<std::size_t>(eb.head_perm()[n])];
  for (std::size_t r = 0; r < t.size(); ++r)
    t[r] = ea.tail_residue_perm()[static_cast<std::size_t>(eb.tail_residue_perm()[r])];
  return PermutationSpec::make(std::move(h), std::move(t));
}

EopOperator permutation_unitary(const PermutationSpec& sigma) {
  return EopOperator::make(permutation_matrix(sigma.head_perm()), permutation_matrix(sigma.tail_residue_perm()));
}

Diagonal permute_diagonal(const PermutationSpec& sigma, const Diagonal& w) {
  const auto [m, p] = common_grid(sigma.head_size(), sigma.period(), w.head_size(), w.period());
  const PermutationSpec s = sigma.expanded(m, p);
  const Diagonal d = w.expanded(m, p);
  Vector h(m), t(p);
  for (Index n = 0; n < m; ++n) h(s.head_perm()[static_cast<std::size_t>(n)]) = d.head_entries()(n);
  for (Index r = 0; r < p; ++r) t(s.tail_residue_perm()[static_cast<std::size_t>(r)]) = d.tail_pattern()(r);
  return Diagonal::make(std::move(h), std::move(t));
}

// ---- words -------------------------------------------------------------------

AutomorphismWord AutomorphismWord::identity() {
  return {Diagonal::constant(1.0), EopOperator::zero(), PermutationSpec::identity()};
}

EopOperator AutomorphismWord::implementing_unitary() const {
  return mul(mul(w.to_operator(), exp_i(x)), permutation_unitary(sigma));
}

EopOperator apply_automorphism(const AutomorphismWord& word, const EopOperator& t) {
  return conjugate_by(word.implementing_unitary(), t);
}

EopOperator generator_unitary(const Generator& g) {
  validate(g);
  if (const auto* d = std::get_if<DiagonalGenerator>(&g)) return d->w.to_operator();
  if (const auto* x = std::get_if<ExponentialGenerator>(&g)) return exp_i(x->x);
  return permutation_unitary(std::get<PermutationGenerator>(g).sigma);
}

AutomorphismWord normal_form(const std::vector<Generator>& generators) {
  AutomorphismWord word = AutomorphismWord::identity();
  for (const Generator& g : generators) {
    validate(g);
    auto grid = word_grid(word);
    if (const auto* d = std::get_if<DiagonalGenerator>(&g)) {
      grid = grid3(grid, d->w.head_size(), d->w.period());
      WordOnGrid cur = on_grid(word, grid);
      // U_sigma D_v = D_{sigma(v)} U_sigma, then e^{iX} D = D e^{i D* X D}.
      const Diagonal moved = permute_diagonal(cur.sigma, d->w.expanded(grid.first, grid.second));
      const EopOperator dm = moved.to_operator();
      word.w = mul(cur.w, moved);
      word.x = EopOperator::make(linalg::hermitian_part(mul(mul(adjoint(dm), cur.x), dm).head()),
                                 Matrix::Zero(grid.second, grid.second));
      word.sigma = cur.sigma;
    } else if (const auto* x = std::get_if<ExponentialGenerator>(&g)) {
      grid = grid3(grid, x->x.head_size(), x->x.period());
      WordOnGrid cur = on_grid(word, grid);
      const EopOperator us = permutation_unitary(cur.sigma);
      const EopOperator moved = conjugate_by(us, x->x.expanded(grid.first, grid.second));
      Matrix head;
      if (is_zero_or_empty(cur.x)) {
        head = linalg::hermitian_part(moved.head());
      } else if (is_zero_or_empty(moved)) {
        head = cur.x.head();
      } else {
        head = linalg::log_unitary(linalg::exp_i_hermitian(cur.x.head()) * linalg::exp_i_hermitian(moved.head()));
      }
      word.w = cur.w;
      word.x = EopOperator::make(std::move(head), Matrix::Zero(grid.second, grid.second));
      word.sigma = cur.sigma;
    } else {
      word.sigma = compose(word.sigma, std::get<PermutationGenerator>(g).sigma);
    }
  }
  word.w = normalize(word.w);
  word.x = normalize(word.x);
  return word;
}

std::vector<EopOperator> probe_basis(Index head_size, Index period) {
  std::vector<EopOperator> probes;
  probes.reserve(static_cast<std::size_t>(head_size * head_size + period));
  for (Index i = 0; i < head_size; ++i)
    for (Index j = 0; j < head_size; ++j) {
      Matrix h = Matrix::Zero(head_size, head_size);
      h(i, j) = 1.0;
      probes.push_back(EopOperator::make(std::move(h), Matrix::Zero(period, period)));
    }
  for (Index r = 0; r < period; ++r) {
    Matrix t = Matrix::Zero(period, period);
    t(r, r) = 1.0;
    probes.push_back(EopOperator::make(Matrix::Zero(head_size, head_size), std::move(t)));
  }
  return probes;
}

double action_distance(const EopOperator& v1, const EopOperator& v2) {
  const auto [a, b] = align(v1, v2);
  double worst = 0.0;
  for (const EopOperator& probe : probe_basis(a.head_size(), a.period()))
    worst = std::max(worst, operator_norm(conjugate_by(a, probe) - conjugate_by(b, probe)));
  return worst;
}

// ---- D+K automorphisms ---------------------------------------------------------

std::optional<DpkAutomorphismWitness> is_dpk_automorphism(const EopOperator& u) {
  const double defect = unitarity_defect(u);
  if (defect > tol::kUnitary) throw Error(ErrorCode::NotUnitary, "unitarity defect " + std::to_string(defect));
  const Matrix& t = u.tail_block();
  const Index p = u.period();
  std::vector<Index> tau(static_cast<std::size_t>(p), -1);
  std::vector<bool> row_used(static_cast<std::size_t>(p), false);
  Vector phases(p);
  for (Index j = 0; j < p; ++j) {
    Index hit = -1;
    for (Index i = 0; i < p; ++i) {
      if (std::abs(t(i, j)) <= kMonomialZero) continue;
      if (hit >= 0) return std::nullopt;
      hit = i;
    }
    if (hit < 0 || row_used[static_cast<std::size_t>(hit)]) return std::nullopt;
    row_used[static_cast<std::size_t>(hit)] = true;
    tau[static_cast<std::size_t>(j)] = hit;
    phases(hit) = t(hit, j) / std::abs(t(hit, j));
  }

  DpkAutomorphismWitness witness;
  witness.tail_phases = phases;
  witness.tail_permutation = tau;
  const PermutationSpec sigma = PermutationSpec::make(PermutationSpec::identity(u.head_size(), p).head_perm(), tau);
  // U U_sigma^* has head U_head and tail exactly D_w.
  const EopOperator v = EopOperator::make(u.head(), phases.asDiagonal().toDenseMatrix());
  UnitaryFactorization f = unitary_factorize(v);
  witness.word = {std::move(f.diagonal_unitary), std::move(f.exponent), sigma};
  return witness;
}

bool is_dpk_automorphism_by_probes(const EopOperator& u) {
  const double defect = unitarity_defect(u);
  if (defect > tol::kUnitary) throw Error(ErrorCode::NotUnitary, "unitarity defect " + std::to_string(defect));
  const Index p = u.period();
  for (Index r = 0; r < p; ++r) {
    Matrix t = Matrix::Zero(p, p);
    t(r, r) = 1.0;
    const EopOperator image = conjugate_by(u, EopOperator::make(Matrix::Zero(u.head_size(), u.head_size()), t));
    Matrix off = image.tail_block();
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > kMonomialZero) return false;
  }
  return true;
}

// ---- Stampfli ------------------------------------------------------------------

StampfliResult stampfli(const EopOperator& a, double tolerance) {
  // (M - l)^*(M - l) = M^*M - conj(l) M - l M^* + |l|^2, assembled per block.
  struct Gram {
    Matrix mm, m;
    double top(Complex lambda) const {
      if (m.size() == 0) return 0.0;
      Matrix g = mm - std::conj(lambda) * m - lambda * m.adjoint();
      g.diagonal().array() += std::norm(lambda);
      Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
      return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }
  };
  const Gram head{a.head().adjoint() * a.head(), a.head()};
  const Gram tail{a.tail_block().adjoint() * a.tail_block(), a.tail_block()};
  const auto f = [&](double re, double im) {
    const Complex lambda(re, im);
    return std::max(head.top(lambda), tail.top(lambda));
  };

  StampfliResult result;
  const double radius = operator_norm(a);
  if (radius == 0.0) return result;

  const double inner_tol = 0.1 * tolerance;
  const auto over_im = [&](double re) {
    return golden_minimize([&](double im) { return f(re, im); }, -radius, radius, inner_tol);
  };
  const auto [best_re, ignored] = golden_minimize([&](double re) { return over_im(re).second; }, -radius, radius,
                                                  inner_tol);
  (void)ignored;
  double re = best_re;
  double im = over_im(re).first;
  double value = f(re, im);

  // Compass polish; the outer value is convex so local descent is global.
  double step = 10.0 * tolerance;
  while (step > 1e-14) {
    bool moved = false;
    for (const auto& [dr, di] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
      const double cand = f(re + dr * step, im + di * step);
      if (cand < value) {
        value = cand;
        re += dr * step;
        im += di * step;
        moved = true;
      }
    }
    if (!moved) step /= 2.0;
  }
  if (!std::isfinite(value)) throw NoConvergenceError(0, value, "Stampfli minimization");
  result.center = Complex(re, im);
  result.radius = value;
  result.derivation_norm = 2.0 * value;
  return result;
}

double stampfli_derivation_norm(const EopOperator& a, double tolerance) {
  return stampfli(a, tolerance).derivation_norm;
}

}  // namespace dpk
