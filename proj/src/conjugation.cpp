#include <algorithm>
#include <cmath>
#include <string>

#include "dpk/autos.hpp"
#include "dpk/factor.hpp"
#include "dpk/proj.hpp"

namespace dpk {

namespace {

constexpr double kValueCluster = 1e-9;
constexpr double kMatchResidual = 1e-8;

std::vector<Complex> distinct_values(const Diagonal& d) {
  std::vector<Complex> values;
  const auto add = [&](Complex z) {
    for (const Complex& v : values)
      if (std::abs(v - z) <= kValueCluster) return;
    values.push_back(z);
  };
  for (Index i = 0; i < d.head_size(); ++i) add(d.head_entries()(i));
  for (Index r = 0; r < d.period(); ++r) add(d.tail_pattern()(r));
  return values;
}

Diagonal indicator(const Diagonal& d, Complex value) {
  const auto bit = [value](Complex z) { return Complex(std::abs(z - value) <= kValueCluster ? 1.0 : 0.0); };
  return Diagonal::make(d.head_entries().unaryExpr(bit), d.tail_pattern().unaryExpr(bit));
}

Diagonal add(const Diagonal& a, const Diagonal& b) {
  const auto [x, y] = align(a, b);
  return Diagonal::make(x.head_entries() + y.head_entries(), x.tail_pattern() + y.tail_pattern());
}

// Permutation carrying the ones of `from` onto the ones of `to` on the head,
// fixing the positions marked in `fixed`, with the given residue permutation.
PermutationSpec carrying_permutation(const Diagonal& from, const Diagonal& to, const Diagonal& fixed,
                                     const std::vector<Index>& tail) {
  const Index m = from.head_size();
  std::vector<Index> src_on, src_off, dst_on, dst_off;
  std::vector<Index> head(static_cast<std::size_t>(m), -1);
  for (Index n = 0; n < m; ++n) {
    if (std::abs(fixed.at(n)) > 0.5) {
      head[static_cast<std::size_t>(n)] = n;
      continue;
    }
    (std::abs(from.at(n)) > 0.5 ? src_on : src_off).push_back(n);
    (std::abs(to.at(n)) > 0.5 ? dst_on : dst_off).push_back(n);
  }
  if (src_on.size() != dst_on.size())
    throw Error(ErrorCode::ModelViolation, "spectral projection and its image have different head ranks");
  for (std::size_t i = 0; i < src_on.size(); ++i) head[static_cast<std::size_t>(src_on[i])] = dst_on[i];
  for (std::size_t i = 0; i < src_off.size(); ++i) head[static_cast<std::size_t>(src_off[i])] = dst_off[i];
  return PermutationSpec::make(std::move(head), tail);
}

}  // namespace

AutomorphismWord match_finite_spectrum_conjugation(const EopOperator& u, const Diagonal& d0) {
  const auto witness = is_dpk_automorphism(u);
  if (!witness) throw Error(ErrorCode::NotDpkAutomorphism, "Ad(U) does not preserve D+K");
  const std::vector<Complex> values = distinct_values(d0);

  auto [m, per] = common_grid(u.head_size(), u.period(), d0.head_size(), d0.period());
  EopOperator v = u.expanded(m, per);
  Diagonal done = Diagonal::constant(0.0, per);
  std::vector<Generator> generators;

  // Each step moves one spectral projection into place while fixing the ones
  // already handled; the last projection is then fixed automatically.
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const Diagonal e = indicator(d0, values[k]);
    const ModelProjection target = ModelProjection::make(mul(mul(v, e.to_operator()), adjoint(v)));
    Diagonal f = zero_index_diagonal(target, &done);

    const auto grid = common_grid(f.head_size(), f.period(), v.head_size(), v.period());
    m = grid.first;
    per = grid.second;
    v = v.expanded(m, per);
    f = f.expanded(m, per);
    const Diagonal ek = e.expanded(m, per);
    const Diagonal fixed = done.expanded(m, per);

    const auto tail_witness = is_dpk_automorphism(v);
    if (!tail_witness) throw Error(ErrorCode::ModelViolation, "residual unitary left the normalizer");
    const PermutationSpec sigma = carrying_permutation(ek, f, fixed, tail_witness->tail_permutation);
    const GeodesicExponent g = conjugating_exponential(target, ModelProjection::from_diagonal(f));

    generators.emplace_back(ExponentialGenerator{g.x});
    generators.emplace_back(PermutationGenerator{sigma});
    const EopOperator step = mul(exp_i(g.x), permutation_unitary(sigma));
    v = mul(adjoint(step), v);
    done = add(done, ek);
  }

  AutomorphismWord word = normal_form(generators);
  const EopOperator d = d0.to_operator();
  const double residual =
      operator_norm(apply_automorphism(word, d) - mul(mul(u, d), adjoint(u)));
  if (residual > kMatchResidual)
    throw NoConvergenceError(generators.size() / 2, residual, "spectral matching did not reproduce U D0 U*");
  return word;
}

}  // namespace dpk
