#include "dpk/topo.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dpk/factor.hpp"

namespace dpk {

namespace {

constexpr double kBallMargin = 1e-9;
constexpr double kLoopUnitary = 1e-9;
constexpr double kMaxGap = 0.5;
constexpr double kKindTolerance = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

long long round_turns(double radians) { return std::llround(radians / kTwoPi); }

std::vector<EopOperator> on_common_grid(const std::vector<EopOperator>& samples) {
  Index m = 0, p = 1;
  for (const EopOperator& s : samples) std::tie(m, p) = common_grid(m, p, s.head_size(), s.period());
  std::vector<EopOperator> out;
  out.reserve(samples.size());
  for (const EopOperator& s : samples) out.push_back(s.expanded(m, p));
  return out;
}

double off_diagonal_size(Matrix m) {
  m.diagonal().setZero();
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

EopOperator BundleSection::reconstruct() const { return mul(diagonal.to_operator(), fiber); }

BundleSection bundle_section(const EopOperator& u) {
  const double defect = unitarity_defect(u);
  if (defect > tol::kUnitary) throw Error(ErrorCode::NotUnitary, "unitarity defect " + std::to_string(defect));
  const double dist = operator_norm(u - EopOperator::identity(u.period()));
  if (dist >= 2.0 - kBallMargin)
    throw Error(ErrorCode::NotInBall, "||U - I|| = " + std::to_string(dist) + " is not below 2");
  if (!is_dpk_member(u)) throw Error(ErrorCode::NotInDpk, "unitary is not in D+K");

  const EopOperator z = log_unitary(u);
  const Diagonal dz = delta(z);
  const Vector head_phase = dz.head_entries().real().cast<Complex>();
  const Vector tail_phase = dz.tail_pattern().real().cast<Complex>();
  const auto expi = [](const Vector& v, double sign) {
    return Vector(v.unaryExpr([sign](Complex x) { return std::polar(1.0, sign * x.real()); }));
  };
  BundleSection s;
  s.diagonal = Diagonal::make(expi(head_phase, 1.0), expi(tail_phase, 1.0));
  const Matrix head = expi(head_phase, -1.0).asDiagonal() * u.head();
  s.fiber = EopOperator::make(head, Matrix::Identity(u.period(), u.period()));
  return s;
}

// ---- loops -------------------------------------------------------------------------

UnitaryLoop UnitaryLoop::make(std::vector<EopOperator> samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "a loop needs at least one sample");
  samples = on_common_grid(samples);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double defect = unitarity_defect(samples[k]);
    if (defect > kLoopUnitary)
      throw Error(ErrorCode::NotUnitary, "sample " + std::to_string(k) + " has defect " + std::to_string(defect));
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double gap = operator_norm(samples[(k + 1) % samples.size()] - samples[k]);
    if (!(gap < kMaxGap))
      throw Error(ErrorCode::StepTooLarge, "gap " + std::to_string(gap) + " after sample " + std::to_string(k));
    worst = std::max(worst, gap);
  }
  return UnitaryLoop(std::move(samples), worst);
}

UnitaryLoop UnitaryLoop::sample(const std::function<EopOperator(double)>& f, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  std::vector<EopOperator> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) samples.push_back(f(static_cast<double>(k) / n));
  return make(std::move(samples));
}

UnitaryLoop concatenate(const UnitaryLoop& a, const UnitaryLoop& b) {
  if (!approx_equal(a.samples().front(), b.samples().front(), 1e-9))
    throw Error(ErrorCode::InvalidArgument, "loops have different base points");
  std::vector<EopOperator> samples = a.samples();
  samples.insert(samples.end(), b.samples().begin(), b.samples().end());
  return UnitaryLoop::make(std::move(samples));
}

Winding loop_winding(const UnitaryLoop& loop, LoopKind kind) {
  const std::vector<EopOperator>& s = loop.samples();
  const std::size_t n = s.size();
  Winding w;
  w.kind = kind;
  if (kind == LoopKind::Diagonal) {
    for (const EopOperator& u : s)
      if (off_diagonal_size(u.head()) > kKindTolerance || off_diagonal_size(u.tail_block()) > kKindTolerance)
        throw Error(ErrorCode::KindMismatch, "diagonal winding needs diagonal samples");
    const auto entry_winding = [&](auto get, Index count) {
      std::vector<long long> out(static_cast<std::size_t>(count));
      for (Index i = 0; i < count; ++i) {
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) total += std::arg(get(s[(k + 1) % n], i) / get(s[k], i));
        out[static_cast<std::size_t>(i)] = round_turns(total);
      }
      return out;
    };
    w.head = entry_winding([](const EopOperator& u, Index i) { return u.head()(i, i); }, s.front().head_size());
    w.tail = entry_winding([](const EopOperator& u, Index i) { return u.tail_block()(i, i); }, s.front().period());
  } else {
    const Index p = s.front().period();
    for (const EopOperator& u : s)
      if ((u.tail_block() - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() > kKindTolerance)
        throw Error(ErrorCode::KindMismatch, "compact winding needs samples with tail I");
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Matrix step = s[k].head().adjoint() * s[(k + 1) % n].head();
      for (double phase : linalg::eigenphases(step)) total += phase;
    }
    w.compact = round_turns(total);
  }
  return w;
}

namespace {

Diagonal phase_diagonal(const std::vector<long long>& k, double t, double sign) {
  Vector head(static_cast<Index>(k.size()));
  for (std::size_t j = 0; j < k.size(); ++j)
    head(static_cast<Index>(j)) = std::polar(1.0, sign * kTwoPi * t * static_cast<double>(k[j]));
  return Diagonal::make(std::move(head), Vector::Ones(1));
}

}  // namespace

UnitaryLoop diagonal_generator_loop(const std::vector<long long>& k, int samples) {
  return UnitaryLoop::sample([&](double t) { return phase_diagonal(k, t, 1.0).to_operator(); }, samples);
}

IotaLoops iota_loops(const std::vector<long long>& k, int samples) {
  return {diagonal_generator_loop(k, samples),
          UnitaryLoop::sample([&](double t) { return phase_diagonal(k, t, -1.0).to_operator(); }, samples)};
}

Pi1Pair pi1_iota(const std::vector<long long>& k, int samples) {
  const IotaLoops loops = iota_loops(k, samples);
  Pi1Pair out;
  out.diagonal = loop_winding(loops.diagonal, LoopKind::Diagonal).head;
  out.compact = loop_winding(loops.compact, LoopKind::Compact).compact;
  return out;
}

// ---- K0 ----------------------------------------------------------------------------

K0Class k0_class(const ModelProjection& p) {
  const Diagonal minimal = normalize(Diagonal::make(Vector(0), p.tail_pattern().cast<Complex>()));
  K0Class c;
  c.tail_pattern = minimal.tail_pattern().real();
  c.z_part = pair_index(p, ModelProjection::from_diagonal(canonical_pattern_projection(c.tail_pattern, 0)));
  return c;
}

K0Class k0_sum(const K0Class& a, const K0Class& b) {
  const auto [x, y] = align(Diagonal::make(Vector(0), a.tail_pattern.cast<Complex>()),
                            Diagonal::make(Vector(0), b.tail_pattern.cast<Complex>()));
  const RealVector sum = (x.tail_pattern() + y.tail_pattern()).real();
  if (sum.maxCoeff() > 1.5) throw Error(ErrorCode::NotOrthogonalPatterns, "tail patterns overlap");
  const Diagonal minimal = normalize(Diagonal::make(Vector(0), sum.cast<Complex>()));
  return {minimal.tail_pattern().real(), a.z_part + b.z_part};
}

bool operator==(const K0Class& a, const K0Class& b) {
  return a.z_part == b.z_part && a.tail_pattern.size() == b.tail_pattern.size() && a.tail_pattern == b.tail_pattern;
}

}  // namespace dpk
