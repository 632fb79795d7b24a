#include "dpk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpk::oracle {

Index dense_kernel_dim(const EopOperator& t, Index n) {
  Eigen::FullPivLU<Matrix> lu(t.dense(n));
  lu.setThreshold(1e-9);
  return n - lu.rank();
}

double dense_norm(const EopOperator& t, Index n) {
  Eigen::JacobiSVD<Matrix> svd(t.dense(n));
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

namespace {

bool contains_all(const Circle& c, const std::vector<Complex>& points) {
  const double slack = 1e-12 * std::max(1.0, c.radius);
  return std::all_of(points.begin(), points.end(),
                     [&](Complex z) { return std::abs(z - c.center) <= c.radius + slack; });
}

bool circumcircle(Complex a, Complex b, Complex c, Circle& out) {
  const double d = 2.0 * (a.real() * (b.imag() - c.imag()) + b.real() * (c.imag() - a.imag()) +
                          c.real() * (a.imag() - b.imag()));
  if (std::abs(d) < 1e-14) return false;
  const double a2 = std::norm(a), b2 = std::norm(b), c2 = std::norm(c);
  const double ux = (a2 * (b.imag() - c.imag()) + b2 * (c.imag() - a.imag()) + c2 * (a.imag() - b.imag())) / d;
  const double uy = (a2 * (c.real() - b.real()) + b2 * (a.real() - c.real()) + c2 * (b.real() - a.real())) / d;
  out.center = Complex(ux, uy);
  out.radius = std::abs(a - out.center);
  return true;
}

}  // namespace

Circle smallest_enclosing_circle(const std::vector<Complex>& points) {
  if (points.empty()) return {};
  Circle best{points.front(), 0.0};
  if (contains_all(best, points)) return best;
  best.radius = std::numeric_limits<double>::infinity();
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Circle c{(points[i] + points[j]) / 2.0, std::abs(points[i] - points[j]) / 2.0};
      if (c.radius < best.radius && contains_all(c, points)) best = c;
      for (std::size_t k = j + 1; k < n; ++k) {
        Circle cc;
        if (circumcircle(points[i], points[j], points[k], cc) && cc.radius < best.radius && contains_all(cc, points))
          best = cc;
      }
    }
  return best;
}

double largest_principal_angle(const Matrix& p, const Matrix& q) {
  const auto range = [](const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    std::vector<Index> keep;
    for (Index i = 0; i < h.rows(); ++i)
      if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
    Matrix b(h.rows(), static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) b.col(static_cast<Index>(k)) = es.eigenvectors().col(keep[k]);
    return b;
  };
  const Matrix bp = range(p);
  const Matrix bq = range(q);
  if (bp.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(bp.adjoint() * bq);
  const double smallest = svd.singularValues()(svd.singularValues().size() - 1);
  return std::acos(std::clamp(smallest, 0.0, 1.0));
}

}  // namespace dpk::oracle
