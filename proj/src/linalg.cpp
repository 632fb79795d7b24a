#include "dpk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dpk::linalg {

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix out = Matrix::Zero(n, n);
  Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

namespace {

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

}  // namespace

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double min_singular_value(const Matrix& m) {
  if (m.size() == 0) return std::numeric_limits<double>::infinity();
  const RealVector s = singular_values(m);
  return s(s.size() - 1);
}

Index null_dimension(const Matrix& m, double threshold) {
  const RealVector s = singular_values(m);
  Index count = m.cols() - s.size();
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) <= threshold) ++count;
  return count;
}

bool is_diagonal(const Matrix& m, double tolerance) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != j && std::abs(m(i, j)) > tolerance) return false;
  return true;
}

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

std::vector<Complex> eigenvalues(const Matrix& m) {
  std::vector<Complex> out;
  if (m.size() == 0) return out;
  Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  out.reserve(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  std::stable_sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

RealVector hermitian_eigenvalues(const Matrix& h) {
  if (h.size() == 0) return RealVector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix hermitian_function_c(const Matrix& h, const std::function<Complex(double)>& f) {
  if (h.size() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  const Matrix& v = es.eigenvectors();
  Vector fx(es.eigenvalues().size());
  for (Index i = 0; i < fx.size(); ++i) fx(i) = f(es.eigenvalues()(i));
  return v * fx.asDiagonal() * v.adjoint();
}

Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f) {
  return hermitian_part(hermitian_function_c(h, [&](double x) { return Complex(f(x), 0.0); }));
}

Matrix exp_i_hermitian(const Matrix& h) {
  if (is_diagonal(h, 0.0)) {
    Matrix out = Matrix::Zero(h.rows(), h.cols());
    for (Index i = 0; i < h.rows(); ++i) out(i, i) = std::polar(1.0, h(i, i).real());
    return out;
  }
  return hermitian_function_c(h, [](double x) { return std::polar(1.0, x); });
}

Matrix exp_hermitian(const Matrix& h) {
  return hermitian_function(h, [](double x) { return std::exp(x); });
}

Matrix log_positive(const Matrix& a) {
  return hermitian_function(a, [](double x) { return std::log(x); });
}

Matrix sqrt_positive(const Matrix& a) {
  return hermitian_function(a, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

Matrix inv_sqrt_positive(const Matrix& a) {
  return hermitian_function(a, [](double x) { return 1.0 / std::sqrt(x); });
}

double principal_phase(Complex z) {
  constexpr double pi = std::numbers::pi;
  double theta = std::arg(z);  // (-pi, pi]
  if (theta > pi - tol::kBranch) theta = -pi;
  return theta;
}

Matrix log_unitary(const Matrix& u) {
  if (u.size() == 0) return Matrix(0, 0);
  if (is_diagonal(u, 0.0)) {
    Matrix out = Matrix::Zero(u.rows(), u.cols());
    for (Index i = 0; i < u.rows(); ++i) out(i, i) = principal_phase(u(i, i));
    return out;
  }
  // A unitary matrix is normal, so its Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  Vector phases(t.rows());
  for (Index i = 0; i < t.rows(); ++i) phases(i) = principal_phase(t(i, i));
  return hermitian_part(q * phases.asDiagonal() * q.adjoint());
}

std::vector<double> eigenphases(const Matrix& u) {
  std::vector<double> out;
  if (u.size() == 0) return out;
  Eigen::ComplexEigenSolver<Matrix> es(u, false);
  for (Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(principal_phase(es.eigenvalues()(i)));
  return out;
}

Matrix hermitian_eigenspace(const Matrix& h, const std::function<bool(double)>& keep) {
  if (h.size() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  std::vector<Index> cols;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (keep(es.eigenvalues()(i))) cols.push_back(i);
  Matrix out(h.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = es.eigenvectors().col(cols[k]);
  return out;
}

Matrix unitary_polar_factor(const Matrix& m) {
  if (m.size() == 0) return Matrix(m.rows(), m.cols());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace dpk::linalg
