#pragma once

// Dense kernels shared by every module. All inputs are small (desk scale,
// n <= a few hundred), so everything is computed with Eigen's dense solvers.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace dpk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
inline constexpr double kRepresentation = 1e-12;  // entrywise equality of representations
inline constexpr double kInvertible = 1e-10;      // smallest singular value threshold
inline constexpr double kUnitary = 1e-10;
inline constexpr double kProjection = 1e-10;
inline constexpr double kEigenCluster = 1e-8;  // snapping of +-1 eigenvalues
inline constexpr double kBranch = 1e-12;       // eigenphases this close to pi map to -pi
inline constexpr double kPhaseZero = 1e-12;    // |d| below this gets phase 0
}  // namespace tol

namespace linalg {

Matrix hermitian_part(const Matrix& m);
Matrix block_diagonal(const std::vector<Matrix>& blocks);

/// Largest singular value; 0 for an empty matrix.
double spectral_norm(const Matrix& m);
/// Smallest singular value; +inf for an empty matrix.
double min_singular_value(const Matrix& m);
/// Number of singular values at or below `threshold`.
Index null_dimension(const Matrix& m, double threshold);

bool is_diagonal(const Matrix& m, double tolerance);
bool all_finite(const Matrix& m);

/// Eigenvalues sorted by (real, imag).
std::vector<Complex> eigenvalues(const Matrix& m);
/// Ascending eigenvalues of the Hermitian part of `h`.
RealVector hermitian_eigenvalues(const Matrix& h);

/// Applies a real function to the spectrum of a Hermitian matrix.
Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f);
/// Complex-valued spectral function of a Hermitian matrix.
Matrix hermitian_function_c(const Matrix& h, const std::function<Complex(double)>& f);

Matrix exp_i_hermitian(const Matrix& h);  // e^{iH}
Matrix exp_hermitian(const Matrix& h);    // e^{H}
Matrix log_positive(const Matrix& a);     // principal log of A > 0
Matrix sqrt_positive(const Matrix& a);
Matrix inv_sqrt_positive(const Matrix& a);

/// Hermitian X with e^{iX} = U and spectrum in [-pi, pi). Eigenphases within
/// tol::kBranch of +pi are mapped to exactly -pi. Diagonal inputs are handled
/// entrywise so the result is exactly diagonal.
Matrix log_unitary(const Matrix& u);

/// Principal eigenphases of a unitary (normal) matrix, unsorted.
std::vector<double> eigenphases(const Matrix& u);

/// Phase in [-pi, pi) with the branch convention above.
double principal_phase(Complex z);

/// Orthonormal basis (columns) of the eigenvectors of Hermitian `h` whose
/// eigenvalue satisfies `keep`.
Matrix hermitian_eigenspace(const Matrix& h, const std::function<bool(double)>& keep);

/// Unitary polar factor of a square matrix.
Matrix unitary_polar_factor(const Matrix& m);

}  // namespace linalg
}  // namespace dpk
