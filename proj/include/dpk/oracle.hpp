#pragma once

// Independent reference computations used to cross-check the library:
// dense embeddings, brute-force geometry and principal angles.

#include <vector>

#include "dpk/eop.hpp"

namespace dpk::oracle {

/// n - rank of the top-left n x n corner (full-pivot LU, relative threshold 1e-9).
Index dense_kernel_dim(const EopOperator& t, Index n);

/// Largest singular value of the top-left n x n corner.
double dense_norm(const EopOperator& t, Index n);

struct Circle {
  Complex center;
  double radius = 0.0;
};

/// Smallest circle containing every point, by enumeration of the circles
/// through two (as diameter) or three points.
Circle smallest_enclosing_circle(const std::vector<Complex>& points);

/// Largest principal angle between the ranges of two Hermitian projection
/// matrices of equal rank.
double largest_principal_angle(const Matrix& p, const Matrix& q);

}  // namespace dpk::oracle
