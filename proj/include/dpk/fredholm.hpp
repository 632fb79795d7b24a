#pragma once

#include <optional>
#include <utility>

#include "dpk/eop.hpp"

namespace dpk {

struct InvertibilityResult {
  bool invertible = false;
  std::optional<EopOperator> inverse;
  double min_singular_value = 0.0;  // over head and tail block
};

/// Block-wise test: both head and tail block need smallest singular value
/// above tol::kInvertible.
InvertibilityResult is_invertible(const EopOperator& t);

/// T = D0 + K0 with D0 an invertible diagonal and K0 zero-tail. Diagonal
/// positions with |d_n| <= tol::kInvertible are bumped by r, half the smallest
/// modulus among the remaining entries.
std::pair<Diagonal, EopOperator> invertible_diagonal_decomposition(const EopOperator& t);

/// Invertible operator within 3*epsilon of T. Diagonal entries smaller than
/// epsilon are replaced by epsilon; if the head is still singular the smallest
/// singular directions are lifted by min(1e-6, epsilon/4), at most 3 times.
EopOperator invertible_approx(const EopOperator& t, double epsilon);

struct FredholmData {
  bool is_fredholm = false;
  /// Kernel/cokernel dimensions and index are only finite for Fredholm input;
  /// otherwise the tail contributes an infinite-dimensional kernel.
  std::optional<Index> kernel_dim;
  std::optional<Index> cokernel_dim;
  std::optional<Index> index;
  bool infinite_kernel = false;
  double tail_min_singular_value = 0.0;
};

FredholmData fredholm_data(const EopOperator& t);

enum class IsometryKind { NotIsometry, Unitary };

/// A D+K isometry is always unitary; V*V = I without VV* = I raises
/// ModelViolation.
IsometryKind isometry_classify(const EopOperator& v);

}  // namespace dpk
