#pragma once

#include <functional>
#include <initializer_list>

#include <doctest.h>

#include "dpk/eop.hpp"

namespace testing {

using dpk::Complex;
using dpk::EopOperator;
using dpk::Index;
using dpk::Matrix;
using dpk::Vector;

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const Complex& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<Complex> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (const Complex& x : values) v(i++) = x;
  return v;
}

inline EopOperator op(std::initializer_list<std::initializer_list<Complex>> head,
                      std::initializer_list<std::initializer_list<Complex>> tail) {
  return EopOperator::make(mat(head), mat(tail));
}

inline EopOperator diag_op(std::initializer_list<Complex> head, std::initializer_list<Complex> tail) {
  return dpk::Diagonal::make(vec(head), vec(tail)).to_operator();
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Entrywise distance of the top-left n x n corners.
inline double corner_distance(const EopOperator& a, const EopOperator& b, Index n) {
  return max_abs(a.dense(n) - b.dense(n));
}

/// Dense size that covers the heads of both operators plus `blocks` common tail blocks.
inline Index cover(const EopOperator& a, const EopOperator& b, Index blocks = 3) {
  const auto [m, p] = dpk::common_grid(a.head_size(), a.period(), b.head_size(), b.period());
  return m + blocks * p;
}

inline dpk::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const dpk::Error& e) {
    return e.code();
  }
  FAIL("expected a dpk::Error");
  return dpk::ErrorCode::Config;
}

}  // namespace testing
