#pragma once

// Shared scalar building blocks for the passage kernels. The comparison form
// `a > b ? a : b` matches the semantics of the x86 max/min instructions
// (second operand returned on ties), which keeps the scalar and vector
// kernels bit-identical even for signed zeros.

#include <cstddef>
#include <limits>
#include <vector>

#include "lpptw/kernels.hpp"

// Internal linkage: this header is also compiled with -mavx2, and shared
// inline definitions must not leak AVX2 code into the scalar objects.
namespace lpptw::kernels::detail {
namespace {

struct MaxOp {
  static double apply(double a, double b) { return a > b ? a : b; }
  // Identity element: the value of an unreachable cell.
  static constexpr double unreachable() {
    return -std::numeric_limits<double>::infinity();
  }
};

struct MinOp {
  static double apply(double a, double b) { return a < b ? a : b; }
  static constexpr double unreachable() {
    return std::numeric_limits<double>::infinity();
  }
};

// Theorem-form row update over columns 1..n of `buf` (buf[0] holds T(0,j)=0).
template <class Op>
inline void theorem_row(const double* x, std::size_t n, double* buf) {
  double cur = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    cur = Op::apply(cur + x[m - 1], buf[m]);
    buf[m] = cur;
  }
}

// Path-form row update over columns 0..n-1 of `buf`.
template <class Op>
inline void path_row(const double* x, std::size_t n, double* buf) {
  double cur = Op::unreachable();
  for (std::size_t i = 0; i < n; ++i) {
    cur = x[i] + Op::apply(cur, buf[i]);
    buf[i] = cur;
  }
}

// Row 0 of the theorem-form table: T(0,0) = 0, T(m,0) unreachable.
template <class Op>
inline std::vector<double> theorem_initial_buffer(std::size_t n) {
  std::vector<double> buf(n + 1, Op::unreachable());
  buf[0] = 0.0;
  return buf;
}

// Virtual row below row 1 of the path-form table: only (1,1) is entered,
// from a zero-valued source.
template <class Op>
inline std::vector<double> path_initial_buffer(std::size_t n) {
  std::vector<double> buf(n, Op::unreachable());
  buf[0] = 0.0;
  return buf;
}

}  // namespace
}  // namespace lpptw::kernels::detail
