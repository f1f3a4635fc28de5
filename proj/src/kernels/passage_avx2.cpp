// AVX2 passage kernels: a 4-row wavefront.
//
// Rows are processed in blocks of four, one row per lane. At step t lane l
// handles column t - l, so the cell below lane l (row j-1, same column) is
// exactly what lane l-1 produced on the previous step; lane 0 reads it from
// the rolling buffer that holds the last row of the previous block. Steps
// where some lane is outside [1, N] run lane-by-lane in scalar code with the
// same arithmetic.

#include <immintrin.h>

#include <array>

#include "passage_common.hpp"

namespace lpptw::kernels::avx2 {
namespace {

struct VecMax {
  using Scalar = detail::MaxOp;
  static __m256d apply(__m256d a, __m256d b) { return _mm256_max_pd(a, b); }
};
struct VecMin {
  using Scalar = detail::MinOp;
  static __m256d apply(__m256d a, __m256d b) { return _mm256_min_pd(a, b); }
};

// Lane l <- lane l-1; lane 0 <- `bottom`.
inline __m256d shift_up(__m256d v, double bottom) {
  const __m256d shifted = _mm256_permute4x64_pd(v, _MM_SHUFFLE(2, 1, 0, 0));
  return _mm256_blend_pd(shifted, _mm256_set1_pd(bottom), 0x1);
}

inline double lane3(__m256d v) {
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  return _mm_cvtsd_f64(_mm_unpackhi_pd(hi, hi));
}

enum class Form { kTheorem, kPath };

// One block of four rows starting at `rows[0]`. For the theorem form `buf`
// has n+1 entries (index = column); for the path form n entries
// (index = column - 1).
template <class V, Form form>
void block(const std::array<const double*, 4>& rows, std::size_t n,
           double* buf) {
  using Op = typename V::Scalar;
  const double init = form == Form::kTheorem ? 0.0 : Op::unreachable();
  alignas(32) std::array<double, 4> lane = {init, init, init, init};
  __m256d cur = _mm256_set1_pd(init);
  // Column m (1-based) of the row below lane 0 lives at buf[m] (theorem) or
  // buf[m - 1] (path).
  const std::size_t below_offset = form == Form::kTheorem ? 0 : 1;

  auto scalar_step = [&](std::size_t t) {
    _mm256_store_pd(lane.data(), cur);
    for (int l = 3; l >= 0; --l) {
      if (t <= static_cast<std::size_t>(l) || t - l > n) continue;
      const std::size_t m = t - l;
      const double below = l == 0 ? buf[m - below_offset] : lane[l - 1];
      const double x = rows[l][m - 1];
      if constexpr (form == Form::kTheorem) {
        lane[l] = Op::apply(lane[l] + x, below);
      } else {
        lane[l] = x + Op::apply(lane[l], below);
      }
    }
    if (t >= 4 && t - 3 <= n) buf[t - 3 - below_offset] = lane[3];
    cur = _mm256_load_pd(lane.data());
  };

  const std::size_t last = n + 3;
  std::size_t t = 1;
  for (; t <= last && t < 4; ++t) scalar_step(t);
  for (; t <= n; ++t) {
    const __m256d below = shift_up(cur, buf[t - below_offset]);
    const __m256d x = _mm256_set_pd(rows[3][t - 4], rows[2][t - 3],
                                    rows[1][t - 2], rows[0][t - 1]);
    if constexpr (form == Form::kTheorem) {
      cur = V::apply(_mm256_add_pd(cur, x), below);
    } else {
      cur = _mm256_add_pd(x, V::apply(cur, below));
    }
    buf[t - 3 - below_offset] = lane3(cur);
  }
  for (; t <= last; ++t) scalar_step(t);
}

template <class V, Form form>
double run(std::span<const double> values, std::size_t n_cols,
           std::size_t n_rows) {
  using Op = typename V::Scalar;
  auto buf = form == Form::kTheorem ? detail::theorem_initial_buffer<Op>(n_cols)
                                    : detail::path_initial_buffer<Op>(n_cols);
  std::size_t j = 0;
  for (; j + 4 <= n_rows; j += 4) {
    const std::array<const double*, 4> rows = {
        values.data() + j * n_cols, values.data() + (j + 1) * n_cols,
        values.data() + (j + 2) * n_cols, values.data() + (j + 3) * n_cols};
    block<V, form>(rows, n_cols, buf.data());
  }
  for (; j < n_rows; ++j) {
    if constexpr (form == Form::kTheorem) {
      detail::theorem_row<Op>(values.data() + j * n_cols, n_cols, buf.data());
    } else {
      detail::path_row<Op>(values.data() + j * n_cols, n_cols, buf.data());
    }
  }
  return form == Form::kTheorem ? buf[n_cols] : buf[n_cols - 1];
}

}  // namespace

double theorem_form(std::span<const double> values, std::size_t n_cols,
                    std::size_t n_rows, Extremum op) {
  return op == Extremum::kMax
             ? run<VecMax, Form::kTheorem>(values, n_cols, n_rows)
             : run<VecMin, Form::kTheorem>(values, n_cols, n_rows);
}

double path_form(std::span<const double> values, std::size_t n_cols,
                 std::size_t n_rows, Extremum op) {
  return op == Extremum::kMax
             ? run<VecMax, Form::kPath>(values, n_cols, n_rows)
             : run<VecMin, Form::kPath>(values, n_cols, n_rows);
}

}  // namespace lpptw::kernels::avx2
