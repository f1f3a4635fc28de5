#include "passage_common.hpp"

namespace lpptw::kernels::scalar {
namespace {

template <class Op>
double theorem_form_impl(std::span<const double> values, std::size_t n_cols,
                         std::size_t n_rows) {
  auto buf = detail::theorem_initial_buffer<Op>(n_cols);
  for (std::size_t j = 0; j < n_rows; ++j) {
    detail::theorem_row<Op>(values.data() + j * n_cols, n_cols, buf.data());
  }
  return buf[n_cols];
}

template <class Op>
double path_form_impl(std::span<const double> values, std::size_t n_cols,
                      std::size_t n_rows) {
  auto buf = detail::path_initial_buffer<Op>(n_cols);
  for (std::size_t j = 0; j < n_rows; ++j) {
    detail::path_row<Op>(values.data() + j * n_cols, n_cols, buf.data());
  }
  return buf[n_cols - 1];
}

}  // namespace

double theorem_form(std::span<const double> values, std::size_t n_cols,
                    std::size_t n_rows, Extremum op) {
  return op == Extremum::kMax
             ? theorem_form_impl<detail::MaxOp>(values, n_cols, n_rows)
             : theorem_form_impl<detail::MinOp>(values, n_cols, n_rows);
}

double path_form(std::span<const double> values, std::size_t n_cols,
                 std::size_t n_rows, Extremum op) {
  return op == Extremum::kMax
             ? path_form_impl<detail::MaxOp>(values, n_cols, n_rows)
             : path_form_impl<detail::MinOp>(values, n_cols, n_rows);
}

}  // namespace lpptw::kernels::scalar
