#pragma once

// Passage-time dynamic-programming kernels.
//
// Every kernel exists as a portable scalar reference and, where the CPU
// allows it, an AVX2 variant. The AVX2 variant performs the same per-cell
// arithmetic in the same order, so both return bit-identical results; the
// equivalence tests rely on this. `active()` picks the widest supported ISA
// at first use; setting LPPTW_ISA=scalar in the environment forces the
// reference kernels.
//
// Layout: `values` holds n_rows rows of n_cols weights, row-major, so the
// weight of column i (0-based) in row j is values[j * n_cols + i].

#include <cstddef>
#include <span>
#include <string_view>

namespace lpptw::kernels {

enum class Extremum { kMax, kMin };
enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

// Theorem form: optimum over 0 = i_0 <= ... <= i_k = N of
//   sum_j sum_{i in (i_{j-1}, i_j]} X_i^j
// (disjoint segments, empty rows allowed). Recurrence
//   T(m, j) = op(T(m-1, j) + X_m^j, T(m, j-1)),  T(0, j) = 0.
using TheoremFormFn = double (*)(std::span<const double> values,
                                 std::size_t n_cols, std::size_t n_rows,
                                 Extremum op);

// Path form: optimum over up/right lattice paths (1,1) -> (N,k) of the sum
// of visited weights. Recurrence G(i, j) = X_i^j + op(G(i-1, j), G(i, j-1)).
using PathFormFn = double (*)(std::span<const double> values,
                              std::size_t n_cols, std::size_t n_rows,
                              Extremum op);

struct KernelTable {
  Isa isa;
  TheoremFormFn theorem_form;
  PathFormFn path_form;
};

bool isa_supported(Isa isa);

// Throws PreconditionError if `isa` is not supported on this CPU.
const KernelTable& table(Isa isa);

// Runtime-selected kernels.
const KernelTable& active();

namespace scalar {
double theorem_form(std::span<const double> values, std::size_t n_cols,
                    std::size_t n_rows, Extremum op);
double path_form(std::span<const double> values, std::size_t n_cols,
                 std::size_t n_rows, Extremum op);
}  // namespace scalar

#if defined(LPPTW_HAVE_AVX2_KERNELS)
namespace avx2 {
double theorem_form(std::span<const double> values, std::size_t n_cols,
                    std::size_t n_rows, Extremum op);
double path_form(std::span<const double> values, std::size_t n_cols,
                 std::size_t n_rows, Extremum op);
}  // namespace avx2
#endif

}  // namespace lpptw::kernels
