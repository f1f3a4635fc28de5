#include <cstdlib>
#include <string>

#include "lpptw/errors.hpp"
#include "lpptw/kernels.hpp"

namespace lpptw::kernels {
namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, &scalar::theorem_form,
                                   &scalar::path_form};
#if defined(LPPTW_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{Isa::kAvx2, &avx2::theorem_form,
                                 &avx2::path_form};
#endif

const KernelTable& select() {
  if (const char* forced = std::getenv("LPPTW_ISA")) {
    const std::string want(forced);
    if (want == "scalar") return kScalarTable;
    if (want == "avx2" && isa_supported(Isa::kAvx2)) return table(Isa::kAvx2);
  }
#if defined(LPPTW_HAVE_AVX2_KERNELS)
  if (isa_supported(Isa::kAvx2)) return kAvx2Table;
#endif
  return kScalarTable;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(LPPTW_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) {
    throw PreconditionError("kernel ISA '" + std::string(isa_name(isa)) +
                            "' is not supported on this CPU");
  }
#if defined(LPPTW_HAVE_AVX2_KERNELS)
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() {
  static const KernelTable& selected = select();
  return selected;
}

}  // namespace lpptw::kernels
