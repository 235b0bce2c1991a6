#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace cylt::kernels {

namespace {

const KernelTable kScalar{
    "scalar",          scalar::dot,           scalar::axpy,
    scalar::xpby,      scalar::mul,           scalar::apply_stencil,
    scalar::hamilton_jacobi,
};

#if defined(CYLT_HAVE_AVX2_TU)
const KernelTable kAvx2{
    "avx2",          avx2::dot,           avx2::axpy,
    avx2::xpby,      avx2::mul,           avx2::apply_stencil,
    avx2::hamilton_jacobi,
};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable* best_available() {
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

const KernelTable* initial_selection() {
  if (const char* env = std::getenv("CYLT_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return &kScalar;
    if (want == "avx2" && avx2_table()) return avx2_table();
  }
  return best_available();
}

std::atomic<const KernelTable*>& selection() {
  static std::atomic<const KernelTable*> table{initial_selection()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(CYLT_HAVE_AVX2_TU)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *selection().load(std::memory_order_acquire); }

bool select_kernels(std::string_view which) {
  const KernelTable* t = nullptr;
  if (which == "scalar")
    t = &kScalar;
  else if (which == "avx2")
    t = avx2_table();
  else if (which == "auto")
    t = best_available();
  if (!t) return false;
  selection().store(t, std::memory_order_release);
  return true;
}

}  // namespace cylt::kernels
