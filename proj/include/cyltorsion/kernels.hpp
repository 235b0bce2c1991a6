#pragma once

// Data-parallel inner loops of the torsion solver and the level-set update.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA implementation compiled in a separate translation unit. The
// table used by the library is chosen once at runtime from CPUID; it can be
// pinned with the CYLT_KERNELS environment variable ("scalar", "avx2",
// "auto") or with select_kernels(). All arrays use the padded cell layout of
// CylinderGrid: every stencil read p +/- offset stays in bounds for
// p in [begin, end).

#include <cstddef>
#include <string_view>

namespace cylt::kernels {

inline constexpr int kMaxStencilDirs = 6;

/// Matrix-free symmetric stencil  y[p] = diag[p] x[p] - sum_d coef[d][p] x[p + offset[d]].
struct Stencil {
  const double* diag = nullptr;
  const double* coef[kMaxStencilDirs] = {};
  std::ptrdiff_t offset[kMaxStencilDirs] = {};
  int dirs = 0;
};

/// One explicit upwind (Godunov) step of  phi_t + v |grad phi| = 0  on a 2-D
/// padded array whose ghost ring is already filled.
struct HamiltonJacobiArgs {
  const double* phi = nullptr;
  const double* speed = nullptr;
  double* out = nullptr;
  std::ptrdiff_t row_stride = 0;
  double inv_hx = 0.0;
  double inv_hz = 0.0;
  double dt = 0.0;
};

struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y = x + beta * y
  void (*xpby)(const double* x, double beta, double* y, std::size_t n);
  /// out = a * b (elementwise)
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  void (*apply_stencil)(const Stencil& s, const double* x, double* y,
                        std::size_t begin, std::size_t end);
  void (*hamilton_jacobi)(const HamiltonJacobiArgs& args, std::size_t begin,
                          std::size_t end);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant isn't compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// Table used by the library.
const KernelTable& active();

/// Pin the active table: "scalar", "avx2" or "auto". Returns false (and
/// leaves the selection unchanged) if the requested variant is unavailable.
bool select_kernels(std::string_view which);

}  // namespace cylt::kernels
