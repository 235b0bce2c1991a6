#pragma once

#include "cyltorsion/kernels.hpp"

namespace cylt::kernels {

inline double sq(double x) { return x * x; }

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void xpby(const double* x, double beta, double* y, std::size_t n);
void mul(const double* a, const double* b, double* out, std::size_t n);
void apply_stencil(const Stencil& s, const double* x, double* y,
                   std::size_t begin, std::size_t end);
void hamilton_jacobi(const HamiltonJacobiArgs& a, std::size_t begin,
                     std::size_t end);
}  // namespace scalar

#if defined(CYLT_HAVE_AVX2_TU)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void xpby(const double* x, double beta, double* y, std::size_t n);
void mul(const double* a, const double* b, double* out, std::size_t n);
void apply_stencil(const Stencil& s, const double* x, double* y,
                   std::size_t begin, std::size_t end);
void hamilton_jacobi(const HamiltonJacobiArgs& a, std::size_t begin,
                     std::size_t end);
}  // namespace avx2
#endif

}  // namespace cylt::kernels
