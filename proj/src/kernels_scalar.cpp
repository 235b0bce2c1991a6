#include "kernels_impl.hpp"

#include <algorithm>
#include <cmath>

namespace cylt::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void apply_stencil(const Stencil& s, const double* x, double* y,
                   std::size_t begin, std::size_t end) {
  for (std::size_t p = begin; p < end; ++p) {
    double acc = s.diag[p] * x[p];
    for (int d = 0; d < s.dirs; ++d) acc -= s.coef[d][p] * x[p + s.offset[d]];
    y[p] = acc;
  }
}

void hamilton_jacobi(const HamiltonJacobiArgs& a, std::size_t begin,
                     std::size_t end) {
  const std::ptrdiff_t row = a.row_stride;
  for (std::size_t p = begin; p < end; ++p) {
    const double c = a.phi[p];
    const double dxm = (c - a.phi[p - 1]) * a.inv_hx;
    const double dxp = (a.phi[p + 1] - c) * a.inv_hx;
    const double dzm = (c - a.phi[p - row]) * a.inv_hz;
    const double dzp = (a.phi[p + row] - c) * a.inv_hz;
    const double v = a.speed[p];
    // Osher-Sethian upwind gradient norms for outward / inward motion.
    const double gp = std::sqrt(sq(std::max(dxm, 0.0)) + sq(std::min(dxp, 0.0)) +
                                sq(std::max(dzm, 0.0)) + sq(std::min(dzp, 0.0)));
    const double gm = std::sqrt(sq(std::min(dxm, 0.0)) + sq(std::max(dxp, 0.0)) +
                                sq(std::min(dzm, 0.0)) + sq(std::max(dzp, 0.0)));
    a.out[p] = c - a.dt * (std::max(v, 0.0) * gp + std::min(v, 0.0) * gm);
  }
}

}  // namespace cylt::kernels::scalar
