// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace cylt::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4),
                           acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i),
                                            _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void apply_stencil(const Stencil& s, const double* x, double* y,
                   std::size_t begin, std::size_t end) {
  std::size_t p = begin;
  for (; p + 4 <= end; p += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(s.diag + p), _mm256_loadu_pd(x + p));
    for (int d = 0; d < s.dirs; ++d)
      acc = _mm256_fnmadd_pd(_mm256_loadu_pd(s.coef[d] + p),
                             _mm256_loadu_pd(x + p + s.offset[d]), acc);
    _mm256_storeu_pd(y + p, acc);
  }
  if (p < end) scalar::apply_stencil(s, x, y, p, end);
}

void hamilton_jacobi(const HamiltonJacobiArgs& a, std::size_t begin,
                     std::size_t end) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d ihx = _mm256_set1_pd(a.inv_hx);
  const __m256d ihz = _mm256_set1_pd(a.inv_hz);
  const __m256d dt = _mm256_set1_pd(a.dt);
  const std::ptrdiff_t row = a.row_stride;
  std::size_t p = begin;
  for (; p + 4 <= end; p += 4) {
    const __m256d c = _mm256_loadu_pd(a.phi + p);
    const __m256d dxm = _mm256_mul_pd(_mm256_sub_pd(c, _mm256_loadu_pd(a.phi + p - 1)), ihx);
    const __m256d dxp = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(a.phi + p + 1), c), ihx);
    const __m256d dzm =
        _mm256_mul_pd(_mm256_sub_pd(c, _mm256_loadu_pd(a.phi + p - row)), ihz);
    const __m256d dzp =
        _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(a.phi + p + row), c), ihz);

    auto sumsq = [](__m256d q0, __m256d q1, __m256d q2, __m256d q3) {
      __m256d s = _mm256_mul_pd(q0, q0);
      s = _mm256_fmadd_pd(q1, q1, s);
      s = _mm256_fmadd_pd(q2, q2, s);
      s = _mm256_fmadd_pd(q3, q3, s);
      return _mm256_sqrt_pd(s);
    };
    const __m256d gp = sumsq(_mm256_max_pd(dxm, zero), _mm256_min_pd(dxp, zero),
                             _mm256_max_pd(dzm, zero), _mm256_min_pd(dzp, zero));
    const __m256d gm = sumsq(_mm256_min_pd(dxm, zero), _mm256_max_pd(dxp, zero),
                             _mm256_min_pd(dzm, zero), _mm256_max_pd(dzp, zero));
    const __m256d v = _mm256_loadu_pd(a.speed + p);
    const __m256d rate = _mm256_fmadd_pd(_mm256_max_pd(v, zero), gp,
                                         _mm256_mul_pd(_mm256_min_pd(v, zero), gm));
    _mm256_storeu_pd(a.out + p, _mm256_fnmadd_pd(dt, rate, c));
  }
  if (p < end) scalar::hamilton_jacobi(a, p, end);
}

}  // namespace cylt::kernels::avx2
