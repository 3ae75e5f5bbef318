#include <immintrin.h>

#include "amc/simd/kernels.hpp"

namespace amc::simd::avx2 {

namespace {

double finish(__m256d acc) {
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

}  // namespace

double sum(std::span<const double> x) {
  const std::size_t n = x.size(), body = n - n % 4;
  const double* p = x.data();
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
  double s = finish(acc);
  for (std::size_t i = body; i < n; ++i) s += p[i];
  return s;
}

double centered_sum_squares(std::span<const double> x, double mean) {
  const std::size_t n = x.size(), body = n - n % 4;
  const double* p = x.data();
  const __m256d m = _mm256_set1_pd(mean);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d c = _mm256_sub_pd(_mm256_loadu_pd(p + i), m);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(c, c));
  }
  double s = finish(acc);
  for (std::size_t i = body; i < n; ++i) {
    const double c = p[i] - mean;
    s += c * c;
  }
  return s;
}

double lagged_product_sum(std::span<const double> x, double mean, std::size_t lag) {
  if (lag >= x.size()) return 0.0;
  const std::size_t n = x.size() - lag, body = n - n % 4;
  const double* p = x.data();
  const double* q = p + lag;
  const __m256d m = _mm256_set1_pd(mean);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(p + i), m);
    const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(q + i), m);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(a, b));
  }
  double s = finish(acc);
  for (std::size_t i = body; i < n; ++i) s += (p[i] - mean) * (q[i] - mean);
  return s;
}

std::size_t count_in_both_balls(std::span<const double> coords, std::size_t n, std::size_t d,
                                const BallPair& balls) {
  const std::size_t body = n - n % 4;
  const __m256d r2 = _mm256_set1_pd(balls.r * balls.r);
  const __m256d R2 = _mm256_set1_pd(balls.R * balls.R);
  const __m256d w = _mm256_set1_pd(balls.w);
  const double* c = coords.data();
  std::size_t count = 0;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(c + i);
    const __m256d t = _mm256_sub_pd(x0, w);
    __m256d a = _mm256_mul_pd(x0, x0);
    __m256d b = _mm256_mul_pd(t, t);
    for (std::size_t k = 1; k < d; ++k) {
      const __m256d xk = _mm256_loadu_pd(c + k * n + i);
      const __m256d q = _mm256_mul_pd(xk, xk);
      a = _mm256_add_pd(a, q);
      b = _mm256_add_pd(b, q);
    }
    const __m256d in = _mm256_and_pd(_mm256_cmp_pd(a, r2, _CMP_LE_OQ), _mm256_cmp_pd(b, R2, _CMP_LE_OQ));
    count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(in))));
  }
  const double r2s = balls.r * balls.r, R2s = balls.R * balls.R;
  for (std::size_t i = body; i < n; ++i) {
    const double x0 = c[i];
    const double t = x0 - balls.w;
    double a = x0 * x0, b = t * t;
    for (std::size_t k = 1; k < d; ++k) {
      const double q = c[k * n + i] * c[k * n + i];
      a += q;
      b += q;
    }
    count += (a <= r2s && b <= R2s) ? 1U : 0U;
  }
  return count;
}

}  // namespace amc::simd::avx2
