#include "amc/simd/kernels.hpp"

namespace amc::simd::scalar {

namespace {

// Lane-ordered sum of f(i) for i in [0, n).
template <class F>
double lane_sum(std::size_t n, F&& f) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    l[0] += f(i);
    l[1] += f(i + 1);
    l[2] += f(i + 2);
    l[3] += f(i + 3);
  }
  double s = (l[0] + l[1]) + (l[2] + l[3]);
  for (std::size_t i = body; i < n; ++i) s += f(i);
  return s;
}

}  // namespace

double sum(std::span<const double> x) {
  return lane_sum(x.size(), [&](std::size_t i) { return x[i]; });
}

double centered_sum_squares(std::span<const double> x, double mean) {
  return lane_sum(x.size(), [&](std::size_t i) {
    const double c = x[i] - mean;
    return c * c;
  });
}

double lagged_product_sum(std::span<const double> x, double mean, std::size_t lag) {
  if (lag >= x.size()) return 0.0;
  return lane_sum(x.size() - lag, [&](std::size_t i) { return (x[i] - mean) * (x[i + lag] - mean); });
}

std::size_t count_in_both_balls(std::span<const double> coords, std::size_t n, std::size_t d,
                                const BallPair& balls) {
  const double r2 = balls.r * balls.r, R2 = balls.R * balls.R;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = coords[i];
    const double t = x0 - balls.w;
    double a = x0 * x0;
    double b = t * t;
    for (std::size_t k = 1; k < d; ++k) {
      const double xk = coords[k * n + i];
      const double q = xk * xk;
      a += q;
      b += q;
    }
    count += (a <= r2 && b <= R2) ? 1U : 0U;
  }
  return count;
}

}  // namespace amc::simd::scalar
