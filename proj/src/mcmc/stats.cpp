#include "amc/mcmc/stats.hpp"

#include <cmath>
#include <vector>

#include "amc/errors.hpp"
#include "amc/simd/kernels.hpp"

namespace amc::mcmc {

double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mean of an empty series");
  return simd::sum(x) / static_cast<double>(x.size());
}

double batch_means_se(std::span<const double> x, std::size_t batches) {
  if (batches < 2) throw InvalidArgument("batch_means_se: need at least two batches");
  const std::size_t len = x.size() / batches;
  if (len == 0) throw InvalidArgument("batch_means_se: series shorter than the batch count");
  std::vector<double> m(batches);
  for (std::size_t b = 0; b < batches; ++b) m[b] = mean(x.subspan(b * len, len));
  const double grand = mean(m);
  const double ss = simd::centered_sum_squares(m, grand);
  return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

}  // namespace amc::mcmc
