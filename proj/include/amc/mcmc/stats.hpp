#pragma once

#include <cstddef>
#include <span>

namespace amc::mcmc {

double mean(std::span<const double> x);

/// Standard error of the mean of a correlated series by non-overlapping
/// batch means. The tail that does not fill a batch is dropped.
double batch_means_se(std::span<const double> x, std::size_t batches = 50);

}  // namespace amc::mcmc
