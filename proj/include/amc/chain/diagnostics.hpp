#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amc/chain/contracts.hpp"
#include "amc/chain/simulate.hpp"

namespace amc::chain {

struct TailPoint {
  double L = 0.0;
  /// max over recorded n of the fraction of replicas with |X_n| > L.
  double sup_tail_prob = 0.0;
  /// Binomial standard error of that fraction.
  double std_error = 0.0;
  /// Step at which the supremum is attained (earliest on ties).
  std::size_t argmax_step = 0;
};

/// Empirical witness of tightness: for each L, the supremum over time of the
/// Monte Carlo estimate of P(|X_n| > L). Nonincreasing in L.
std::vector<TailPoint> tail_curve(const ReplicaEnsemble& ensemble, std::span<const double> L_grid);

inline constexpr std::uint64_t kDefaultHittingCap = 1'000'000;

struct HittingTimeReport {
  /// One entry per replica; censored replicas hold `cap`.
  std::vector<std::uint64_t> times;
  std::vector<bool> censored;
  std::uint64_t cap = 0;
  std::size_t n_censored = 0;
  double censored_fraction = 0.0;
  /// Mean and standard error over uncensored replicas only.
  double mean = 0.0;
  double std_error = 0.0;
};

/// Samples tau = inf{n >= 1 : X_n in target} for a chain following `kernel`
/// from start states drawn by `start`. Replica r uses stream r of `seed`.
HittingTimeReport hitting_time_samples(const Kernel& kernel, const StartSampler& start,
                                       const StatePredicate& target, std::uint64_t cap,
                                       std::size_t replicas, std::uint64_t seed,
                                       unsigned threads = 1);

}  // namespace amc::chain
