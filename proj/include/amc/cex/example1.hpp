#pragma once

#include <cstdint>
#include <vector>

#include "amc/cex/transition.hpp"
#include "amc/chain/contracts.hpp"

// Columns of geometric laws with an adversary that pushes the process into
// ever higher columns. States are (1/i, j) for i >= 1, j >= 0, labelled
// (i, j); K is the bottom row j == 0.
namespace amc::cex::ex1 {

/// Largest single move of the process: the adversary's jump from (1/i, 0)
/// to (1/n, 1) can be as long as sqrt(2).
inline const double kJumpBound = 1.4142135623730951;

chain::Point point(std::int64_t i, std::int64_t j);
bool in_K(const chain::Point& x);

/// Transition row of the fixed Markov kernel at (1/i, j): a +-1 Metropolis
/// walk up and down column i, and the in-K moves between neighbouring
/// columns. Throws InvalidState for i < 1 or j < 0, and InvalidSpec if a
/// leftover "stay" probability would be negative.
TransitionList transition(std::int64_t i, std::int64_t j);

/// Unnormalized stationary weight 2^{-i} (1/i) (1 - 1/i)^j.
double stationary_weight(std::int64_t i, std::int64_t j);

/// Adversary move from K at step n: (1/n, 1). Step 0 maps to (1, 1).
chain::Point adversary(std::size_t n);

class Kernel final : public chain::Kernel {
 public:
  chain::Point sample(const chain::Point& x, Rng& rng) const override;
  std::optional<double> density(const chain::Point& x, const chain::Point& y) const override;
  double jump_bound() const override { return kJumpBound; }
};

class Adversary final : public chain::AdversaryPolicy {
 public:
  chain::Point next(const chain::HistoryView& history, Rng& rng) const override;
};

/// Smallest m whose mean-m geometric law has median ceil(-1/log2(1 - 1/m))
/// at least L.
std::int64_t median_column(double L);

struct WitnessReport {
  double L = 0.0;
  std::int64_t column = 0;
  /// Largest over replicas of the first n with column index >= `column`.
  std::size_t max_reach_time = 0;
  std::size_t replicas_reached = 0;
  /// 10 * max_reach_time, capped at the simulated horizon.
  std::size_t horizon = 0;
  double prob = 0.0;  // fraction of replicas with X_{horizon,2} >= L
  double std_error = 0.0;
};

/// Non-tightness witness: estimates P(X_{n,2} >= L) at n = 10 x (time by
/// which every replica has reached the median column for L). The process
/// starts at (1, 0) and runs at most n_steps.
WitnessReport witness(double L, std::size_t replicas, std::size_t n_steps, std::uint64_t seed,
                      unsigned threads = 1);

}  // namespace amc::cex::ex1
