#pragma once

#include <cstdint>
#include <vector>

#include "amc/cex/transition.hpp"
#include "amc/chain/contracts.hpp"

// A countable state space in R^2 on which P is continuous, the Markov chain
// returns to O in finite expected time, and an adversary acting only at O
// makes the expected return time infinite.
//
// Labels:
//   O                  (0, 0)
//   S_0 point (i, 0)   (0, i)      i >= 1
//   y-axis (0, i)      (-1, i)     i >= 1
//   S_k, k >= 1        (k, p)      p = 1..k      the point (p, p/k)
//                                  p = k+s       the s-th of beta_k points on
//                                                the segment (k,1) -> (0,beta_k)
namespace amc::cex::ex2 {

inline const double kJumpBound = 1.4142135623730951;

/// Expected return time to O from (1, 1/k):
///   r_k = (k + 2 beta_k) prod_{i<=k} i/k
///         + sum_{j<k} (2j - 1) (prod_{i<j} i/k) (1 - j/k).
/// Requires k >= 1 and beta_k >= k + 1. Products are taken in log space for
/// k > 50 and the sum is compensated.
double expected_return(std::int64_t k, double beta_k);

/// r_k k^{-k}, evaluated without forming k^k.
double scaled_return(std::int64_t k, double beta_k);

struct Spec {
  std::int64_t k_max = 0;
  /// beta[k-1] = beta_k. Integer valued; exact while below 2^53.
  std::vector<double> beta;
  std::vector<double> a;  // Markov law of the branch chosen at O
  std::vector<double> b;  // adversary's law of the branch chosen at O
  std::vector<double> r;  // r_k
  /// Running sums of a_k r_k and b_k r_k.
  std::vector<double> partial_a_r;
  std::vector<double> partial_b_r;
  /// Last ratios a_{k+1} r_{k+1} / (a_k r_k) and the same for b.
  double ratio_a = 0.0;
  double ratio_b = 0.0;
};

/// beta_k is the smallest integer above max(k, beta_{k-1}) with r_k >= k^k;
/// a_k is proportional to (2k)^{-k} and b_k to (k/2)^{-k}. Needs k_max >= 2.
Spec build(std::int64_t k_max);

/// Same weights as build() around caller-chosen beta_k (strictly increasing,
/// beta_k > k).
Spec spec_with_beta(std::vector<double> beta);

enum class Regime { Markov, Adversary };

chain::Point point(chain::DiscreteLabel label, const Spec& spec);
chain::Point origin();
bool is_origin(const chain::Point& x);

/// Transition row from `label`. At O the branch law is a (Markov) or b
/// (Adversary). Throws InvalidState for labels outside the state set.
TransitionList transition(chain::DiscreteLabel label, const Spec& spec, Regime regime);

/// Fixed kernel P. Needs every beta_k below 2^53 so labels stay exact.
class Kernel final : public chain::Kernel {
 public:
  explicit Kernel(Spec spec);
  chain::Point sample(const chain::Point& x, Rng& rng) const override;
  std::optional<double> density(const chain::Point& x, const chain::Point& y) const override;
  double jump_bound() const override { return kJumpBound; }
  const Spec& spec() const noexcept { return spec_; }

 private:
  Spec spec_;
};

/// Acts at O only, choosing the branch from b.
class Adversary final : public chain::AdversaryPolicy {
 public:
  explicit Adversary(Spec spec) : spec_(std::move(spec)) {}
  chain::Point next(const chain::HistoryView& history, Rng& rng) const override;

 private:
  Spec spec_;
};

}  // namespace amc::cex::ex2
