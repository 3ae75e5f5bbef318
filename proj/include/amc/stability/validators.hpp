#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "amc/stability/finite_chain.hpp"

namespace amc::stability {

/// Mean of a Monte Carlo quantity against its theoretical value.
struct Discrepancy {
  double expected = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replicas = 0;
  /// |mean - expected| / std_error; zero when both agree exactly.
  double z = 0.0;
};

double discrepancy_z(double mean, double expected, double std_error);

/// E_{pi|A}(tau_A^{(k)}) against k / pi(A): starts drawn from pi restricted
/// to A, tau^{(k)} the time of the k-th return to A. Replica r uses stream r
/// of `seed`.
Discrepancy kac_validate(const FiniteChain& chain, const StateSet& A, int k, std::size_t replicas,
                         std::uint64_t seed, unsigned threads = 1);

/// One i.i.d. pair (W_i, I_i).
using PairSampler = std::function<std::pair<double, bool>(Rng&)>;

struct WaldReport {
  /// Mean of S = W_1 + ... + W_tau, tau the first i with I_i = 1, against
  /// `expected` (or the plug-in m/p when no reference value is given).
  Discrepancy s;
  double m_hat = 0.0;
  double p_hat = 0.0;
  double plugin = 0.0;
  std::size_t censored = 0;
};

/// Throws NoSuccess when no replica sees I = 1 within `cap` draws.
WaldReport wald_validate(const PairSampler& sampler, std::size_t replicas, std::uint64_t seed,
                         std::optional<double> expected = std::nullopt, std::uint64_t cap = 1'000'000);

struct BallOverlapReport {
  double overlap = 0.0;        // Leb(A and B) estimate
  double overlap_se = 0.0;
  double v_d = 0.0;            // unit-ball overlap at centre distance 3/2
  double v_d_se = 0.0;         // zero when analytic
  double bound = 0.0;          // r^d v_d
  bool in_hypothesis = true;   // w <= 3r/2 + (R - r)
  bool bound_holds = false;
};

/// Leb(B(0, r) and B(w e_1, R)) in R^d by rejection from the cube around the
/// smaller ball, against the bound r^d v_d. The bound is taken to hold
/// unless the estimate sits more than 4 combined standard errors below it.
BallOverlapReport ball_overlap(double r, double R, double w, int d, std::size_t mc, Rng& rng,
                               double tolerance = 1e-12);

/// Leb of the intersection of two unit balls at centre distance 3/2:
/// analytic for d = 1, 2 (0.5 and 2 acos(3/4) - (3/4) sqrt(7/4)).
double unit_overlap_exact(int d);

}  // namespace amc::stability
