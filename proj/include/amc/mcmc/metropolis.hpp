#pragma once

#include <functional>

#include "amc/mcmc/target.hpp"
#include "amc/rng.hpp"

namespace amc::mcmc {

/// Proposal kernel q(x, .). `log_density(x, y)` is log q(x, y) up to a
/// constant shared by all x; leave it empty for a symmetric proposal.
struct Proposal {
  std::function<Vector(const Vector& x, Rng& rng)> sample;
  std::function<double(const Vector& x, const Vector& y)> log_density;
};

struct MhResult {
  Vector next;
  bool accepted = false;
  double log_alpha = 0.0;  // log acceptance probability, <= 0
};

/// log min(1, pi(y) q(y,x) / (pi(x) q(x,y))).
double mh_log_acceptance(double log_pi_x, double log_pi_y, double log_q_xy, double log_q_yx);

/// One Metropolis-Hastings transition. Draws the proposal, then exactly one
/// uniform. Throws InvalidState if pi(x) = 0 and NonFiniteDensity if q
/// vanishes (or is NaN) at the sampled pair.
MhResult mh_step(const Vector& x, const Proposal& proposal, const TargetDensity& target, Rng& rng);

}  // namespace amc::mcmc
