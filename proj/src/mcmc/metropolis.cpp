#include "amc/mcmc/metropolis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amc/errors.hpp"

namespace amc::mcmc {

double mh_log_acceptance(double log_pi_x, double log_pi_y, double log_q_xy, double log_q_yx) {
  if (log_pi_y == -std::numeric_limits<double>::infinity()) return log_pi_y;
  const double r = (log_pi_y - log_pi_x) + (log_q_yx - log_q_xy);
  if (std::isnan(r)) throw NonFiniteDensity("MH ratio is NaN");
  return std::min(0.0, r);
}

MhResult mh_step(const Vector& x, const Proposal& proposal, const TargetDensity& target, Rng& rng) {
  const double lx = target.log_density(x);
  if (!(lx > -std::numeric_limits<double>::infinity()) || std::isnan(lx))
    throw InvalidState("mh_step: current state has zero target density");
  Vector y = proposal.sample(x, rng);
  double lq_xy = 0.0, lq_yx = 0.0;
  if (proposal.log_density) {
    lq_xy = proposal.log_density(x, y);
    lq_yx = proposal.log_density(y, x);
    if (!std::isfinite(lq_xy) || std::isnan(lq_yx) || lq_yx == -std::numeric_limits<double>::infinity())
      throw NonFiniteDensity("mh_step: proposal density is not positive at the sampled pair");
  }
  const double la = mh_log_acceptance(lx, target.log_density(y), lq_xy, lq_yx);
  const double u = rng.uniform_open();
  MhResult out;
  out.log_alpha = la;
  out.accepted = std::log(u) < la;
  out.next = out.accepted ? std::move(y) : x;
  return out;
}

}  // namespace amc::mcmc
