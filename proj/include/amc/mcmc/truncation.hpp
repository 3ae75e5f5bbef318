#pragma once

#include <vector>

#include "amc/mcmc/target.hpp"
#include "amc/rng.hpp"

namespace amc::mcmc {

/// log Phi(z), accurate in both tails. Below z = -37 erfc underflows and the
/// asymptotic Mills-ratio series takes over.
double log_normal_cdf(double z);

/// Phi(hi) - Phi(lo) for standardized bounds, computed on whichever side
/// avoids cancellation.
double normal_interval_mass(double lo, double hi);
/// log of the same, finite even when the mass underflows.
double log_normal_interval_mass(double lo, double hi);

/// N(0,1) conditioned on (lo, hi); either bound may be infinite. Normal,
/// uniform or exponential rejection depending on where the interval sits
/// (Robert 1995), so every case keeps acceptance bounded away from zero.
double truncated_standard_normal(double lo, double hi, Rng& rng);
double truncated_normal(double mu, double sigma, double lo, double hi, Rng& rng);

/// Normal(mu, sigma^2) restricted to (a, b) whose edges are replaced by
/// linear ramps of width upsilon, so the density is continuous on R.
struct SmoothedTruncationSpec {
  double mu = 0.0;
  double sigma = 1.0;
  double a = -1.0;
  double b = 1.0;
  double upsilon = 0.1;

  /// Throws InvalidSpec unless sigma > 0, upsilon > 0 and a + upsilon < b - upsilon.
  void validate() const;
  double lower_knot() const { return a + upsilon; }
  double upper_knot() const { return b - upsilon; }
};

enum class SmoothedBranch { LeftRamp, Plateau, RightRamp };

/// The normal density renormalized to the plateau [a+upsilon, b-upsilon].
double plateau_density(double x, const SmoothedTruncationSpec& spec);

/// One branch formula evaluated at x regardless of which region x is in.
/// The ramps are written against the rounded knots, so at a knot the ramp
/// and the plateau agree bit for bit.
double smoothed_branch(double x, const SmoothedTruncationSpec& spec, SmoothedBranch branch);

double smoothed_truncated_density(double x, const SmoothedTruncationSpec& spec);
double log_smoothed_truncated_density(double x, const SmoothedTruncationSpec& spec);

/// Exact draw from the smoothed density: propose from the plain normal on
/// (a, b) and thin on the ramps. The envelope constant is 1 unless a ramp
/// sits on a steep flank of the normal.
double sample_smoothed_truncated(const SmoothedTruncationSpec& spec, Rng& rng);

/// Multivariate version. In the eigenbasis of `cov`, coordinate k is the
/// smoothed truncation of N(m_k, s_k^2) to (-radius, radius) around
/// `center`; the product is then restricted to the ball by rejection.
class SmoothedBallGaussian {
 public:
  SmoothedBallGaussian(const Vector& mean, const Matrix& cov, Vector center, double radius, double upsilon);

  /// Log density up to an additive constant; -inf outside the open ball.
  double log_density(const Vector& y) const;
  Vector sample(Rng& rng) const;
  int dim() const { return static_cast<int>(center_.size()); }

 private:
  Matrix basis_;
  Vector center_;
  double radius_;
  std::vector<SmoothedTruncationSpec> coords_;
};

}  // namespace amc::mcmc
