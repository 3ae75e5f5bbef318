#include "amc/mcmc/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "amc/errors.hpp"

namespace amc::mcmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt1_2 = 0.70710678118654752440;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// upper tail Q(z) = 1 - Phi(z)
double upper_tail(double z) { return 0.5 * std::erfc(z * kSqrt1_2); }
double lower_tail(double z) { return 0.5 * std::erfc(-z * kSqrt1_2); }

// lo >= 0
double one_sided(double lo, double hi, Rng& rng) {
  if ((hi - lo) * std::max(lo, 1.0) <= 1.0) {
    for (;;) {
      const double z = rng.uniform(lo, hi);
      if (z <= lo) continue;
      if (rng.uniform() < std::exp(0.5 * (lo * lo - z * z))) return z;
    }
  }
  const double lambda = 0.5 * (lo + std::sqrt(lo * lo + 4.0));
  for (;;) {
    const double z = lo + rng.exponential(lambda);
    if (z <= lo || z >= hi) continue;
    const double t = z - lambda;
    if (rng.uniform() < std::exp(-0.5 * t * t)) return z;
  }
}

}  // namespace

double log_normal_cdf(double z) {
  if (std::isnan(z)) return z;
  if (z > 0.0) return std::log1p(-upper_tail(z));
  if (z > -37.0) return std::log(lower_tail(z));
  if (z == -kInf) return -kInf;
  const double r = 1.0 / (z * z);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
  return -0.5 * z * z - std::log(-z) - kLogSqrt2Pi + std::log(series);
}

namespace {

// log(Q(lo) - Q(hi)) for 0 <= lo < hi, with Q(z) = Phi(-z)
double log_interval_mass_right(double lo, double hi) {
  const double a = log_normal_cdf(-lo), b = log_normal_cdf(-hi);
  return a + std::log1p(-std::exp(b - a));
}

}  // namespace

double normal_interval_mass(double lo, double hi) {
  if (!(lo < hi)) return 0.0;
  if (lo >= 0.0) return upper_tail(lo) - upper_tail(hi);
  if (hi <= 0.0) return lower_tail(hi) - lower_tail(lo);
  return 1.0 - lower_tail(lo) - upper_tail(hi);
}

double log_normal_interval_mass(double lo, double hi) {
  if (!(lo < hi)) return -kInf;
  if (lo >= 0.0) return log_interval_mass_right(lo, hi);
  if (hi <= 0.0) return log_interval_mass_right(-hi, -lo);
  return std::log(normal_interval_mass(lo, hi));
}

double truncated_standard_normal(double lo, double hi, Rng& rng) {
  if (!(lo < hi)) throw InvalidSpec("truncated normal: empty interval");
  if (lo >= 0.0) return one_sided(lo, hi, rng);
  if (hi <= 0.0) return -one_sided(-hi, -lo, rng);
  if (hi - lo >= 2.5) {
    for (;;) {
      const double z = rng.normal();
      if (z > lo && z < hi) return z;
    }
  }
  for (;;) {
    const double z = rng.uniform(lo, hi);
    if (z <= lo) continue;
    if (rng.uniform() < std::exp(-0.5 * z * z)) return z;
  }
}

double truncated_normal(double mu, double sigma, double lo, double hi, Rng& rng) {
  if (!(sigma > 0.0)) throw InvalidSpec("truncated normal: sigma must be positive");
  return mu + sigma * truncated_standard_normal((lo - mu) / sigma, (hi - mu) / sigma, rng);
}

void SmoothedTruncationSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidSpec("smoothed truncation: sigma must be positive");
  if (!(upsilon > 0.0)) throw InvalidSpec("smoothed truncation: upsilon must be positive");
  if (!std::isfinite(mu) || !std::isfinite(a) || !std::isfinite(b))
    throw InvalidSpec("smoothed truncation: mu, a, b must be finite");
  if (!(lower_knot() < upper_knot())) throw InvalidSpec("smoothed truncation: need a + upsilon < b - upsilon");
}

namespace {

double log_plateau_norm(const SmoothedTruncationSpec& s) {
  const double log_mass = log_normal_interval_mass((s.lower_knot() - s.mu) / s.sigma, (s.upper_knot() - s.mu) / s.sigma);
  if (!std::isfinite(log_mass)) throw InvalidSpec("smoothed truncation: plateau carries no normal mass");
  return std::log(s.sigma) + kLogSqrt2Pi + log_mass;
}

double log_plateau(double x, const SmoothedTruncationSpec& s) {
  const double z = (x - s.mu) / s.sigma;
  return -0.5 * z * z - log_plateau_norm(s);
}

}  // namespace

double plateau_density(double x, const SmoothedTruncationSpec& spec) {
  spec.validate();
  return std::exp(log_plateau(x, spec));
}

double smoothed_branch(double x, const SmoothedTruncationSpec& spec, SmoothedBranch branch) {
  const double lo = spec.lower_knot(), hi = spec.upper_knot();
  switch (branch) {
    case SmoothedBranch::LeftRamp: return plateau_density(lo, spec) * ((x - spec.a) / (lo - spec.a));
    case SmoothedBranch::Plateau: return plateau_density(x, spec);
    case SmoothedBranch::RightRamp: return plateau_density(hi, spec) * ((spec.b - x) / (spec.b - hi));
  }
  return 0.0;
}

double smoothed_truncated_density(double x, const SmoothedTruncationSpec& spec) {
  spec.validate();
  if (!(x > spec.a && x < spec.b)) return 0.0;
  if (x < spec.lower_knot()) return smoothed_branch(x, spec, SmoothedBranch::LeftRamp);
  if (x > spec.upper_knot()) return smoothed_branch(x, spec, SmoothedBranch::RightRamp);
  return smoothed_branch(x, spec, SmoothedBranch::Plateau);
}

double log_smoothed_truncated_density(double x, const SmoothedTruncationSpec& spec) {
  spec.validate();
  if (!(x > spec.a && x < spec.b)) return -kInf;
  const double lo = spec.lower_knot(), hi = spec.upper_knot();
  if (x < lo) return log_plateau(lo, spec) + std::log((x - spec.a) / (lo - spec.a));
  if (x > hi) return log_plateau(hi, spec) + std::log((spec.b - x) / (spec.b - hi));
  return log_plateau(x, spec);
}

double sample_smoothed_truncated(const SmoothedTruncationSpec& spec, Rng& rng) {
  spec.validate();
  const double lo = spec.lower_knot(), hi = spec.upper_knot();
  auto std_of = [&](double x) { return (x - spec.mu) / spec.sigma; };
  const double za = std_of(spec.a), zb = std_of(spec.b), zl = std_of(lo), zh = std_of(hi);
  // log of the ramp-to-normal ratio bound on each side
  const double log_env = std::max({0.0, 0.5 * (za * za - zl * zl), 0.5 * (zb * zb - zh * zh)});
  for (;;) {
    const double z = truncated_standard_normal(za, zb, rng);
    const double x = spec.mu + spec.sigma * z;
    if (!(x > spec.a && x < spec.b)) continue;
    double log_ratio = 0.0;
    if (x < lo)
      log_ratio = 0.5 * (z * z - zl * zl) + std::log((x - spec.a) / (lo - spec.a));
    else if (x > hi)
      log_ratio = 0.5 * (z * z - zh * zh) + std::log((spec.b - x) / (spec.b - hi));
    const double log_accept = log_ratio - log_env;
    if (log_accept >= 0.0 || std::log(rng.uniform_open()) < log_accept) return x;
  }
}

SmoothedBallGaussian::SmoothedBallGaussian(const Vector& mean, const Matrix& cov, Vector center, double radius,
                                           double upsilon)
    : center_(std::move(center)), radius_(radius) {
  const auto d = center_.size();
  if (mean.size() != d || cov.rows() != d || cov.cols() != d)
    throw ShapeMismatch("SmoothedBallGaussian: inconsistent dimensions");
  if (!(radius > 0.0)) throw InvalidSpec("SmoothedBallGaussian: radius must be positive");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0))
    throw InvalidSpec("SmoothedBallGaussian: covariance not positive definite");
  basis_ = eig.eigenvectors();
  const Vector m = basis_.transpose() * (mean - center_);
  for (Eigen::Index k = 0; k < d; ++k) {
    SmoothedTruncationSpec s{m[k], std::sqrt(eig.eigenvalues()[k]), -radius, radius, upsilon};
    s.validate();
    coords_.push_back(s);
  }
}

double SmoothedBallGaussian::log_density(const Vector& y) const {
  if (y.size() != center_.size()) throw ShapeMismatch("SmoothedBallGaussian: wrong dimension");
  const Vector delta = y - center_;
  if (!(delta.norm() < radius_)) return -kInf;
  const Vector z = basis_.transpose() * delta;
  double out = 0.0;
  for (std::size_t k = 0; k < coords_.size(); ++k)
    out += log_smoothed_truncated_density(z[static_cast<Eigen::Index>(k)], coords_[k]);
  return out;
}

Vector SmoothedBallGaussian::sample(Rng& rng) const {
  Vector z(center_.size());
  for (;;) {
    for (std::size_t k = 0; k < coords_.size(); ++k)
      z[static_cast<Eigen::Index>(k)] = sample_smoothed_truncated(coords_[k], rng);
    if (z.norm() < radius_) {
      Vector y = center_ + basis_ * z;
      if ((y - center_).norm() < radius_) return y;
    }
  }
}

}  // namespace amc::mcmc
