#include "amc/mcmc/target.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "amc/errors.hpp"

namespace amc::mcmc {

GaussianTarget::GaussianTarget(Vector mean, const Matrix& cov) : mean_(std::move(mean)), chol_(cov) {
  if (cov.rows() != mean_.size() || cov.cols() != mean_.size())
    throw ShapeMismatch("GaussianTarget: covariance shape does not match mean");
  if (chol_.info() != Eigen::Success) throw InvalidSpec("GaussianTarget: covariance not positive definite");
}

double GaussianTarget::log_density(const Vector& x) const {
  if (x.size() != mean_.size()) throw ShapeMismatch("GaussianTarget: wrong dimension");
  const Vector z = chol_.matrixL().solve(x - mean_);
  return -0.5 * z.squaredNorm();
}

LatticeTarget::LatticeTarget(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw InvalidSpec("LatticeTarget: no points");
  for (double w : w_)
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidSpec("LatticeTarget: weights must be positive");
}

double LatticeTarget::log_density(const Vector& x) const {
  if (x.size() != 1) throw ShapeMismatch("LatticeTarget: dimension is 1");
  const double r = std::nearbyint(x[0]);
  if (r != x[0] || r < 0.0 || r >= static_cast<double>(w_.size()))
    return -std::numeric_limits<double>::infinity();
  return std::log(w_[static_cast<std::size_t>(r)]);
}

std::vector<std::string> demo_target_names() { return {"gaussian-2d", "correlated-2d", "lattice-5"}; }

std::unique_ptr<TargetDensity> make_demo_target(std::string_view name) {
  if (name == "gaussian-2d") return std::make_unique<GaussianTarget>(Vector::Zero(2), Matrix::Identity(2, 2));
  if (name == "correlated-2d") {
    Matrix c(2, 2);
    c << 1.0, 0.9, 0.9, 1.0;
    return std::make_unique<GaussianTarget>(Vector::Zero(2), c);
  }
  if (name == "lattice-5") return std::make_unique<LatticeTarget>(std::vector<double>{1, 3, 2, 4, 1});
  throw InvalidArgument(fmt::format("unknown target '{}'", name));
}

}  // namespace amc::mcmc
