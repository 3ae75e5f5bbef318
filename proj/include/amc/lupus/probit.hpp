#pragma once

#include <Eigen/Dense>

#include "amc/lupus/dataset.hpp"
#include "amc/mcmc/target.hpp"

namespace amc::lupus {

using Vector3 = Eigen::Vector3d;

/// Probit log likelihood under the flat prior, i.e. the unnormalized log
/// posterior. Uses a tail-stable log Phi, so it stays finite for any finite
/// beta.
double probit_log_posterior(const Vector3& beta, const LupusDataset& data);
Vector3 probit_gradient(const Vector3& beta, const LupusDataset& data);
Eigen::Matrix3d probit_hessian(const Vector3& beta, const LupusDataset& data);

struct MleResult {
  Vector3 beta;
  int iterations = 0;
  double gradient_norm = 0.0;
};

/// Damped Newton from the origin; stops when |grad| < tol. Throws
/// PrecisionExhausted if it cannot get there.
MleResult probit_mle(const LupusDataset& data, double tol = 1e-10, int max_iter = 200);

/// The posterior as a TargetDensity on R^3.
class ProbitPosterior final : public mcmc::TargetDensity {
 public:
  explicit ProbitPosterior(const LupusDataset& data) : data_(&data) {}
  double log_density(const mcmc::Vector& x) const override;
  int dim() const override { return 3; }

 private:
  const LupusDataset* data_;
};

}  // namespace amc::lupus
