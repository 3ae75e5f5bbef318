#pragma once

#include <Eigen/Dense>

#include "amc/lupus/dataset.hpp"
#include "amc/rng.hpp"

namespace amc::lupus {

/// Parameter-expanded data augmentation for the probit model. Holds the
/// design-derived constants, computed once.
class PxDa {
 public:
  /// Throws InvalidSpec unless X has full column rank.
  explicit PxDa(const LupusDataset& data);

  /// phi_i ~ N(x_i'beta, 1) truncated to the half line matching y_i.
  Eigen::VectorXd draw_latent(const Eigen::Vector3d& beta, Rng& rng) const;
  /// (X'X)^{-1} X' phi
  Eigen::Vector3d least_squares(const Eigen::VectorXd& phi) const;

  /// One full update: latents, least squares, chi-square rescale and the
  /// Gaussian draw. Throws DegenerateResidual if the residual sum is 0.
  Eigen::Vector3d step(const Eigen::Vector3d& beta, Rng& rng) const;

  const LupusDataset& data() const { return *data_; }

 private:
  const LupusDataset* data_;
  Eigen::Matrix<double, 3, Eigen::Dynamic> projector_;
  Eigen::Matrix3d chol_;  // lower factor of (X'X)^{-1}
};

Eigen::Vector3d pxda_step(const Eigen::Vector3d& beta, const LupusDataset& data, Rng& rng);

}  // namespace amc::lupus
