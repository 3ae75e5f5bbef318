#include "amc/lupus/pxda.hpp"

#include <cmath>
#include <limits>

#include "amc/errors.hpp"
#include "amc/mcmc/truncation.hpp"

namespace amc::lupus {

PxDa::PxDa(const LupusDataset& data) : data_(&data) {
  const auto& X = data.X;
  if (X.cols() != 3 || X.rows() != static_cast<Eigen::Index>(data.y.size()))
    throw ShapeMismatch("PxDa: design and response sizes differ");
  if (Eigen::FullPivLU<Eigen::MatrixXd>(X).rank() != 3) throw InvalidSpec("PxDa: design matrix is rank deficient");
  const Eigen::Matrix3d xtx_inv = (X.transpose() * X).inverse();
  projector_ = xtx_inv * X.transpose();
  chol_ = Eigen::LLT<Eigen::Matrix3d>(xtx_inv).matrixL();
}

Eigen::VectorXd PxDa::draw_latent(const Eigen::Vector3d& beta, Rng& rng) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd m = data_->X * beta;
  Eigen::VectorXd phi(m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i)
    phi[i] = data_->y[static_cast<std::size_t>(i)] == 1 ? mcmc::truncated_normal(m[i], 1.0, 0.0, inf, rng)
                                                          : mcmc::truncated_normal(m[i], 1.0, -inf, 0.0, rng);
  return phi;
}

Eigen::Vector3d PxDa::least_squares(const Eigen::VectorXd& phi) const { return projector_ * phi; }

Eigen::Vector3d PxDa::step(const Eigen::Vector3d& beta, Rng& rng) const {
  const Eigen::VectorXd phi = draw_latent(beta, rng);
  const Eigen::Vector3d bt = least_squares(phi);
  const double R = (phi - data_->X * bt).squaredNorm();
  if (!(R > 0.0)) throw DegenerateResidual("PX-DA: residual sum of squares is zero");
  const double W = rng.chi_squared(static_cast<double>(phi.size()));
  Eigen::Vector3d z;
  for (int k = 0; k < 3; ++k) z[k] = rng.normal();
  return std::sqrt(W / R) * bt + chol_ * z;
}

Eigen::Vector3d pxda_step(const Eigen::Vector3d& beta, const LupusDataset& data, Rng& rng) {
  return PxDa(data).step(beta, rng);
}

}  // namespace amc::lupus
