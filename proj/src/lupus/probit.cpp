#include "amc/lupus/probit.hpp"

#include <cmath>
#include <numbers>

#include "amc/errors.hpp"
#include "amc/mcmc/truncation.hpp"

namespace amc::lupus {

namespace {

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// phi(t) / Phi(t)
double inverse_mills(double t) { return std::exp(-0.5 * t * t - kLogSqrt2Pi - mcmc::log_normal_cdf(t)); }

double sign_of(int y) { return y == 1 ? 1.0 : -1.0; }

}  // namespace

double probit_log_posterior(const Vector3& beta, const LupusDataset& data) {
  const Eigen::VectorXd eta = data.X * beta;
  double out = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    out += mcmc::log_normal_cdf(sign_of(data.y[static_cast<std::size_t>(i)]) * eta[i]);
  return out;
}

Vector3 probit_gradient(const Vector3& beta, const LupusDataset& data) {
  const Eigen::VectorXd eta = data.X * beta;
  Vector3 g = Vector3::Zero();
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double s = sign_of(data.y[static_cast<std::size_t>(i)]);
    g += (s * inverse_mills(s * eta[i])) * data.X.row(i).transpose();
  }
  return g;
}

Eigen::Matrix3d probit_hessian(const Vector3& beta, const LupusDataset& data) {
  const Eigen::VectorXd eta = data.X * beta;
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double t = sign_of(data.y[static_cast<std::size_t>(i)]) * eta[i];
    const double lam = inverse_mills(t);
    const Vector3 x = data.X.row(i).transpose();
    H -= (lam * (t + lam)) * (x * x.transpose());
  }
  return H;
}

MleResult probit_mle(const LupusDataset& data, double tol, int max_iter) {
  MleResult r;
  r.beta = Vector3::Zero();
  double f = probit_log_posterior(r.beta, data);
  for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
    const Vector3 g = probit_gradient(r.beta, data);
    r.gradient_norm = g.norm();
    if (r.gradient_norm < tol) return r;
    const Vector3 step = probit_hessian(r.beta, data).ldlt().solve(-g);
    // halve until the objective does not decrease
    double t = 1.0;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const Vector3 cand = r.beta + t * step;
      const double fc = probit_log_posterior(cand, data);
      if (fc >= f) {
        r.beta = cand;
        f = fc;
        break;
      }
    }
  }
  r.gradient_norm = probit_gradient(r.beta, data).norm();
  if (r.gradient_norm < tol) return r;
  throw PrecisionExhausted("probit_mle: Newton did not reach the gradient tolerance");
}

double ProbitPosterior::log_density(const mcmc::Vector& x) const {
  if (x.size() != 3) throw ShapeMismatch("probit posterior is 3-dimensional");
  return probit_log_posterior(Vector3(x), *data_);
}

}  // namespace amc::lupus
