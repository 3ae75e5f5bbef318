#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace amc::mcmc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Unnormalized log density. May return -inf outside the support; must be
/// finite on it.
class TargetDensity {
 public:
  virtual ~TargetDensity() = default;
  virtual double log_density(const Vector& x) const = 0;
  virtual int dim() const = 0;
};

class GaussianTarget final : public TargetDensity {
 public:
  GaussianTarget(Vector mean, const Matrix& cov);
  double log_density(const Vector& x) const override;
  int dim() const override { return static_cast<int>(mean_.size()); }

 private:
  Vector mean_;
  Eigen::LLT<Matrix> chol_;
};

class FunctionTarget final : public TargetDensity {
 public:
  FunctionTarget(int dim, std::function<double(const Vector&)> f) : dim_(dim), f_(std::move(f)) {}
  double log_density(const Vector& x) const override { return f_(x); }
  int dim() const override { return dim_; }

 private:
  int dim_;
  std::function<double(const Vector&)> f_;
};

/// Mass on the integer points 0..w.size()-1 of the real line, zero elsewhere.
/// Paired with a lattice-rounded proposal this gives a finite Metropolis
/// chain whose transition matrix can be written down exactly.
class LatticeTarget final : public TargetDensity {
 public:
  explicit LatticeTarget(std::vector<double> weights);
  double log_density(const Vector& x) const override;
  int dim() const override { return 1; }
  const std::vector<double>& weights() const { return w_; }

 private:
  std::vector<double> w_;
};

/// Named targets for the bam demo: "gaussian-2d", "correlated-2d", "lattice-5".
std::vector<std::string> demo_target_names();
std::unique_ptr<TargetDensity> make_demo_target(std::string_view name);

}  // namespace amc::mcmc
