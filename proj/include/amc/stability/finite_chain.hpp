#pragma once

#include <vector>

#include <Eigen/Dense>

#include "amc/chain/contracts.hpp"

namespace amc::stability {

/// Indices of states of a finite chain.
using StateSet = std::vector<Eigen::Index>;

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kStationaryTolerance = 1e-10;
inline constexpr double kReversibleTolerance = 1e-10;

/// A finite chain with its stationary law and a detailed-balance flag.
/// Construction validates the matrix and throws InvalidSpec when the rows
/// are not probability vectors or when no unique stationary law exists.
struct FiniteChain {
  std::vector<chain::Point> states;
  Eigen::MatrixXd P;
  Eigen::VectorXd pi;
  bool reversible = false;

  FiniteChain(std::vector<chain::Point> states, Eigen::MatrixXd P);

  /// States 0..n-1 placed on the real line.
  static FiniteChain from_matrix(Eigen::MatrixXd P);

  Eigen::Index size() const noexcept { return P.rows(); }
  Eigen::Index index_of(const chain::Point& x) const;
};

/// pi with pi P = pi and sum(pi) = 1, from a full-pivot LU solve.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P);

/// max |pi_x P_xy - pi_y P_yx|
double detailed_balance_defect(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi);

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& P, int n);

/// pi(A)
double measure(const Eigen::VectorXd& pi, const StateSet& A);

/// Samples the chain through the kernel contract. The jump bound is the
/// largest distance between states joined by a positive entry.
class FiniteChainKernel final : public chain::Kernel {
 public:
  explicit FiniteChainKernel(const FiniteChain& chain);
  chain::Point sample(const chain::Point& x, Rng& rng) const override;
  std::optional<double> density(const chain::Point& x, const chain::Point& y) const override;
  double jump_bound() const override { return bound_; }

  /// Index-level step, used by the validators' inner loops.
  Eigen::Index step(Eigen::Index i, Rng& rng) const;

 private:
  const FiniteChain* chain_;
  Eigen::MatrixXd cdf_;
  double bound_ = 0.0;
};

/// Random birth-death chain on n states: reversible by construction.
FiniteChain random_birth_death(int n, Rng& rng);

}  // namespace amc::stability
