#include "amc/stability/finite_chain.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "amc/errors.hpp"

namespace amc::stability {

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P) {
  const auto n = P.rows();
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.rank() < n) throw InvalidSpec("chain has no unique stationary law");
  return lu.solve(rhs);
}

double detailed_balance_defect(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
  const Eigen::MatrixXd flow = pi.asDiagonal() * P;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& P, int n) {
  if (n < 0) throw InvalidArgument("matrix power needs n >= 0");
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(P.rows(), P.cols());
  for (int i = 0; i < n; ++i) out = out * P;
  return out;
}

double measure(const Eigen::VectorXd& pi, const StateSet& A) {
  double s = 0.0;
  for (auto i : A) s += pi(i);
  return s;
}

FiniteChain::FiniteChain(std::vector<chain::Point> s, Eigen::MatrixXd M)
    : states(std::move(s)), P(std::move(M)) {
  const auto n = P.rows();
  if (n == 0 || P.cols() != n) throw InvalidSpec("transition matrix must be square and nonempty");
  if (static_cast<std::size_t>(n) != states.size()) throw ShapeMismatch("one state per matrix row");
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((P.row(i).array() < 0.0).any() || !P.row(i).allFinite())
      throw InvalidSpec(fmt::format("row {} has a negative or non-finite entry", i));
    if (std::abs(P.row(i).sum() - 1.0) > kRowSumTolerance)
      throw InvalidSpec(fmt::format("row {} sums to {}", i, P.row(i).sum()));
  }
  pi = stationary_distribution(P);
  const double defect = ((pi.transpose() * P) - pi.transpose()).cwiseAbs().maxCoeff();
  if (defect > kStationaryTolerance || (pi.array() < -kStationaryTolerance).any())
    throw InvalidSpec(fmt::format("stationary solve failed (defect {})", defect));
  reversible = detailed_balance_defect(P, pi) <= kReversibleTolerance;
}

FiniteChain FiniteChain::from_matrix(Eigen::MatrixXd P) {
  std::vector<chain::Point> s;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    s.push_back(chain::Point::discrete({i, 0}, {static_cast<double>(i)}));
  return FiniteChain(std::move(s), std::move(P));
}

Eigen::Index FiniteChain::index_of(const chain::Point& x) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == x) return static_cast<Eigen::Index>(i);
  throw InvalidState("point is not a state of this chain");
}

FiniteChainKernel::FiniteChainKernel(const FiniteChain& chain) : chain_(&chain), cdf_(chain.P) {
  const auto n = chain.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 1; j < n; ++j) cdf_(i, j) += cdf_(i, j - 1);
    for (Eigen::Index j = 0; j < n; ++j)
      if (chain.P(i, j) > 0.0)
        bound_ = std::max(bound_, chain::distance(chain.states[static_cast<std::size_t>(i)],
                                                  chain.states[static_cast<std::size_t>(j)]));
  }
  if (bound_ == 0.0) bound_ = 1.0;  // a chain that never moves
}

Eigen::Index FiniteChainKernel::step(Eigen::Index i, Rng& rng) const {
  const double u = rng.uniform();
  const auto n = cdf_.cols();
  for (Eigen::Index j = 0; j < n; ++j)
    if (u < cdf_(i, j) && chain_->P(i, j) > 0.0) return j;
  // rounding left u above the last partial sum: take the last positive entry
  for (Eigen::Index j = n - 1; j >= 0; --j)
    if (chain_->P(i, j) > 0.0) return j;
  return i;
}

chain::Point FiniteChainKernel::sample(const chain::Point& x, Rng& rng) const {
  return chain_->states[static_cast<std::size_t>(step(chain_->index_of(x), rng))];
}

std::optional<double> FiniteChainKernel::density(const chain::Point& x, const chain::Point& y) const {
  return chain_->P(chain_->index_of(x), chain_->index_of(y));
}

FiniteChain random_birth_death(int n, Rng& rng) {
  if (n < 2) throw InvalidArgument("birth-death chain needs at least 2 states");
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    // up and down rates share at most 0.9 of the row so holding stays positive
    const double up = i + 1 < n ? rng.uniform(0.05, 0.45) : 0.0;
    const double down = i > 0 ? rng.uniform(0.05, 0.45) : 0.0;
    if (i + 1 < n) P(i, i + 1) = up;
    if (i > 0) P(i, i - 1) = down;
    P(i, i) = 1.0 - up - down;
  }
  return FiniteChain::from_matrix(std::move(P));
}

}  // namespace amc::stability
