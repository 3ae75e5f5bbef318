#include "amc/mcmc/bam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "amc/errors.hpp"
#include "amc/mcmc/metropolis.hpp"

namespace amc::mcmc {

double Ball::depth(const Vector& x) const { return std::max(0.0, radius - (x - center).norm()); }

bool EigenBox::contains(const Matrix& S, double tol) const {
  if (S.rows() != S.cols() || !S.isApprox(S.transpose(), 1e-12)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(S, Eigen::EigenvaluesOnly);
  // eigenvalues carry rounding on the scale of the largest one
  const double slack = tol * std::max(max, eig.eigenvalues().cwiseAbs().maxCoeff());
  return eig.eigenvalues().minCoeff() >= min - slack && eig.eigenvalues().maxCoeff() <= max + slack;
}

Matrix EigenBox::project(const Matrix& S) const {
  const Matrix sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) throw NonFinite("EigenBox::project: eigen decomposition failed");
  const Vector clipped = eig.eigenvalues().cwiseMax(min).cwiseMin(max);
  const Matrix& Q = eig.eigenvectors();
  Matrix out = Q * clipped.asDiagonal() * Q.transpose();
  return 0.5 * (out + out.transpose());
}

void BamConfig::validate() const {
  const auto d = K.center.size();
  if (d == 0) throw InvalidSpec("BamConfig: K has no dimension");
  if (!(K.radius > 0.0) || !std::isfinite(K.radius)) throw InvalidSpec("BamConfig: K must be a bounded ball");
  if (!(D > 0.0) || !std::isfinite(D)) throw InvalidSpec("BamConfig: D must be positive and finite");
  if (!(Y.min > 0.0) || !(Y.min <= Y.max) || !std::isfinite(Y.max))
    throw InvalidSpec("BamConfig: eigenvalue box must satisfy 0 < min <= max < inf");
  if (Sigma_star.rows() != d || Sigma_star.cols() != d) throw ShapeMismatch("BamConfig: Sigma_star shape");
  if (!Y.contains(Sigma_star)) throw InvalidSpec("BamConfig: Sigma_star outside the eigenvalue box");
  if (lattice && !(*lattice > 0.0)) throw InvalidSpec("BamConfig: lattice spacing must be positive");
}

AdaptiveState::AdaptiveState(int dim) : mean_(Vector::Zero(dim)), scatter_(Matrix::Zero(dim, dim)) {}

void AdaptiveState::update(const Vector& x) {
  if (x.size() != mean_.size()) throw ShapeMismatch("AdaptiveState: wrong dimension");
  ++n_;
  const Vector delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  scatter_ += delta * (x - mean_).transpose();
}

Matrix AdaptiveState::covariance() const {
  if (n_ < 2) return Matrix::Zero(mean_.size(), mean_.size());
  const Matrix c = scatter_ / static_cast<double>(n_ - 1);
  return 0.5 * (c + c.transpose());
}

Matrix AdaptiveState::proposal_covariance(const BamConfig& config) const {
  if (n_ < std::max<std::size_t>(config.warmup, 2)) return config.Sigma_star;
  const double d = static_cast<double>(mean_.size());
  return config.Y.project((2.38 * 2.38 / d) * covariance());
}

Matrix adapt_covariance(AdaptiveState& state, const Vector& new_point, const BamConfig& config) {
  state.update(new_point);
  return state.proposal_covariance(config);
}

const char* to_string(BamCase c) {
  switch (c) {
    case BamCase::Outside: return "outside";
    case BamCase::Deep: return "deep";
    case BamCase::Band: return "band";
  }
  return "?";
}

namespace {

Vector gaussian_increment(const Matrix& S, Rng& rng) {
  Eigen::LLT<Matrix> llt(S);
  if (llt.info() != Eigen::Success) throw InvalidSpec("BAM: proposal covariance not positive definite");
  Vector z(S.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return llt.matrixL() * z;
}

}  // namespace

BamProposal bam_propose(const Vector& x, const BamConfig& config, const Matrix& Sigma_next, Rng& rng) {
  BamProposal p;
  if (!config.K.contains(x)) {
    p.kase = BamCase::Outside;
  } else {
    const double u = config.K.depth(x);
    if (u > 1.0) {
      p.kase = BamCase::Deep;
      p.adaptive_component = true;
    } else {
      p.kase = BamCase::Band;
      p.adaptive_component = rng.bernoulli(u);
    }
  }
  Vector step = gaussian_increment(p.adaptive_component ? Sigma_next : config.Sigma_star, rng);
  if (config.lattice) {
    const double h = *config.lattice;
    for (Eigen::Index i = 0; i < step.size(); ++i) step[i] = h * std::nearbyint(step[i] / h);
  }
  p.y = x + step;
  return p;
}

BamStepResult bam_step(const Vector& x, const BamConfig& config, AdaptiveState& adaptive,
                       const TargetDensity& target, Rng& rng, bool adapt) {
  const double lx = target.log_density(x);
  if (!(lx > -std::numeric_limits<double>::infinity()) || std::isnan(lx))
    throw InvalidState("bam_step: current state has zero target density");
  const Matrix sigma_next = adapt ? adaptive.proposal_covariance(config) : config.Sigma_star;
  BamProposal p = bam_propose(x, config, sigma_next, rng);

  BamStepResult r;
  r.kase = p.kase;
  r.adaptive_component = p.adaptive_component;
  const double u = rng.uniform_open();
  if ((p.y - x).norm() > config.D) {
    r.jump_rejected = true;
  } else {
    // both branches are symmetric Gaussians, so q cancels
    r.accepted = std::log(u) < mh_log_acceptance(lx, target.log_density(p.y), 0.0, 0.0);
  }
  r.next = r.accepted ? std::move(p.y) : x;
  if ((r.next - x).norm() > config.D) throw JumpBoundViolation("bam_step: accepted jump exceeds D");
  adaptive.update(r.next);
  return r;
}

double adaptation_gap(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeMismatch("adaptation_gap: parameter shapes differ");
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
  return g;
}

double adaptation_gap(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch("adaptation_gap: parameter shapes differ");
  return adaptation_gap(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                        std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
}

double BamRun::acceptance_rate() const {
  const auto steps = states.empty() ? 0 : states.size() - 1;
  return steps == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(steps);
}

BamRun run_bam(const TargetDensity& target, const BamConfig& config, const Vector& x0, std::size_t steps,
               Rng& rng, bool adapt) {
  config.validate();
  if (x0.size() != config.dim() || target.dim() != config.dim())
    throw ShapeMismatch("run_bam: target, config and x0 dimensions differ");
  BamRun run;
  run.states.reserve(steps + 1);
  run.states.push_back(x0);
  AdaptiveState adaptive(config.dim());
  adaptive.update(x0);
  Matrix prev = adapt ? adaptive.proposal_covariance(config) : config.Sigma_star;
  const std::size_t gap_from = config.warmup + 100;
  for (std::size_t n = 0; n < steps; ++n) {
    const auto r = bam_step(run.states.back(), config, adaptive, target, rng, adapt);
    run.accepted += r.accepted;
    run.jump_rejections += r.jump_rejected;
    switch (r.kase) {
      case BamCase::Outside: ++run.outside; break;
      case BamCase::Deep: ++run.deep; break;
      case BamCase::Band: ++run.band; break;
    }
    run.states.push_back(r.next);
    Matrix cur = adapt ? adaptive.proposal_covariance(config) : config.Sigma_star;
    const std::size_t idx = n + 1;
    if (idx >= gap_from)
      run.gap_constant = std::max(run.gap_constant, static_cast<double>(idx) * adaptation_gap(cur, prev));
    prev = std::move(cur);
  }
  run.final_sigma = prev;
  return run;
}

}  // namespace amc::mcmc
