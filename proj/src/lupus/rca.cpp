#include "amc/lupus/rca.hpp"

#include <algorithm>
#include <cmath>

#include "amc/errors.hpp"
#include "amc/mcmc/truncation.hpp"

namespace amc::lupus {

void RcaConfig::validate() const {
  if (M < 2) throw InvalidSpec("RcaConfig: M must be at least 2");
  if (!(L > 0) || !(eps_reg > 0) || !(D > 0) || !(upsilon > 0))
    throw InvalidSpec("RcaConfig: L, eps_reg, D and upsilon must be positive");
}

RcaState::RcaState(const RcaConfig& config) : config_(config), K_{Eigen::Vector3d::Zero(), 1.0} {
  config_.validate();
}

Eigen::Vector3d clamp_coords(const Eigen::Vector3d& x, double L) { return x.cwiseMax(-L).cwiseMin(L); }

double lambda_from_theta(double theta) { return std::min(std::max(theta, 0.2), 0.8); }

void RcaState::update_stats(const Eigen::Vector3d& x) { stats_.update(clamp_coords(x, config_.L)); }

Eigen::Matrix3d RcaState::Sigma() const {
  return stats_.covariance() + config_.eps_reg * Eigen::Matrix3d::Identity();
}

double RcaState::theta() const {
  return im_proposals_ == 0 ? 0.0 : static_cast<double>(im_accepts_) / static_cast<double>(im_proposals_);
}

double RcaState::lambda() const {
  if (pinned_lambda_) return *pinned_lambda_;
  return im_proposals_ == 0 ? 0.5 : lambda_from_theta(theta());
}

void RcaState::record_im(bool accepted) {
  ++im_proposals_;
  im_accepts_ += accepted;
}

std::vector<double> RcaState::parameters() const {
  const Eigen::Vector3d m = mu();
  const Eigen::Matrix3d S = Sigma();
  std::vector<double> p(m.data(), m.data() + 3);
  p.insert(p.end(), S.data(), S.data() + 9);
  p.push_back(lambda());
  return p;
}

mcmc::Ball define_K(const Eigen::Vector3d& mu_M, const Eigen::Matrix3d& Sigma_M) {
  if (!(Sigma_M.diagonal().minCoeff() > 0.0)) throw InvalidSpec("define_K: covariance diagonal must be positive");
  return mcmc::Ball{mu_M, std::sqrt(Sigma_M.diagonal().maxCoeff())};
}

namespace {

double weight(const mcmc::Ball& K, const Eigen::Vector3d& x) { return std::min(1.0, K.depth(x)); }

}  // namespace

Eigen::Vector3d rca_step(const Eigen::Vector3d& x, RcaState& state, const RcaConfig& config,
                         const mcmc::TargetDensity& target, const PxDa& pxda, Rng& rng, RcaStepInfo* info) {
  RcaStepInfo local;
  RcaStepInfo& r = info ? *info : local;
  r = RcaStepInfo{};
  const auto& K = state.K();
  const double lambda = state.lambda();
  r.lambda = lambda;
  const double wx = weight(K, x);

  Eigen::Vector3d next = x;
  if (rng.uniform() < lambda * wx) {
    r.im_selected = true;
    const mcmc::SmoothedBallGaussian q(state.mu(), state.Sigma(), K.center, K.radius, config.upsilon);
    const Eigen::Vector3d y = q.sample(rng);
    const double log_u = std::log(rng.uniform_open());
    if ((y - x).norm() > config.D) {
      r.jump_rejected = true;
    } else {
      const double log_ratio = (target.log_density(y) - target.log_density(x)) + (q.log_density(x) - q.log_density(y)) +
                               (std::log(weight(K, y)) - std::log(wx));
      if (std::isnan(log_ratio)) throw NonFiniteDensity("rca_step: independence ratio is NaN");
      r.im_accepted = log_u < log_ratio;
    }
    state.record_im(r.im_accepted);
    if (r.im_accepted) next = y;
  } else {
    const Eigen::Vector3d y = pxda.step(x, rng);
    const double keep = (1.0 - lambda * weight(K, y)) / (1.0 - lambda * wx);
    const double u = rng.uniform();
    if ((y - x).norm() > config.D)
      r.jump_rejected = true;
    else if (keep < 1.0 && u >= keep)
      r.weight_rejected = true;
    else
      next = y;
  }
  return next;
}

RcaRun run_rca(const Eigen::Vector3d& x0, std::size_t steps, const RcaConfig& config, const PxDa& pxda,
               const mcmc::TargetDensity& target, Rng& rng) {
  config.validate();
  RcaRun run;
  run.warmup = config.M;
  run.states.reserve(config.M + steps + 1);
  run.states.push_back(x0);
  RcaState state(config);

  // warm-up: PX-DA with the jump bound; statistics see X_0..X_{M}
  for (std::size_t n = 0; n < config.M; ++n) {
    const Eigen::Vector3d& x = run.states.back();
    state.update_stats(x);
    Eigen::Vector3d y = pxda.step(x, rng);
    if ((y - x).norm() > config.D) {
      ++run.jump_rejections;
      y = x;
    }
    run.max_jump = std::max(run.max_jump, (y - x).norm());
    run.states.push_back(y);
  }
  {
    RcaState through_M = state;
    through_M.update_stats(run.states.back());
    run.K = define_K(through_M.mu(), through_M.Sigma());
  }
  state.fix_K(run.K);
  run.small_K = run.K.radius <= 10.0 * std::sqrt(config.eps_reg);

  // mu_n, Sigma_n average X_0..X_{n-1}
  std::vector<double> prev = state.parameters();
  const std::size_t gap_from = config.M + 100;
  run.lambda_trace.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t n = config.M + k;
    const Eigen::Vector3d x = run.states.back();
    RcaStepInfo info;
    const Eigen::Vector3d y = rca_step(x, state, config, target, pxda, rng, &info);
    state.update_stats(x);
    run.lambda_trace.push_back(info.lambda);
    run.im_selected += info.im_selected;
    run.im_accepted += info.im_accepted;
    run.jump_rejections += info.jump_rejected;
    run.weight_rejections += info.weight_rejected;
    const double jump = (y - x).norm();
    if (jump > config.D) throw JumpBoundViolation("rca: emitted jump exceeds D");
    run.max_jump = std::max(run.max_jump, jump);
    run.states.push_back(y);

    std::vector<double> cur = state.parameters();
    if (n + 1 >= gap_from)
      run.gap_constant = std::max(run.gap_constant, static_cast<double>(n + 1) * mcmc::adaptation_gap(cur, prev));
    prev = std::move(cur);
  }
  return run;
}

std::vector<Eigen::Vector3d> run_pxda(const Eigen::Vector3d& x0, std::size_t steps, const PxDa& pxda, Rng& rng) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(steps + 1);
  out.push_back(x0);
  for (std::size_t n = 0; n < steps; ++n) out.push_back(pxda.step(out.back(), rng));
  return out;
}

}  // namespace amc::lupus
