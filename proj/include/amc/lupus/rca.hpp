#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "amc/lupus/pxda.hpp"
#include "amc/mcmc/bam.hpp"
#include "amc/mcmc/target.hpp"

namespace amc::lupus {

struct RcaConfig {
  std::size_t M = 500;     // PX-DA warm-up iterations
  double L = 100.0;        // coordinate clamp for the running statistics
  double eps_reg = 1e-6;   // ridge added to the running covariance
  double D = 20.0;         // jump bound
  double upsilon = 1e-3;   // edge smoothing of the independence proposal

  void validate() const;
};

/// Adaptation state of the regime change sampler.
class RcaState {
 public:
  explicit RcaState(const RcaConfig& config);

  /// Clamp x coordinatewise to [-L, L] and fold it into the running mean
  /// and covariance.
  void update_stats(const Eigen::Vector3d& x);

  std::size_t n() const { return stats_.n(); }
  Eigen::Vector3d mu() const { return stats_.mean(); }
  /// Running covariance plus eps_reg I.
  Eigen::Matrix3d Sigma() const;

  /// Empirical IM acceptance rate (0 before the first proposal).
  double theta() const;
  /// 1/2 before the first IM proposal, else theta clamped to [0.2, 0.8].
  double lambda() const;
  void record_im(bool accepted);
  /// Pin lambda (and stop it adapting); for frozen-kernel checks.
  void pin_lambda(std::optional<double> lambda) { pinned_lambda_ = lambda; }
  std::size_t im_proposals() const { return im_proposals_; }
  std::size_t im_accepts() const { return im_accepts_; }

  void fix_K(mcmc::Ball K) { K_ = std::move(K); }
  const mcmc::Ball& K() const { return K_; }

  /// (mu, Sigma, lambda) flattened, for the adaptation gap.
  std::vector<double> parameters() const;

 private:
  RcaConfig config_;
  mcmc::AdaptiveState stats_{3};
  std::size_t im_proposals_ = 0;
  std::size_t im_accepts_ = 0;
  mcmc::Ball K_;
  std::optional<double> pinned_lambda_;
};

Eigen::Vector3d clamp_coords(const Eigen::Vector3d& x, double L);
double lambda_from_theta(double theta);

/// Ball around mu_M whose radius is the largest marginal standard deviation.
mcmc::Ball define_K(const Eigen::Vector3d& mu_M, const Eigen::Matrix3d& Sigma_M);

struct RcaStepInfo {
  bool im_selected = false;
  bool im_accepted = false;
  bool jump_rejected = false;    // proposal beyond D
  bool weight_rejected = false;  // PX-DA move thinned by the regime weight
  double lambda = 0.5;
};

/// One post-warm-up transition from x.
///
/// The independence kernel is chosen with probability lambda * w(x), where
/// w(x) = min(1, dist(x, K^c)): lambda deep inside K, lambda * u in the band
/// and 0 outside, as in the regime split. Its smoothed-truncated Gaussian
/// proposal is accepted with the full Hastings ratio times w(y)/w(x), and
/// the PX-DA move, otherwise taken, is thinned by
/// (1 - lambda w(y)) / (1 - lambda w(x)). Those two factors make every
/// frozen-parameter kernel exactly reversible for the posterior; without
/// them a state-dependent mixture of two reversible kernels is not.
Eigen::Vector3d rca_step(const Eigen::Vector3d& x, RcaState& state, const RcaConfig& config,
                         const mcmc::TargetDensity& target, const PxDa& pxda, Rng& rng, RcaStepInfo* info = nullptr);

struct RcaRun {
  std::vector<Eigen::Vector3d> states;  // X_0..X_{M+steps}
  std::size_t warmup = 0;
  mcmc::Ball K;
  std::vector<double> lambda_trace;  // lambda used at each post-warm-up step
  std::size_t im_selected = 0, im_accepted = 0;
  std::size_t jump_rejections = 0, weight_rejections = 0;
  double max_jump = 0.0;
  /// max over n in [M+100, end] of n * gap(parameters_{n+1}, parameters_n)
  double gap_constant = 0.0;
  bool small_K = false;  // radius no larger than 10 sqrt(eps_reg)
};

RcaRun run_rca(const Eigen::Vector3d& x0, std::size_t steps, const RcaConfig& config, const PxDa& pxda,
               const mcmc::TargetDensity& target, Rng& rng);

/// Plain PX-DA chain X_0..X_steps.
std::vector<Eigen::Vector3d> run_pxda(const Eigen::Vector3d& x0, std::size_t steps, const PxDa& pxda, Rng& rng);

}  // namespace amc::lupus
