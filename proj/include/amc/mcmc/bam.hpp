#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "amc/mcmc/target.hpp"
#include "amc/rng.hpp"

namespace amc::mcmc {

struct Ball {
  Vector center;
  double radius = 1.0;

  bool contains(const Vector& x) const { return (x - center).norm() <= radius; }
  /// Distance to the complement: radius - |x - center|, floored at 0.
  double depth(const Vector& x) const;
};

/// The compact set of admissible proposal covariances: symmetric matrices
/// with every eigenvalue in [min, max].
struct EigenBox {
  double min = 1e-4;
  double max = 1e4;

  /// `tol` is relative to the largest eigenvalue magnitude.
  bool contains(const Matrix& S, double tol = 1e-12) const;
  /// Clip eigenvalues into [min, max], keeping eigenvectors.
  Matrix project(const Matrix& S) const;
};

struct BamConfig {
  Ball K;
  double D = 10.0;
  Matrix Sigma_star;
  EigenBox Y;
  std::size_t warmup = 100;
  /// Round proposals to this lattice spacing (increments stay symmetric).
  /// Only for finite-target checks.
  std::optional<double> lattice;

  int dim() const { return static_cast<int>(K.center.size()); }
  /// Throws InvalidSpec / ShapeMismatch on a bad configuration.
  void validate() const;
};

/// Running mean and scatter of every realized state (Welford updates).
class AdaptiveState {
 public:
  explicit AdaptiveState(int dim);

  void update(const Vector& x);
  std::size_t n() const { return n_; }
  const Vector& mean() const { return mean_; }
  /// Sample covariance, zero for n < 2.
  Matrix covariance() const;
  /// Sigma_{n+1}: Sigma_star during warm-up, otherwise (2.38^2/d) V_n
  /// projected into the eigenvalue box.
  Matrix proposal_covariance(const BamConfig& config) const;

 private:
  std::size_t n_ = 0;
  Vector mean_;
  Matrix scatter_;
};

/// Folds `new_point` into the statistics and returns the next proposal
/// covariance.
Matrix adapt_covariance(AdaptiveState& state, const Vector& new_point, const BamConfig& config);

enum class BamCase { Outside, Deep, Band };
const char* to_string(BamCase c);

struct BamProposal {
  Vector y;
  BamCase kase = BamCase::Outside;
  bool adaptive_component = false;  // drawn from N(x, Sigma_next)
};

/// Outside K: N(x, Sigma_star). Depth > 1: N(x, Sigma_next). Otherwise one
/// Bernoulli(depth) draw picks between the two.
BamProposal bam_propose(const Vector& x, const BamConfig& config, const Matrix& Sigma_next, Rng& rng);

struct BamStepResult {
  Vector next;
  bool accepted = false;
  bool jump_rejected = false;
  BamCase kase = BamCase::Outside;
  bool adaptive_component = false;
};

/// One step. When `adapt` is false the proposal covariance stays Sigma_star
/// and the statistics are still updated.
BamStepResult bam_step(const Vector& x, const BamConfig& config, AdaptiveState& adaptive,
                       const TargetDensity& target, Rng& rng, bool adapt = true);

/// Largest absolute difference between two parameter vectors.
double adaptation_gap(std::span<const double> a, std::span<const double> b);
double adaptation_gap(const Matrix& a, const Matrix& b);

struct BamRun {
  std::vector<Vector> states;  // X_0..X_n
  std::size_t accepted = 0;
  std::size_t jump_rejections = 0;
  std::size_t outside = 0, deep = 0, band = 0;
  Matrix final_sigma;
  /// max over n >= warmup + 100 of n * gap(Sigma_{n+1}, Sigma_n)
  double gap_constant = 0.0;

  double acceptance_rate() const;
};

BamRun run_bam(const TargetDensity& target, const BamConfig& config, const Vector& x0, std::size_t steps,
               Rng& rng, bool adapt = true);

}  // namespace amc::mcmc
