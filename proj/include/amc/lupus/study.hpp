#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "amc/lupus/ess.hpp"
#include "amc/lupus/probit.hpp"
#include "amc/lupus/rca.hpp"

namespace amc::lupus {

struct StudyOptions {
  std::size_t steps = 5000;  // analysed draws per sampler (RCA runs M more)
  std::uint64_t seed = 0;
  RcaConfig rca;
  std::size_t acf_lags = 200;   // lags written to acf.csv
  std::size_t batches = 20;     // batch-means batches for standard errors
  double factor_lo = 1.5, factor_hi = 10.0;
};

struct ParamSummary {
  double mean_pxda = 0, se_pxda = 0;
  double mean_rca = 0, se_rca = 0;
  double z = 0;  // difference over the combined standard error
};

struct StudyResult {
  MleResult mle;
  std::vector<Eigen::Vector3d> pxda;  // X_0..X_steps
  RcaRun rca;
  std::vector<EssRow> ess;            // a = PX-DA, b = RCA
  std::array<ParamSummary, 3> summary;
  double lambda_min = 0, lambda_max = 0;

  bool factors_in_range = false;
  bool means_agree = false;
  bool lambda_in_range = false;
  bool jumps_bounded = false;
  bool all_pass() const { return factors_in_range && means_agree && lambda_in_range && jumps_bounded; }

  /// Analysed series of parameter p: PX-DA draws 1..steps, RCA draws after warm-up.
  std::vector<double> pxda_series(int p) const;
  std::vector<double> rca_series(int p) const;
};

/// Both samplers from the MLE, on streams 0 (PX-DA) and 1 (RCA) of the
/// seed, run concurrently.
StudyResult reproduce(const StudyOptions& options);

/// sampler,n,beta0,beta1,beta2 for every state of both chains
void write_samples_csv(std::ostream& out, const StudyResult& result);
/// sampler,param,lag,rho for lags 1..acf_lags of the analysed series
void write_acf_csv(std::ostream& out, const StudyResult& result, std::size_t lags);
nlohmann::json report_json(const StudyResult& result, const StudyOptions& options);

}  // namespace amc::lupus
