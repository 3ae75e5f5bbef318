#include "amc/lupus/study.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "amc/io/output.hpp"
#include "amc/mcmc/stats.hpp"

namespace amc::lupus {

namespace {

const std::vector<std::string> kParams{"beta0", "beta1", "beta2"};

std::vector<double> column(const std::vector<Eigen::Vector3d>& xs, std::size_t from, int p) {
  std::vector<double> out;
  out.reserve(xs.size() - from);
  for (std::size_t i = from; i < xs.size(); ++i) out.push_back(xs[i][p]);
  return out;
}

}  // namespace

std::vector<double> StudyResult::pxda_series(int p) const { return column(pxda, 1, p); }
std::vector<double> StudyResult::rca_series(int p) const { return column(rca.states, rca.warmup + 1, p); }

StudyResult reproduce(const StudyOptions& options) {
  options.rca.validate();
  const auto& data = load_dataset();
  const PxDa px(data);
  const ProbitPosterior target(data);

  StudyResult r;
  r.mle = probit_mle(data);
  const Eigen::Vector3d x0 = r.mle.beta;

  std::thread px_task([&] {
    Rng rng = Rng::for_stream(options.seed, 0);
    r.pxda = run_pxda(x0, options.steps, px, rng);
  });
  {
    Rng rng = Rng::for_stream(options.seed, 1);
    r.rca = run_rca(x0, options.steps, options.rca, px, target, rng);
  }
  px_task.join();

  std::vector<std::vector<double>> a, b;
  for (int p = 0; p < 3; ++p) {
    a.push_back(r.pxda_series(p));
    b.push_back(r.rca_series(p));
  }
  r.ess = ess_report(a, b, kParams);

  r.factors_in_range = true;
  for (const auto& row : r.ess)
    r.factors_in_range &= row.factor >= options.factor_lo && row.factor <= options.factor_hi;

  r.means_agree = true;
  for (int p = 0; p < 3; ++p) {
    auto& s = r.summary[static_cast<std::size_t>(p)];
    s.mean_pxda = mcmc::mean(a[p]);
    s.se_pxda = mcmc::batch_means_se(a[p], options.batches);
    s.mean_rca = mcmc::mean(b[p]);
    s.se_rca = mcmc::batch_means_se(b[p], options.batches);
    s.z = (s.mean_rca - s.mean_pxda) / std::hypot(s.se_pxda, s.se_rca);
    r.means_agree &= std::abs(s.z) < 4.0;
  }

  const auto [lo, hi] = std::minmax_element(r.rca.lambda_trace.begin(), r.rca.lambda_trace.end());
  r.lambda_min = lo == r.rca.lambda_trace.end() ? 0.5 : *lo;
  r.lambda_max = hi == r.rca.lambda_trace.end() ? 0.5 : *hi;
  r.lambda_in_range = r.lambda_min >= 0.2 && r.lambda_max <= 0.8;
  r.jumps_bounded = r.rca.max_jump <= options.rca.D;
  return r;
}

void write_samples_csv(std::ostream& out, const StudyResult& result) {
  io::CsvWriter csv(out, {"sampler", "n", "beta0", "beta1", "beta2"});
  auto emit = [&](std::string_view name, const std::vector<Eigen::Vector3d>& xs) {
    for (std::size_t n = 0; n < xs.size(); ++n) {
      csv.field(name).field(n).field(xs[n][0]).field(xs[n][1]).field(xs[n][2]);
      csv.end_row();
    }
  };
  emit("pxda", result.pxda);
  emit("rca", result.rca.states);
}

void write_acf_csv(std::ostream& out, const StudyResult& result, std::size_t lags) {
  io::CsvWriter csv(out, {"sampler", "param", "lag", "rho"});
  for (int sampler = 0; sampler < 2; ++sampler)
    for (int p = 0; p < 3; ++p) {
      const auto series = sampler == 0 ? result.pxda_series(p) : result.rca_series(p);
      const auto rho = acf(series, std::min(lags, series.size() - 1));
      for (std::size_t k = 0; k < rho.size(); ++k) {
        csv.field(sampler == 0 ? "pxda" : "rca").field(kParams[static_cast<std::size_t>(p)]).field(k + 1).field(rho[k]);
        csv.end_row();
      }
    }
}

nlohmann::json report_json(const StudyResult& r, const StudyOptions& o) {
  using nlohmann::json;
  json ess = json::array(), means = json::array();
  for (std::size_t p = 0; p < 3; ++p) {
    json row = to_json(r.ess[p]);
    row["S_pxda"] = r.ess[p].a.S;
    row["S_rca"] = r.ess[p].b.S;
    ess.push_back(row);
    const auto& s = r.summary[p];
    means.push_back({{"param", kParams[p]},
                     {"mean_pxda", s.mean_pxda},
                     {"stderr_pxda", s.se_pxda},
                     {"mean_rca", s.mean_rca},
                     {"stderr_rca", s.se_rca},
                     {"z", s.z}});
  }
  const auto& run = r.rca;
  return {
      {"steps", o.steps},
      {"config", {{"M", o.rca.M}, {"L", o.rca.L}, {"eps_reg", o.rca.eps_reg}, {"D", o.rca.D}, {"upsilon", o.rca.upsilon}}},
      {"mle", {{"beta", {r.mle.beta[0], r.mle.beta[1], r.mle.beta[2]}},
               {"iterations", r.mle.iterations},
               {"gradient_norm", r.mle.gradient_norm}}},
      {"K", {{"center", {run.K.center[0], run.K.center[1], run.K.center[2]}},
             {"radius", run.K.radius},
             {"suspiciously_small", run.small_K}}},
      {"ess", ess},
      {"posterior_means", means},
      {"rca", {{"im_selected", run.im_selected},
               {"im_accepted", run.im_accepted},
               {"im_acceptance_rate",
                run.im_selected ? static_cast<double>(run.im_accepted) / static_cast<double>(run.im_selected) : 0.0},
               {"jump_rejections", run.jump_rejections},
               {"weight_rejections", run.weight_rejections},
               {"max_jump", run.max_jump},
               {"lambda_min", r.lambda_min},
               {"lambda_max", r.lambda_max},
               {"gap_constant", run.gap_constant}}},
      {"checks", {{"ess_factor_in_range", r.factors_in_range},
                  {"means_agree", r.means_agree},
                  {"lambda_in_range", r.lambda_in_range},
                  {"jumps_bounded", r.jumps_bounded}}},
  };
}

}  // namespace amc::lupus
