#include "amc/lupus/ess.hpp"

#include "amc/errors.hpp"
#include "amc/mcmc/stats.hpp"
#include "amc/simd/kernels.hpp"

namespace amc::lupus {

std::vector<double> acf(std::span<const double> series, std::size_t max_lag) {
  if (series.size() <= max_lag) throw InvalidArgument("acf: series must be longer than max_lag");
  const double m = mcmc::mean(series);
  const double c0 = simd::centered_sum_squares(series, m);
  if (!(c0 > 0.0)) throw ConstantSeries("acf: series has zero variance");
  std::vector<double> rho(max_lag);
  for (std::size_t k = 1; k <= max_lag; ++k) rho[k - 1] = simd::lagged_product_sum(series, m, k) / c0;
  return rho;
}

AutocorrelationSum autocorrelation_sum(std::span<const double> series, std::size_t max_lag) {
  const auto rho = acf(series, max_lag);
  AutocorrelationSum out;
  for (double r : rho) {
    if (r < 0.0) return out;
    out.S += r;
    ++out.lags_used;
  }
  out.hit_max_lag = true;
  return out;
}

std::vector<EssRow> ess_report(std::span<const std::vector<double>> a, std::span<const std::vector<double>> b,
                               std::span<const std::string> params, std::size_t max_lag) {
  if (a.size() != b.size() || a.size() != params.size())
    throw ShapeMismatch("ess_report: sampler outputs cover different parameters");
  std::vector<EssRow> rows;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (a[p].size() != b[p].size()) throw ShapeMismatch("ess_report: series lengths differ");
    const std::size_t n = a[p].size();
    const std::size_t lag = max_lag ? max_lag : n / 4;
    EssRow row;
    row.param = params[p];
    row.a = autocorrelation_sum(a[p], lag);
    row.b = autocorrelation_sum(b[p], lag);
    row.ess_a = static_cast<double>(n) / (1.0 + 2.0 * row.a.S);
    row.ess_b = static_cast<double>(n) / (1.0 + 2.0 * row.b.S);
    row.factor = (1.0 + 2.0 * row.a.S) / (1.0 + 2.0 * row.b.S);
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const EssRow& row) {
  auto side = [](const AutocorrelationSum& s, double ess) {
    return nlohmann::json{{"S", s.S}, {"lags_used", s.lags_used}, {"hit_max_lag", s.hit_max_lag}, {"ess", ess}};
  };
  return {{"param", row.param}, {"a", side(row.a, row.ess_a)}, {"b", side(row.b, row.ess_b)}, {"factor", row.factor}};
}

}  // namespace amc::lupus
