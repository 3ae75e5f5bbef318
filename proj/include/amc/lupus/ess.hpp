#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace amc::lupus {

/// rho_1..rho_max_lag with the n-denominator estimator. Throws
/// ConstantSeries for zero variance and InvalidArgument unless
/// size > max_lag.
std::vector<double> acf(std::span<const double> series, std::size_t max_lag);

struct AutocorrelationSum {
  double S = 0.0;
  std::size_t lags_used = 0;  // positive lags summed
  bool hit_max_lag = false;   // no negative value up to max_lag
};

/// Sum of rho_1, rho_2, ... stopping before the first negative value.
AutocorrelationSum autocorrelation_sum(std::span<const double> series, std::size_t max_lag);

struct EssRow {
  std::string param;
  AutocorrelationSum a, b;
  double ess_a = 0.0, ess_b = 0.0;
  double factor = 0.0;  // (1 + 2 S_a) / (1 + 2 S_b), the ESS gain of b over a
};

/// Per-parameter comparison of sampler a against sampler b on equal-length
/// series. max_lag defaults to a quarter of the length.
std::vector<EssRow> ess_report(std::span<const std::vector<double>> a, std::span<const std::vector<double>> b,
                               std::span<const std::string> params, std::size_t max_lag = 0);

nlohmann::json to_json(const EssRow& row);

}  // namespace amc::lupus
