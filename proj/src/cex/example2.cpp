#include "amc/cex/example2.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "amc/errors.hpp"

namespace amc::cex::ex2 {

namespace {

constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// log of prod_{i=1}^{j-1} i/k for j = 1..k+1 (entry j-1).
std::vector<double> log_reach_probs(std::int64_t k) {
  std::vector<double> lp(static_cast<std::size_t>(k + 1), 0.0);
  const double kk = static_cast<double>(k);
  if (k <= 50) {
    double p = 1.0;
    for (std::int64_t j = 2; j <= k + 1; ++j) {
      p *= static_cast<double>(j - 1) / kk;
      lp[static_cast<std::size_t>(j - 1)] = std::log(p);
    }
  } else {
    double acc = 0.0;
    for (std::int64_t j = 2; j <= k + 1; ++j) {
      acc += std::log(static_cast<double>(j - 1)) - std::log(kk);
      lp[static_cast<std::size_t>(j - 1)] = acc;
    }
  }
  return lp;
}

void check_args(std::int64_t k, double beta_k) {
  if (k < 1) throw InvalidArgument(fmt::format("k must be >= 1, got {}", k));
  if (!std::isfinite(beta_k) || beta_k < static_cast<double>(k + 1))
    throw InvalidArgument(fmt::format("beta_{} must be >= {}, got {}", k, k + 1, beta_k));
}

// r_k, or r_k k^{-k} when `scaled`. Small k stays in linear space so that small cases
// such as r_1 = 1 + 2 beta_1 come out exact.
double return_time(std::int64_t k, double beta_k, bool scaled) {
  const double kk = static_cast<double>(k);
  CompensatedSum s;
  if (k <= 50) {
    const double scale = scaled ? std::pow(kk, kk) : 1.0;
    double reach = 1.0;  // prod_{i<j} i/k
    for (std::int64_t j = 1; j <= k - 1; ++j) {
      const double jj = static_cast<double>(j);
      s.add((2.0 * jj - 1.0) * reach * (1.0 - jj / kk) / scale);
      reach *= jj / kk;
    }
    s.add((kk + 2.0 * beta_k) * reach / scale);
    return s.value();
  }
  const auto lp = log_reach_probs(k);
  const double log_scale = scaled ? kk * std::log(kk) : 0.0;
  s.add(std::exp(std::log(kk + 2.0 * beta_k) + lp[static_cast<std::size_t>(k)] - log_scale));
  for (std::int64_t j = 1; j <= k - 1; ++j) {
    const double jj = static_cast<double>(j);
    s.add((2.0 * jj - 1.0) * (1.0 - jj / kk) * std::exp(lp[static_cast<std::size_t>(j - 1)] - log_scale));
  }
  return s.value();
}

std::vector<double> normalized_from_logs(const std::vector<double>& logw) {
  const double mx = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(logw.size());
  CompensatedSum z;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(logw[k] - mx);
    z.add(w[k]);
  }
  for (auto& x : w) x /= z.value();
  return w;
}

void fill_weights(Spec& spec) {
  const auto n = static_cast<std::size_t>(spec.k_max);
  std::vector<double> la(n), lb(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double k = static_cast<double>(idx + 1);
    la[idx] = -k * std::log(2.0 * k);
    lb[idx] = -k * std::log(k / 2.0);
  }
  spec.a = normalized_from_logs(la);
  spec.b = normalized_from_logs(lb);
  spec.r.resize(n);
  spec.partial_a_r.resize(n);
  spec.partial_b_r.resize(n);
  CompensatedSum sa, sb;
  for (std::size_t idx = 0; idx < n; ++idx) {
    spec.r[idx] = expected_return(static_cast<std::int64_t>(idx + 1), spec.beta[idx]);
    sa.add(spec.a[idx] * spec.r[idx]);
    sb.add(spec.b[idx] * spec.r[idx]);
    spec.partial_a_r[idx] = sa.value();
    spec.partial_b_r[idx] = sb.value();
  }
  if (n >= 2) {
    spec.ratio_a = spec.a[n - 1] * spec.r[n - 1] / (spec.a[n - 2] * spec.r[n - 2]);
    spec.ratio_b = spec.b[n - 1] * spec.r[n - 1] / (spec.b[n - 2] * spec.r[n - 2]);
  }
}

double beta_of(const Spec& spec, std::int64_t k) {
  if (k < 1 || k > spec.k_max) throw InvalidState(fmt::format("branch {} outside 1..{}", k, spec.k_max));
  return spec.beta[static_cast<std::size_t>(k - 1)];
}

}  // namespace

double expected_return(std::int64_t k, double beta_k) {
  check_args(k, beta_k);
  return return_time(k, beta_k, false);
}

double scaled_return(std::int64_t k, double beta_k) {
  check_args(k, beta_k);
  return return_time(k, beta_k, true);
}

Spec build(std::int64_t k_max) {
  if (k_max < 2) throw InvalidArgument("k_max must be >= 2");
  Spec spec;
  spec.k_max = k_max;
  double prev = 0.0;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const double lower = std::max(static_cast<double>(k), prev) + 1.0;
    // r_k is affine in beta_k: r_k k^{-k} = slope * (k + 2 beta) + offset.
    const double kk = static_cast<double>(k);
    const auto lp = log_reach_probs(k);
    const double log_kk = kk * std::log(kk);
    const double slope = std::exp(lp[static_cast<std::size_t>(k)] - log_kk);
    const double offset = scaled_return(k, lower) - slope * (kk + 2.0 * lower);
    double beta = std::max(lower, std::ceil(((1.0 - offset) / slope - kk) / 2.0));
    // settle rounding in the closed form on the monotone map itself; past
    // 2^53 consecutive doubles are the candidate integers
    if (beta < kExactIntegerLimit)
      while (beta > lower && scaled_return(k, beta - 1.0) >= 1.0) beta -= 1.0;
    while (scaled_return(k, beta) < 1.0)
      beta = beta < kExactIntegerLimit ? beta + 1.0 : std::nextafter(beta, HUGE_VAL);
    spec.beta.push_back(beta);
    prev = beta;
  }
  fill_weights(spec);
  return spec;
}

Spec spec_with_beta(std::vector<double> beta) {
  if (beta.size() < 2) throw InvalidArgument("need beta_1..beta_k with k >= 2");
  for (std::size_t idx = 0; idx < beta.size(); ++idx) {
    const double k = static_cast<double>(idx + 1);
    if (!(beta[idx] > k) || beta[idx] != std::floor(beta[idx]))
      throw InvalidSpec(fmt::format("beta_{} = {} must be an integer > {}", idx + 1, beta[idx], k));
    if (idx > 0 && !(beta[idx] > beta[idx - 1])) throw InvalidSpec("beta must be strictly increasing");
  }
  Spec spec;
  spec.k_max = static_cast<std::int64_t>(beta.size());
  spec.beta = std::move(beta);
  fill_weights(spec);
  return spec;
}

chain::Point origin() { return chain::Point::discrete({0, 0}, {0.0, 0.0}); }

bool is_origin(const chain::Point& x) { return x.label() == chain::DiscreteLabel{0, 0}; }

chain::Point point(chain::DiscreteLabel label, const Spec& spec) {
  const auto [k, p] = label;
  if (k == 0 && p >= 0) return chain::Point::discrete(label, {static_cast<double>(p), 0.0});
  if (k == -1 && p >= 1) return chain::Point::discrete(label, {0.0, static_cast<double>(p)});
  if (k >= 1 && k <= spec.k_max && p >= 1) {
    const double kk = static_cast<double>(k);
    if (p <= k) return chain::Point::discrete(label, {static_cast<double>(p), static_cast<double>(p) / kk});
    const double beta = beta_of(spec, k);
    const double s = static_cast<double>(p - k);
    if (s <= beta) {
      const double t = s / (beta + 1.0);
      return chain::Point::discrete(label, {kk * (1.0 - t), 1.0 + t * (beta - 1.0)});
    }
  }
  throw InvalidState(fmt::format("label ({}, {}) is not a state of example 2", k, p));
}

TransitionList transition(chain::DiscreteLabel label, const Spec& spec, Regime regime) {
  const auto [k, p] = label;
  if (k == 0 && p == 0) {
    const auto& w = regime == Regime::Markov ? spec.a : spec.b;
    TransitionList row;
    row.reserve(w.size());
    for (std::size_t idx = 0; idx < w.size(); ++idx)
      row.push_back({{static_cast<std::int64_t>(idx + 1), 1}, w[idx]});
    return row;
  }
  if (k == 0 && p > 0) return {{{0, p - 1}, 1.0}};
  if (k == -1 && p >= 1) return {{p == 1 ? chain::DiscreteLabel{0, 0} : chain::DiscreteLabel{-1, p - 1}, 1.0}};
  if (k >= 1 && k <= spec.k_max && p >= 1) {
    if (p < k) {
      const double up = static_cast<double>(p) / static_cast<double>(k);
      return {{{k, p + 1}, up}, {{0, p - 1}, 1.0 - up}};
    }
    const auto last = k + static_cast<std::int64_t>(beta_of(spec, k));
    if (p < last) return {{{k, p + 1}, 1.0}};
    if (p == last) return {{{-1, last - k}, 1.0}};
  }
  throw InvalidState(fmt::format("label ({}, {}) is not a state of example 2", k, p));
}

Kernel::Kernel(Spec spec) : spec_(std::move(spec)) {
  for (double beta : spec_.beta)
    if (beta >= kExactIntegerLimit)
      throw InvalidSpec("beta_k beyond 2^53 cannot index states exactly; lower k_max");
}

chain::Point Kernel::sample(const chain::Point& x, Rng& rng) const {
  const auto row = transition(x.label(), spec_, Regime::Markov);
  return point(sample_transition(row, rng), spec_);
}

std::optional<double> Kernel::density(const chain::Point& x, const chain::Point& y) const {
  const auto target = y.label();
  double p = 0.0;
  for (const auto& t : transition(x.label(), spec_, Regime::Markov))
    if (t.to == target) p += t.prob;
  return p;
}

chain::Point Adversary::next(const chain::HistoryView& history, Rng& rng) const {
  const auto row = transition(history.current.label(), spec_, Regime::Adversary);
  return point(sample_transition(row, rng), spec_);
}

}  // namespace amc::cex::ex2
