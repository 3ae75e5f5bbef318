#include "amc/stability/validators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "amc/errors.hpp"
#include "amc/parallel.hpp"
#include "amc/simd/kernels.hpp"

namespace amc::stability {

double discrepancy_z(double mean, double expected, double std_error) {
  const double diff = std::abs(mean - expected);
  if (diff == 0.0) return 0.0;
  if (std_error == 0.0) return std::numeric_limits<double>::infinity();
  return diff / std_error;
}

namespace {

Discrepancy summarize(const std::vector<double>& v, double expected) {
  Discrepancy d;
  d.expected = expected;
  d.replicas = v.size();
  const double n = static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += x;
  d.mean = s / n;
  double ss = 0.0;
  for (double x : v) ss += (x - d.mean) * (x - d.mean);
  d.std_error = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  d.z = discrepancy_z(d.mean, expected, d.std_error);
  return d;
}

}  // namespace

Discrepancy kac_validate(const FiniteChain& chain, const StateSet& A, int k, std::size_t replicas,
                         std::uint64_t seed, unsigned threads) {
  if (A.empty()) throw InvalidArgument("A must be nonempty");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (replicas == 0) throw InvalidArgument("need at least one replica");
  const double piA = measure(chain.pi, A);
  if (!(piA > 0.0)) throw InvalidArgument("pi(A) must be positive");

  std::vector<char> inA(static_cast<std::size_t>(chain.size()), 0);
  for (auto a : A) inA[static_cast<std::size_t>(a)] = 1;
  std::vector<double> start_cdf;
  double acc = 0.0;
  for (auto a : A) start_cdf.push_back(acc += chain.pi(a) / piA);

  const FiniteChainKernel kernel(chain);
  std::vector<double> tau(replicas);
  parallel_for(replicas, threads, [&](std::size_t r) {
    Rng rng = Rng::for_stream(seed, r);
    const double u = rng.uniform();
    std::size_t pick = 0;
    while (pick + 1 < A.size() && u >= start_cdf[pick]) ++pick;
    Eigen::Index x = A[pick];
    std::uint64_t n = 0;
    for (int returns = 0; returns < k;) {
      x = kernel.step(x, rng);
      ++n;
      if (inA[static_cast<std::size_t>(x)]) ++returns;
    }
    tau[r] = static_cast<double>(n);
  });
  return summarize(tau, static_cast<double>(k) / piA);
}

WaldReport wald_validate(const PairSampler& sampler, std::size_t replicas, std::uint64_t seed,
                         std::optional<double> expected, std::uint64_t cap) {
  if (replicas == 0) throw InvalidArgument("need at least one replica");
  std::vector<double> S;
  S.reserve(replicas);
  double w_sum = 0.0, draws = 0.0, hits = 0.0;
  std::size_t censored = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    Rng rng = Rng::for_stream(seed, r);
    double s = 0.0;
    bool done = false;
    for (std::uint64_t i = 0; i < cap; ++i) {
      const auto [w, hit] = sampler(rng);
      if (!(w >= 0.0)) throw InvalidArgument("W must be nonnegative");
      s += w;
      w_sum += w;
      draws += 1.0;
      if (hit) {
        hits += 1.0;
        done = true;
        break;
      }
    }
    if (done)
      S.push_back(s);
    else
      ++censored;
  }
  if (S.empty()) throw NoSuccess(fmt::format("no replica drew I = 1 within {} draws", cap));
  WaldReport rep;
  rep.m_hat = w_sum / draws;
  rep.p_hat = hits / draws;
  rep.plugin = rep.m_hat / rep.p_hat;
  rep.censored = censored;
  rep.s = summarize(S, expected.value_or(rep.plugin));
  return rep;
}

double unit_overlap_exact(int d) {
  if (d == 1) return 0.5;
  if (d == 2) return 2.0 * std::acos(0.75) - 0.75 * std::sqrt(1.75);
  throw InvalidArgument("closed form only for d = 1, 2");
}

namespace {

// Fraction of uniform points of [-side, side]^d inside both balls, in
// batches through the SIMD counter.
std::pair<double, double> box_fraction(const simd::BallPair& balls, double side, int d, std::size_t mc,
                                       Rng& rng) {
  constexpr std::size_t kBatch = 4096;
  const auto dim = static_cast<std::size_t>(d);
  std::vector<double> buf(kBatch * dim);
  std::size_t hits = 0;
  for (std::size_t done = 0; done < mc;) {
    const std::size_t n = std::min(kBatch, mc - done);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < dim; ++k) buf[k * n + i] = rng.uniform(-side, side);
    hits += simd::count_in_both_balls(std::span<const double>(buf.data(), n * dim), n, dim, balls);
    done += n;
  }
  const double f = static_cast<double>(hits) / static_cast<double>(mc);
  return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(mc))};
}

}  // namespace

BallOverlapReport ball_overlap(double r, double R, double w, int d, std::size_t mc, Rng& rng, double tolerance) {
  if (!(r > 0.0) || !(R >= r)) throw InvalidArgument("need 0 < r <= R");
  if (!(w >= 0.0)) throw InvalidArgument("centre distance must be >= 0");
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (mc < 2) throw InvalidArgument("need at least 2 Monte Carlo samples");

  BallOverlapReport rep;
  rep.in_hypothesis = w <= 1.5 * r + (R - r);
  const double cube = std::pow(2.0, d);
  if (d <= 2) {
    rep.v_d = unit_overlap_exact(d);
  } else {
    const auto [f, se] = box_fraction({1.0, 1.0, 1.5}, 1.0, d, mc, rng);
    rep.v_d = cube * f;
    rep.v_d_se = cube * se;
  }
  const auto [f, se] = box_fraction({r, R, w}, r, d, mc, rng);
  const double vol = cube * std::pow(r, d);
  rep.overlap = vol * f;
  rep.overlap_se = vol * se;
  const double rd = std::pow(r, d);
  rep.bound = rd * rep.v_d;
  const double se_total = std::hypot(rep.overlap_se, rd * rep.v_d_se);
  rep.bound_holds = rep.overlap + 4.0 * se_total >= rep.bound - tolerance;
  return rep;
}

}  // namespace amc::stability
