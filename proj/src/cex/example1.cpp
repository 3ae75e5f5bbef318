#include "amc/cex/example1.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "amc/chain/simulate.hpp"
#include "amc/errors.hpp"
#include "amc/parallel.hpp"

namespace amc::cex::ex1 {

chain::Point point(std::int64_t i, std::int64_t j) {
  if (i < 1 || j < 0) throw InvalidState(fmt::format("({}, {}) is not a state of example 1", i, j));
  return chain::Point::discrete({i, j}, {1.0 / static_cast<double>(i), static_cast<double>(j)});
}

bool in_K(const chain::Point& x) { return x.label().j == 0; }

TransitionList transition(std::int64_t i, std::int64_t j) {
  if (i < 1 || j < 0) throw InvalidState(fmt::format("({}, {}) is not a state of example 1", i, j));
  const double inv_i = 1.0 / static_cast<double>(i);
  const double up = 0.5 * (1.0 - inv_i);
  TransitionList row;
  if (j >= 1) {
    row = {{{i, j - 1}, 0.5}, {{i, j + 1}, up}};
  } else {
    const double left = i > 1 ? 0.25 : 0.0;
    const double right = static_cast<double>(i) / (8.0 * static_cast<double>(i + 1));
    row = {{{i, 1}, up}, {{i - 1, 0}, left}, {{i + 1, 0}, right}};
    if (i == 1) row.erase(row.begin() + 1);
  }
  const double stay = 1.0 - total_mass(row);
  if (stay < 0.0) throw InvalidSpec(fmt::format("negative holding probability {} at ({}, {})", stay, i, j));
  row.push_back({{i, j}, stay});
  return row;
}

double stationary_weight(std::int64_t i, std::int64_t j) {
  const double inv_i = 1.0 / static_cast<double>(i);
  return std::ldexp(inv_i, -static_cast<int>(std::min<std::int64_t>(i, 2000))) *
         std::pow(1.0 - inv_i, static_cast<double>(j));
}

chain::Point adversary(std::size_t n) {
  return point(static_cast<std::int64_t>(std::max<std::size_t>(n, 1)), 1);
}

chain::Point Kernel::sample(const chain::Point& x, Rng& rng) const {
  const auto [i, j] = x.label();
  const auto row = transition(i, j);
  const auto to = sample_transition(row, rng);
  return point(to.i, to.j);
}

std::optional<double> Kernel::density(const chain::Point& x, const chain::Point& y) const {
  const auto [i, j] = x.label();
  const auto target = y.label();
  for (const auto& t : transition(i, j))
    if (t.to == target) return t.prob;
  return 0.0;
}

chain::Point Adversary::next(const chain::HistoryView& history, Rng&) const {
  return adversary(history.step);
}

std::int64_t median_column(double L) {
  for (std::int64_t m = 1;; ++m) {
    const double median = std::ceil(-1.0 / std::log2(1.0 - 1.0 / static_cast<double>(m)));
    if (median >= L) return m;
  }
}

WitnessReport witness(double L, std::size_t replicas, std::size_t n_steps, std::uint64_t seed,
                      unsigned threads) {
  if (replicas == 0) throw InvalidArgument("witness needs replicas");
  WitnessReport rep;
  rep.L = L;
  rep.column = median_column(L);

  const Kernel kernel;
  const Adversary adv;
  const auto x0 = point(1, 0);

  // Pass 1: first time each replica reaches the median column.
  std::vector<std::size_t> reach(replicas, n_steps + 1);
  parallel_for(replicas, threads, [&](std::size_t r) {
    Rng rng = Rng::for_stream(seed, r);
    chain::simulate_visit(kernel, &adv, in_K, x0, n_steps, rng,
                          [&](std::size_t n, const chain::Point& x) {
                            if (x.label().i >= rep.column) {
                              reach[r] = n;
                              return false;
                            }
                            return true;
                          });
  });
  for (auto t : reach) {
    if (t <= n_steps) {
      ++rep.replicas_reached;
      rep.max_reach_time = std::max(rep.max_reach_time, t);
    }
  }
  rep.horizon = std::min(n_steps, 10 * rep.max_reach_time);

  // Pass 2: replay the same streams up to the horizon.
  std::vector<char> high(replicas, 0);
  parallel_for(replicas, threads, [&](std::size_t r) {
    Rng rng = Rng::for_stream(seed, r);
    chain::simulate_visit(kernel, &adv, in_K, x0, rep.horizon, rng,
                          [&](std::size_t n, const chain::Point& x) {
                            if (n == rep.horizon) high[r] = x[1] >= L;
                          });
  });
  const auto hits = static_cast<double>(std::count(high.begin(), high.end(), 1));
  const auto R = static_cast<double>(replicas);
  rep.prob = hits / R;
  rep.std_error = std::sqrt(rep.prob * (1.0 - rep.prob) / R);
  return rep;
}

}  // namespace amc::cex::ex1
