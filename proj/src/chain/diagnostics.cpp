#include "amc/chain/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "amc/errors.hpp"
#include "amc/parallel.hpp"

namespace amc::chain {

std::vector<TailPoint> tail_curve(const ReplicaEnsemble& ensemble, std::span<const double> L_grid) {
  if (ensemble.trajectories.empty()) throw EmptyEnsemble("tail_curve on an empty ensemble");
  if (L_grid.empty()) throw InvalidArgument("tail_curve needs a nonempty L grid");
  if (!std::is_sorted(L_grid.begin(), L_grid.end()) || L_grid.front() <= 0.0)
    throw InvalidArgument("L grid must be increasing and positive");

  const auto& first = ensemble.trajectories.front();
  const std::size_t T = first.times.size();
  for (const auto& tr : ensemble.trajectories)
    if (tr.times != first.times) throw ShapeMismatch("replicas recorded different time grids");

  const std::size_t R = ensemble.trajectories.size();
  const std::size_t G = L_grid.size();
  // exceed[t * G + g] = #replicas with |X_t| > L_g
  std::vector<std::size_t> exceed(T * G, 0);
  for (const auto& tr : ensemble.trajectories) {
    for (std::size_t t = 0; t < T; ++t) {
      const double r = tr.states[t].norm();
      // L_grid is sorted, so |X| > L_g holds for a prefix of the grid
      const auto end = std::lower_bound(L_grid.begin(), L_grid.end(), r);
      const auto hits = static_cast<std::size_t>(end - L_grid.begin());
      for (std::size_t g = 0; g < hits; ++g) ++exceed[t * G + g];
    }
  }

  std::vector<TailPoint> curve(G);
  for (std::size_t g = 0; g < G; ++g) {
    std::size_t best = 0, best_t = 0;
    for (std::size_t t = 0; t < T; ++t) {
      if (exceed[t * G + g] > best) {
        best = exceed[t * G + g];
        best_t = t;
      }
    }
    const double p = static_cast<double>(best) / static_cast<double>(R);
    curve[g] = TailPoint{L_grid[g], p, std::sqrt(p * (1.0 - p) / static_cast<double>(R)),
                         first.times[best_t]};
  }
  return curve;
}

HittingTimeReport hitting_time_samples(const Kernel& kernel, const StartSampler& start,
                                       const StatePredicate& target, std::uint64_t cap,
                                       std::size_t replicas, std::uint64_t seed, unsigned threads) {
  if (cap < 1) throw InvalidArgument("hitting-time cap must be >= 1");
  if (replicas == 0) throw InvalidArgument("need at least one replica");
  const double bound = kernel.jump_bound();

  HittingTimeReport rep;
  rep.cap = cap;
  rep.times.assign(replicas, cap);
  std::vector<char> censored(replicas, 1);

  parallel_for(replicas, threads, [&](std::size_t r) {
    Rng rng = Rng::for_stream(seed, r);
    Point x = start(rng);
    for (std::uint64_t n = 1; n <= cap; ++n) {
      Point y = kernel.sample(x, rng);
      if (distance(x, y) > bound + kJumpTolerance)
        throw JumpBoundViolation("kernel exceeded its jump bound while sampling hitting times");
      x = std::move(y);
      if (target(x)) {
        rep.times[r] = n;
        censored[r] = 0;
        return;
      }
    }
  });

  rep.censored.assign(censored.begin(), censored.end());
  rep.n_censored = static_cast<std::size_t>(std::count(censored.begin(), censored.end(), 1));
  rep.censored_fraction = static_cast<double>(rep.n_censored) / static_cast<double>(replicas);
  const std::size_t m = replicas - rep.n_censored;
  if (m == 0) throw AllCensored(fmt::format("all {} replicas reached the cap of {} steps", replicas, cap));

  double sum = 0.0;
  for (std::size_t r = 0; r < replicas; ++r)
    if (!censored[r]) sum += static_cast<double>(rep.times[r]);
  rep.mean = sum / static_cast<double>(m);
  double ss = 0.0;
  for (std::size_t r = 0; r < replicas; ++r) {
    if (censored[r]) continue;
    const double d = static_cast<double>(rep.times[r]) - rep.mean;
    ss += d * d;
  }
  rep.std_error = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m)) : 0.0;
  return rep;
}

}  // namespace amc::chain
