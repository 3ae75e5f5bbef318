#pragma once

#include <cmath>
#include <cstdint>
#include <type_traits>
#include <vector>

#include <fmt/format.h>

#include "amc/chain/contracts.hpp"
#include "amc/errors.hpp"

namespace amc::chain {

/// Absolute slack allowed on the jump bound, for embeddings computed in
/// floating point.
inline constexpr double kJumpTolerance = 1e-9;

struct Trajectory {
  /// Step index of each recorded state; identical across the replicas of an
  /// ensemble.
  std::vector<std::size_t> times;
  std::vector<Point> states;
};

struct SimulationOptions {
  /// Record every `thin`-th state (X_0 is always recorded).
  std::size_t thin = 1;
};

namespace detail {
template <class Visitor>
bool keep_going(Visitor& visit, std::size_t n, const Point& x) {
  if constexpr (std::is_same_v<std::invoke_result_t<Visitor&, std::size_t, const Point&>, bool>) {
    return visit(n, x);
  } else {
    visit(n, x);
    return true;
  }
}
}  // namespace detail

/// Runs the adversarial process and hands every state X_0..X_{n_steps} to
/// `visit(n, state)`. Outside K, or when `policy` is null, the next state is
/// drawn from `kernel`; inside K it comes from the policy. A visitor that
/// returns bool stops the run by returning false.
template <class Visitor>
void simulate_visit(const Kernel& kernel, const AdversaryPolicy* policy, const StatePredicate& in_K,
                    const Point& x0, std::size_t n_steps, Rng& rng, Visitor&& visit) {
  const double bound = kernel.jump_bound();
  if (!(bound > 0.0) || !std::isfinite(bound))
    throw InvalidArgument("kernel jump bound must be positive and finite");
  if (policy && !in_K(x0)) throw InvalidArgument("x0 must lie in K when an adversary is present");
  if (!x0.all_finite()) throw NonFinite("x0 has a non-finite coordinate");

  const bool keep_history = policy && policy->needs_history();
  std::vector<Point> history;
  if (keep_history) {
    history.reserve(n_steps + 1);
    history.push_back(x0);
  }

  Point x = x0;
  if (!detail::keep_going(visit, 0, x)) return;
  for (std::size_t n = 0; n < n_steps; ++n) {
    const bool adversary_moves = policy && in_K(x);
    Point y = adversary_moves
                  ? policy->next(HistoryView{x, n, std::span<const Point>(history)}, rng)
                  : kernel.sample(x, rng);
    if (!y.all_finite()) throw NonFinite(fmt::format("non-finite state at step {}", n + 1));
    const double jump = distance(x, y);
    if (jump > bound + kJumpTolerance)
      throw JumpBoundViolation(fmt::format("{} moved {} > D = {} at step {}",
                                           adversary_moves ? "adversary" : "kernel", jump, bound, n));
    x = std::move(y);
    if (keep_history) history.push_back(x);
    if (!detail::keep_going(visit, n + 1, x)) return;
  }
}

Trajectory simulate_adversarial(const Kernel& kernel, const AdversaryPolicy* policy,
                                const StatePredicate& in_K, const Point& x0, std::size_t n_steps,
                                Rng& rng, const SimulationOptions& options = {});

struct SimulationConfig {
  std::size_t n_steps = 0;
  std::size_t replicas = 0;
  Point x0;
  std::uint64_t seed = 0;
  std::size_t thin = 1;
  unsigned threads = 1;
};

/// Independent replicas of one process. Replica r draws from the stream
/// seeded by seeds[r] = stream_seed(config.seed, r).
struct ReplicaEnsemble {
  SimulationConfig config;
  std::vector<std::uint64_t> seeds;
  std::vector<Trajectory> trajectories;
};

ReplicaEnsemble run_ensemble(const Kernel& kernel, const AdversaryPolicy* policy,
                             const StatePredicate& in_K, const SimulationConfig& config);

}  // namespace amc::chain
