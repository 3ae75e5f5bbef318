#include "amc/chain/simulate.hpp"

#include "amc/parallel.hpp"

namespace amc::chain {

Trajectory simulate_adversarial(const Kernel& kernel, const AdversaryPolicy* policy,
                                const StatePredicate& in_K, const Point& x0, std::size_t n_steps,
                                Rng& rng, const SimulationOptions& options) {
  if (options.thin == 0) throw InvalidArgument("thin must be >= 1");
  Trajectory traj;
  const std::size_t recorded = n_steps / options.thin + 1;
  traj.times.reserve(recorded);
  traj.states.reserve(recorded);
  simulate_visit(kernel, policy, in_K, x0, n_steps, rng, [&](std::size_t n, const Point& x) {
    if (n % options.thin == 0) {
      traj.times.push_back(n);
      traj.states.push_back(x);
    }
  });
  return traj;
}

ReplicaEnsemble run_ensemble(const Kernel& kernel, const AdversaryPolicy* policy,
                             const StatePredicate& in_K, const SimulationConfig& config) {
  if (config.replicas == 0) throw InvalidArgument("ensemble needs at least one replica");
  ReplicaEnsemble ens;
  ens.config = config;
  ens.seeds.resize(config.replicas);
  ens.trajectories.resize(config.replicas);
  for (std::size_t r = 0; r < config.replicas; ++r) ens.seeds[r] = stream_seed(config.seed, r);

  parallel_for(config.replicas, config.threads, [&](std::size_t r) {
    Rng rng(ens.seeds[r]);
    ens.trajectories[r] = simulate_adversarial(kernel, policy, in_K, config.x0, config.n_steps, rng,
                                               SimulationOptions{config.thin});
  });
  return ens;
}

}  // namespace amc::chain
