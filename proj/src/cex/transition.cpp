#include "amc/cex/transition.hpp"

#include "amc/errors.hpp"

namespace amc::cex {

double total_mass(std::span<const Transition> row) {
  double s = 0.0;
  for (const auto& t : row) s += t.prob;
  return s;
}

chain::DiscreteLabel sample_transition(std::span<const Transition> row, Rng& rng) {
  if (row.empty()) throw InvalidState("empty transition row");
  const double u = rng.uniform() * total_mass(row);
  double acc = 0.0;
  const Transition* last_positive = nullptr;
  for (const auto& t : row) {
    if (t.prob <= 0.0) continue;
    last_positive = &t;
    acc += t.prob;
    if (u < acc) return t.to;
  }
  if (!last_positive) throw InvalidState("transition row has no positive entry");
  return last_positive->to;
}

}  // namespace amc::cex
