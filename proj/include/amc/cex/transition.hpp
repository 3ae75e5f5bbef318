#pragma once

#include <span>
#include <vector>

#include "amc/chain/point.hpp"
#include "amc/rng.hpp"

namespace amc::cex {

/// One outcome of a finite transition distribution.
struct Transition {
  chain::DiscreteLabel to;
  double prob = 0.0;
};

using TransitionList = std::vector<Transition>;

/// Sum of the probabilities; 1 up to rounding for a valid row.
double total_mass(std::span<const Transition> row);

/// Draws one outcome. Zero-probability entries are never returned.
chain::DiscreteLabel sample_transition(std::span<const Transition> row, Rng& rng);

}  // namespace amc::cex
