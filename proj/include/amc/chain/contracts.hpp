#pragma once

#include <functional>
#include <optional>
#include <span>

#include "amc/chain/point.hpp"
#include "amc/rng.hpp"

namespace amc::chain {

/// A time-homogeneous transition kernel with bounded jumps: every sampled
/// transition x -> y satisfies distance(x, y) <= jump_bound().
class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual Point sample(const Point& x, Rng& rng) const = 0;

  /// Transition density (continuous spaces) or probability (countable
  /// spaces) of x -> y, when the kernel can evaluate it.
  virtual std::optional<double> density(const Point& /*x*/, const Point& /*y*/) const {
    return std::nullopt;
  }

  virtual double jump_bound() const = 0;
};

/// What an adversary may look at when choosing the next state.
struct HistoryView {
  const Point& current;
  /// Step index of `current` (the process is at X_n with n == step).
  std::size_t step;
  /// X_0..X_n when the policy asked for history, otherwise empty.
  std::span<const Point> past;
};

/// Rule that replaces the kernel while the process is inside K.
///
/// Policies must be adapted to the past: the returned state may depend on
/// the history and the policy's own draws from `rng`, never on draws the
/// process will make later. A policy that breaks this declares so through
/// anticipatory().
class AdversaryPolicy {
 public:
  virtual ~AdversaryPolicy() = default;

  virtual Point next(const HistoryView& history, Rng& rng) const = 0;

  virtual bool needs_history() const { return false; }
  virtual bool anticipatory() const { return false; }
};

using StatePredicate = std::function<bool(const Point&)>;
using StartSampler = std::function<Point(Rng&)>;

}  // namespace amc::chain
