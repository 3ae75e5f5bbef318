#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace amc::chain {

/// Integer pair naming a state of a countable state space.
struct DiscreteLabel {
  std::int64_t i = 0;
  std::int64_t j = 0;
  friend bool operator==(const DiscreteLabel&, const DiscreteLabel&) = default;
};

/// A state of the simulated process.
///
/// Euclidean points carry their coordinates. Discrete points carry a label and
/// a fixed embedding into R^d; the metric is the Euclidean distance between
/// embeddings in both cases and the origin is the zero vector.
class Point {
 public:
  using Coords = boost::container::small_vector<double, 3>;

  Point() = default;

  static Point euclidean(std::initializer_list<double> coords);
  static Point euclidean(std::span<const double> coords);
  static Point discrete(DiscreteLabel label, std::initializer_list<double> embedding);

  bool is_discrete() const noexcept { return label_.has_value(); }
  /// Label of a discrete point; throws InvalidState on a Euclidean point.
  DiscreteLabel label() const;

  std::span<const double> coords() const noexcept { return {coords_.data(), coords_.size()}; }
  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t k) const { return coords_[k]; }

  /// Distance to the origin.
  double norm() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const Point& a, const Point& b);

 private:
  Coords coords_;
  std::optional<DiscreteLabel> label_;
};

double distance(const Point& a, const Point& b);

}  // namespace amc::chain
