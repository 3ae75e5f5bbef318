#include "amc/chain/point.hpp"

#include <cmath>

#include "amc/errors.hpp"

namespace amc::chain {

Point Point::euclidean(std::initializer_list<double> coords) {
  Point p;
  p.coords_.assign(coords.begin(), coords.end());
  return p;
}

Point Point::euclidean(std::span<const double> coords) {
  Point p;
  p.coords_.assign(coords.begin(), coords.end());
  return p;
}

Point Point::discrete(DiscreteLabel label, std::initializer_list<double> embedding) {
  Point p;
  p.coords_.assign(embedding.begin(), embedding.end());
  p.label_ = label;
  return p;
}

DiscreteLabel Point::label() const {
  if (!label_) throw InvalidState("label() called on a Euclidean point");
  return *label_;
}

double Point::norm() const noexcept {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return std::sqrt(s);
}

bool Point::all_finite() const noexcept {
  for (double c : coords_)
    if (!std::isfinite(c)) return false;
  return true;
}

bool operator==(const Point& a, const Point& b) {
  if (a.label_ || b.label_) return a.label_ == b.label_;
  return a.coords_ == b.coords_;
}

double distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw ShapeMismatch("distance between points of different dimension");
  double s = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace amc::chain
