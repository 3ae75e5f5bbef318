#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

// Reduction kernels behind the ACF estimator and the ball-overlap Monte
// Carlo. Each has a scalar reference and an AVX2 variant picked at runtime.
//
// Both variants accumulate in four interleaved lanes (element i goes to lane
// i % 4), combine the lanes as (l0 + l1) + (l2 + l3) and then add the tail
// in order, with no fused multiply-add. The results are therefore
// bit-identical across variants, which keeps output files independent of
// the host CPU.
namespace amc::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best variant supported by this CPU and build.
Isa detected_isa() noexcept;

/// Variant used by the dispatching entry points.
Isa active_isa() noexcept;

/// Pins the variant (nullopt restores detection). Throws InvalidArgument
/// when the CPU or build lacks the requested variant.
void force_isa(std::optional<Isa> isa);

/// Two balls in R^d: A = B(0, r) and B = B(w e_1, R).
struct BallPair {
  double r = 1.0;
  double R = 1.0;
  double w = 0.0;
};

double sum(std::span<const double> x);

/// sum_i (x_i - mean)^2
double centered_sum_squares(std::span<const double> x, double mean);

/// sum_{i < n - lag} (x_i - mean)(x_{i+lag} - mean)
double lagged_product_sum(std::span<const double> x, double mean, std::size_t lag);

/// Number of the n points inside both balls. `coords` is dimension-major:
/// coordinate k of point i sits at coords[k * n + i].
std::size_t count_in_both_balls(std::span<const double> coords, std::size_t n, std::size_t d,
                                const BallPair& balls);

namespace scalar {
double sum(std::span<const double> x);
double centered_sum_squares(std::span<const double> x, double mean);
double lagged_product_sum(std::span<const double> x, double mean, std::size_t lag);
std::size_t count_in_both_balls(std::span<const double> coords, std::size_t n, std::size_t d,
                                const BallPair& balls);
}  // namespace scalar

#if defined(AMC_HAVE_AVX2)
namespace avx2 {
double sum(std::span<const double> x);
double centered_sum_squares(std::span<const double> x, double mean);
double lagged_product_sum(std::span<const double> x, double mean, std::size_t lag);
std::size_t count_in_both_balls(std::span<const double> coords, std::size_t n, std::size_t d,
                                const BallPair& balls);
}  // namespace avx2
#endif

}  // namespace amc::simd
