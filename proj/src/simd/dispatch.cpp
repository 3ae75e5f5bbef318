#include <atomic>

#include "amc/errors.hpp"
#include "amc/simd/kernels.hpp"

namespace amc::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(AMC_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<int> forced{-1};

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa detected_isa() noexcept {
  static const Isa best = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  return best;
}

Isa active_isa() noexcept {
  const int f = forced.load(std::memory_order_relaxed);
  return f < 0 ? detected_isa() : static_cast<Isa>(f);
}

void force_isa(std::optional<Isa> isa) {
  if (isa && *isa == Isa::Avx2 && detected_isa() != Isa::Avx2)
    throw InvalidArgument("AVX2 kernels are not available on this CPU or build");
  forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

#if defined(AMC_HAVE_AVX2)
#define AMC_DISPATCH(fn, ...) \
  return active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define AMC_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double sum(std::span<const double> x) { AMC_DISPATCH(sum, x); }

double centered_sum_squares(std::span<const double> x, double mean) {
  AMC_DISPATCH(centered_sum_squares, x, mean);
}

double lagged_product_sum(std::span<const double> x, double mean, std::size_t lag) {
  AMC_DISPATCH(lagged_product_sum, x, mean, lag);
}

std::size_t count_in_both_balls(std::span<const double> coords, std::size_t n, std::size_t d,
                                const BallPair& balls) {
  AMC_DISPATCH(count_in_both_balls, coords, n, d, balls);
}

#undef AMC_DISPATCH

}  // namespace amc::simd
