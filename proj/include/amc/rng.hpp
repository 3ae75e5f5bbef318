#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace amc {

/// SplitMix64 finalizer. Used only to derive well-separated per-stream seeds
/// from one master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `stream` under master seed `seed`. Distinct streams give
/// distinct seeds; the mapping is fixed so recorded seeds replay exactly.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed ^ splitmix64(stream + 1));
}

/// Random source for one replica / one chain.
///
/// The engine is std::mt19937_64 (bit-exact across standard libraries) and
/// the non-uniform draws come from Boost.Random, whose algorithms are fixed
/// in headers, so a seed reproduces the same stream on every platform.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  static constexpr std::string_view algorithm =
      "mt19937_64 seeded by seed_seq(lo32,hi32) of splitmix64-derived stream seed; "
      "boost::random ziggurat normal";

  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
  }

  static Rng for_stream(std::uint64_t master, std::uint64_t stream) {
    return Rng(stream_seed(master, stream));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1); safe for log().
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() { return normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * normal_(engine_); }

  double chi_squared(double dof) {
    return boost::random::chi_squared_distribution<double>(dof)(engine_);
  }

  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  engine_type& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  engine_type engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace amc
