#include "amc/cex/example3.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "amc/errors.hpp"

namespace amc::cex::ex3 {

int binary_coefficient(double r, int i, int depth) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument(fmt::format("binary expansion needs r > 0, got {}", r));
  if (std::abs(i) > depth) throw PrecisionExhausted(fmt::format("bit position {} beyond depth {}", i, depth));

  // r = m * 2^e with m an integer below 2^53
  int exponent = 0;
  const double f = std::frexp(r, &exponent);
  const auto m = static_cast<std::uint64_t>(std::ldexp(f, 53));
  const int e = exponent - 53;
  const int lowest = e + std::countr_zero(m);

  if (i < lowest) return 1;  // the tail of ones replacing a terminating 1
  if (i == lowest) return 0;
  const int b = i - e;
  if (b >= 64) return 0;
  return static_cast<int>((m >> b) & 1U);
}

int BitStream::bit(std::uint64_t i) const noexcept {
  return static_cast<int>(stream_seed(seed_, i) >> 63);
}

Spec::Spec(std::uint64_t bit_seed) : bits(bit_seed) {
  for (int i = 1; i <= 64; ++i)
    if (bits.bit(static_cast<std::uint64_t>(i))) a_star_fraction |= std::uint64_t{1} << (64 - i);
  a_star = 4.0 + std::ldexp(static_cast<double>(a_star_fraction), -64);
}

Case classify(double x) {
  if (x <= 1.0) return Case::A;
  if (x <= 3.0) return Case::B;
  if (x <= 4.0) return Case::C;
  return Case::D;
}

int state_bit(const State& s, std::size_t n, const Spec& spec) {
  if (s.a_star_offset) {
    // a_* + k shares a_*'s fractional digits; digit 0 is the parity of 4 + k
    if (n == 0) return static_cast<int>((4 + *s.a_star_offset) & 1);
    return spec.bits.bit(n);
  }
  const int pos = -static_cast<int>(n);
  return binary_coefficient(s.x, pos, std::max(kDefaultPrecisionDepth, static_cast<int>(n)));
}

State step(const State& s, std::size_t n, const Spec& spec, Rng& rng) {
  const double u = rng.uniform();
  switch (classify(s.x)) {
    case Case::A:
      return State::at(2.0 * u);
    case Case::B:
      return State::at(s.x - 1.0 + 2.0 * u);
    case Case::C:
      return State{spec.a_star, 0};
    case Case::D: {
      const bool follow = state_bit(s, n, spec) == spec.bits.bit(n);
      if (follow) {
        if (s.a_star_offset) return State{spec.a_star + static_cast<double>(*s.a_star_offset + 1), *s.a_star_offset + 1};
        return State::at(s.x + 1.0);
      }
      return State::at(s.x - 1.0 - u);
    }
  }
  return s;
}

chain::Point Kernel::sample(const chain::Point& p, Rng& rng) const {
  const double x = p[0];
  const double u = rng.uniform();
  switch (classify(x)) {
    case Case::A:
      return chain::Point::euclidean({2.0 * u});
    case Case::B:
      return chain::Point::euclidean({x - 1.0 + 2.0 * u});
    case Case::C:
      return chain::Point::euclidean({4.0 + u});
    case Case::D:
      if (rng.bernoulli(0.5)) return chain::Point::euclidean({x + 1.0});
      return chain::Point::euclidean({x - 2.0 + u});
  }
  return p;
}

// Density of the absolutely continuous part; for x > 4 the atom at x + 1
// carries the remaining mass 1/2.
std::optional<double> Kernel::density(const chain::Point& p, const chain::Point& q) const {
  const double x = p[0], y = q[0];
  auto uniform = [y](double lo, double hi) { return (y >= lo && y <= hi) ? 1.0 / (hi - lo) : 0.0; };
  switch (classify(x)) {
    case Case::A:
      return uniform(0.0, 2.0);
    case Case::B:
      return uniform(x - 1.0, x + 1.0);
    case Case::C:
      return uniform(4.0, 5.0);
    case Case::D:
      return 0.5 * uniform(x - 2.0, x - 1.0);
  }
  return 0.0;
}

void run(double x0, std::size_t n_steps, std::uint64_t seed, std::uint64_t stream, const StateVisitor& visit) {
  if (!(x0 >= 0.0)) throw InvalidState("example 3 lives on [0, inf)");
  Rng rng = Rng::for_stream(seed, stream);
  const Spec spec(rng.bits());
  State s = State::at(x0);
  visit(0, s);
  for (std::size_t n = 0; n < n_steps; ++n) {
    State next = step(s, n, spec, rng);
    if (std::abs(next.x - s.x) > kJumpBound + 1e-12)
      throw JumpBoundViolation(fmt::format("example 3 moved {} at step {}", next.x - s.x, n));
    s = next;
    visit(n + 1, s);
  }
}

PathSummary summarize_path(double x0, std::size_t n_steps, std::uint64_t seed, std::uint64_t stream) {
  PathSummary out;
  double prev = 0.0;
  bool increasing = true;
  run(x0, n_steps, seed, stream, [&](std::size_t n, const State& s) {
    if (!out.reached_case_c && classify(s.x) == Case::C) {
      out.reached_case_c = true;
      out.first_case_c = n;
    } else if (out.reached_case_c && n > out.first_case_c + 1 && !(s.x > prev)) {
      increasing = false;
    }
    prev = s.x;
    out.final_x = s.x;
  });
  out.increasing_after = out.reached_case_c && increasing;
  return out;
}

}  // namespace amc::cex::ex3
