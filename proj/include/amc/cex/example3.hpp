#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "amc/chain/contracts.hpp"

// An anticipatory process on [0, inf) whose one-step conditional laws match
// a positive-recurrent kernel P, yet which escapes to infinity once it
// reaches (3, 4]. It deliberately breaks the non-anticipation requirement on
// adversaries.
namespace amc::cex::ex3 {

inline constexpr double kJumpBound = 2.0;
inline constexpr double kKUpper = 2.0;  // K = [0, 2]

/// Default depth for binary_coefficient: every bit position of a finite
/// double lies within [-1074, 1023].
inline constexpr int kDefaultPrecisionDepth = 1100;

/// Coefficient of 2^i in the nonterminating binary expansion of r > 0:
/// dyadic rationals expand with an infinite tail of ones, so 0.5 is
/// 0.0111... Exact for every double. Throws PrecisionExhausted when
/// |i| > depth and InvalidArgument for r <= 0.
int binary_coefficient(double r, int i, int depth = kDefaultPrecisionDepth);

/// The i.i.d. fair bits B_0, B_1, ... generated on demand from a seed; bit i
/// is a pure function of (seed, i).
class BitStream {
 public:
  explicit BitStream(std::uint64_t seed) : seed_(seed) {}
  int bit(std::uint64_t i) const noexcept;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

struct Spec {
  explicit Spec(std::uint64_t bit_seed);

  BitStream bits;
  /// B_1..B_64 packed most significant first: a_* = 4 + fraction / 2^64
  /// up to the bits beyond 64, which stay available through `bits`.
  std::uint64_t a_star_fraction = 0;
  /// a_* rounded to double.
  double a_star = 4.0;
};

/// State of the process. Points reached from a_* by whole steps keep the
/// exact offset so their deep binary digits are read from the bit stream
/// instead of the rounded double.
struct State {
  double x = 0.0;
  std::optional<std::int64_t> a_star_offset;

  static State at(double x) { return State{x, std::nullopt}; }
};

enum class Case { A, B, C, D };
Case classify(double x);

/// One step from time n:
///   (a) x <= 1      -> 2 U_n
///   (b) 1 < x <= 3  -> x - 1 + 2 U_n
///   (c) 3 < x <= 4  -> a_*
///   (d) x > 4       -> x + 1 if x[-n] == B_n, else x - 1 - U_n
State step(const State& s, std::size_t n, const Spec& spec, Rng& rng);

/// Coefficient of 2^{-n} of a state, exact for a_*-lineage states.
int state_bit(const State& s, std::size_t n, const Spec& spec);

/// The Markov kernel P whose one-step laws the process reproduces.
class Kernel final : public chain::Kernel {
 public:
  chain::Point sample(const chain::Point& x, Rng& rng) const override;
  std::optional<double> density(const chain::Point& x, const chain::Point& y) const override;
  double jump_bound() const override { return kJumpBound; }
};

struct PathSummary {
  bool reached_case_c = false;
  std::size_t first_case_c = 0;  // step n with X_n in (3, 4]
  bool increasing_after = false;  // X strictly increasing from first_case_c + 1 on
  double final_x = 0.0;
};

using StateVisitor = std::function<void(std::size_t, const State&)>;

/// Runs one replica from x0 for n_steps, calling visit(n, state) on every
/// state. The bit stream seed is the first draw of stream `stream` of `seed`;
/// the uniforms U_n follow on the same stream.
void run(double x0, std::size_t n_steps, std::uint64_t seed, std::uint64_t stream,
         const StateVisitor& visit);

PathSummary summarize_path(double x0, std::size_t n_steps, std::uint64_t seed, std::uint64_t stream);

}  // namespace amc::cex::ex3
