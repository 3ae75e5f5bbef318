#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amc/stability/finite_chain.hpp"

namespace amc::stability {

enum class Method { Exact, Empirical };
std::string to_string(Method m);

// ---- minorization --------------------------------------------------------

/// P^{n0}(x, .) >= epsilon nu(.) for every x in C.
struct MinorizationCertificate {
  StateSet C;
  int n0 = 1;
  double epsilon = 0.0;
  Eigen::VectorXd nu;
};

/// nu(y) proportional to min_{x in C} P^{n0}(x, y) and epsilon the sum of
/// those minima, which is the largest constant for that nu. Returns nullopt
/// when the minima are all zero.
std::optional<MinorizationCertificate> minorization_extract(const FiniteChain& chain, const StateSet& C,
                                                            int n0);

// ---- (A1) ----------------------------------------------------------------

struct A1Report {
  /// Minimal M with P(x, .) <= M mu_* on `outer` for every x in `inner`.
  /// Infinite when the grid finds an unbounded density.
  double M = 0.0;
  /// Finite case: mu_* on the chain's states (zero off `outer`).
  Eigen::VectorXd mu_star;
  /// No x in `inner` reaches `outer`: the bound holds vacuously with M = 0.
  bool vacuous = false;
  Method method = Method::Exact;
  /// Density case: sup of the density over the grid and where it sits.
  double sup_density = 0.0;
  double argmax_x = 0.0;
  double argmax_z = 0.0;
};

A1Report check_A1(const FiniteChain& chain, const StateSet& inner, const StateSet& outer);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};
using IntervalSet = std::vector<Interval>;
using TransitionDensity = std::function<double(double x, double z)>;

/// Density kernel on R with mu_* uniform on `outer`: M = sup density x
/// Leb(outer) over a grid of `resolution` points per interval (endpoints
/// included).
A1Report check_A1(const TransitionDensity& density, const IntervalSet& inner, const IntervalSet& outer,
                  int resolution);

// ---- epsilon-delta -------------------------------------------------------

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};
using PairDensity = std::function<double(const std::vector<double>& x, const std::vector<double>& y)>;

struct EpsilonDeltaReport {
  double epsilon = 0.0;
  std::vector<double> argmin_x;
  std::vector<double> argmin_y;
  std::size_t pairs = 0;
  Method method = Method::Empirical;
};

/// Grid minimum of density(x, y) over x, y in J with |y - x| <= delta. The
/// infimum over the open condition |y - x| < delta agrees with this for
/// continuous densities. Throws DegenerateRectangle for an empty box.
EpsilonDeltaReport epsilon_delta_check(const PairDensity& density, const Box& J, double delta,
                                       int resolution);

// ---- drift ---------------------------------------------------------------

struct DriftViolation {
  Eigen::Index state = 0;       // finite case
  std::vector<double> point;    // sampled case
  double PV = 0.0;
  double bound = 0.0;           // lambda V + b 1_C
  double margin = 0.0;          // bound - PV
};

struct DriftReport {
  Eigen::VectorXd V;
  StateSet C;
  double lambda = 0.0;
  double b = 0.0;
  Eigen::VectorXd PV;
  std::vector<DriftViolation> violations;
  double worst_margin = 0.0;
  bool holds = false;
  Method method = Method::Exact;
};

/// PV <= lambda V + b 1_C, checked exactly through P V.
DriftReport drift_check(const FiniteChain& chain, const Eigen::VectorXd& V, const StateSet& C, double lambda,
                        double b);

/// Sampled version: PV(x) is a Monte Carlo mean over `samples` draws of the
/// kernel, and a point fails only if the estimate exceeds the bound by more
/// than 4 standard errors.
DriftReport drift_check(const chain::Kernel& kernel, const std::function<double(const chain::Point&)>& V,
                        const chain::StatePredicate& in_C, double lambda, double b,
                        const std::vector<chain::Point>& eval_points, std::size_t samples, std::uint64_t seed);

// ---- reversible minorization ----------------------------------------------

struct AppendixReport {
  bool holds = false;
  double worst_margin = 0.0;
  Eigen::Index worst_x = 0;
  Eigen::Index worst_y = 0;
};

/// P^{2 n0}(x, {y}) >= (eps^2 / 4) pi({y} and C) for x in C and every y.
/// Throws NotReversible for chains failing detailed balance.
AppendixReport appendix_check(const FiniteChain& chain, const MinorizationCertificate& cert);

}  // namespace amc::stability
