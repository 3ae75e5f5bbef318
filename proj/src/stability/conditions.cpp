#include "amc/stability/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "amc/errors.hpp"

namespace amc::stability {

std::string to_string(Method m) { return m == Method::Exact ? "exact" : "empirical"; }

namespace {

void check_set(const FiniteChain& chain, const StateSet& S, const char* what) {
  if (S.empty()) throw InvalidArgument(fmt::format("{} must be nonempty", what));
  for (auto i : S)
    if (i < 0 || i >= chain.size()) throw InvalidArgument(fmt::format("{} holds a state outside the chain", what));
}

std::vector<double> grid(const Interval& I, int resolution) {
  std::vector<double> g(static_cast<std::size_t>(resolution));
  if (resolution == 1) {
    g[0] = 0.5 * (I.lo + I.hi);
    return g;
  }
  for (int i = 0; i < resolution; ++i) g[static_cast<std::size_t>(i)] = I.lo + I.length() * i / (resolution - 1);
  return g;
}

}  // namespace

std::optional<MinorizationCertificate> minorization_extract(const FiniteChain& chain, const StateSet& C, int n0) {
  check_set(chain, C, "C");
  if (n0 < 1) throw InvalidArgument("n0 must be >= 1");
  const Eigen::MatrixXd Pn = matrix_power(chain.P, n0);
  Eigen::VectorXd mins = Pn.row(C.front()).transpose();
  for (auto x : C) mins = mins.cwiseMin(Pn.row(x).transpose());
  const double eps = mins.sum();
  if (!(eps > 0.0)) return std::nullopt;
  MinorizationCertificate cert;
  cert.C = C;
  cert.n0 = n0;
  cert.epsilon = std::min(eps, 1.0);
  cert.nu = mins / eps;
  return cert;
}

A1Report check_A1(const FiniteChain& chain, const StateSet& inner, const StateSet& outer) {
  check_set(chain, inner, "inner");
  check_set(chain, outer, "outer");
  A1Report rep;
  rep.method = Method::Exact;
  rep.mu_star = Eigen::VectorXd::Zero(chain.size());
  for (auto z : outer) {
    double mx = 0.0;
    for (auto x : inner) mx = std::max(mx, chain.P(x, z));
    rep.mu_star(z) = mx;
  }
  rep.M = rep.mu_star.sum();
  if (rep.M == 0.0)
    rep.vacuous = true;
  else
    rep.mu_star /= rep.M;
  return rep;
}

A1Report check_A1(const TransitionDensity& density, const IntervalSet& inner, const IntervalSet& outer,
                  int resolution) {
  if (inner.empty() || outer.empty()) throw InvalidArgument("inner and outer must be nonempty");
  if (resolution < 1) throw InvalidArgument("resolution must be >= 1");
  double leb = 0.0;
  for (const auto& I : outer) {
    if (!(I.hi > I.lo)) throw DegenerateRectangle("outer interval with hi <= lo");
    leb += I.length();
  }
  A1Report rep;
  rep.method = Method::Empirical;
  for (const auto& I : inner)
    for (double x : grid(I, resolution))
      for (const auto& O : outer)
        for (double z : grid(O, resolution)) {
          const double f = density(x, z);
          if (f < 0.0 || std::isnan(f)) throw InvalidArgument("transition density must be nonnegative");
          if (f > rep.sup_density) {
            rep.sup_density = f;
            rep.argmax_x = x;
            rep.argmax_z = z;
          }
        }
  rep.M = std::isinf(rep.sup_density) ? std::numeric_limits<double>::infinity() : rep.sup_density * leb;
  rep.vacuous = rep.sup_density == 0.0;
  return rep;
}

EpsilonDeltaReport epsilon_delta_check(const PairDensity& density, const Box& J, double delta, int resolution) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (resolution < 2) throw InvalidArgument("resolution must be >= 2");
  const std::size_t d = J.lo.size();
  if (d == 0 || J.hi.size() != d) throw DegenerateRectangle("box needs matching nonempty bounds");
  for (std::size_t k = 0; k < d; ++k)
    if (!(J.hi[k] > J.lo[k]) || !std::isfinite(J.hi[k] - J.lo[k]))
      throw DegenerateRectangle(fmt::format("box side {} is empty or unbounded", k));

  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= static_cast<std::size_t>(resolution);
  std::vector<std::vector<double>> pts(total, std::vector<double>(d));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t k = 0; k < d; ++k) {
      const auto i = rem % static_cast<std::size_t>(resolution);
      rem /= static_cast<std::size_t>(resolution);
      pts[idx][k] = J.lo[k] + (J.hi[k] - J.lo[k]) * static_cast<double>(i) / (resolution - 1);
    }
  }

  EpsilonDeltaReport rep;
  rep.epsilon = std::numeric_limits<double>::infinity();
  // a relative slack keeps grid pairs sitting exactly at distance delta
  const double reach = delta * (1.0 + 1e-12);
  for (const auto& x : pts)
    for (const auto& y : pts) {
      double dist2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) dist2 += (y[k] - x[k]) * (y[k] - x[k]);
      if (std::sqrt(dist2) > reach) continue;
      ++rep.pairs;
      const double f = density(x, y);
      if (f < rep.epsilon) {
        rep.epsilon = f;
        rep.argmin_x = x;
        rep.argmin_y = y;
      }
    }
  return rep;
}

DriftReport drift_check(const FiniteChain& chain, const Eigen::VectorXd& V, const StateSet& C, double lambda,
                        double b) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidArgument("lambda must lie in [0, 1)");
  if (!(b >= 0.0)) throw InvalidArgument("b must be >= 0");
  if (V.size() != chain.size()) throw ShapeMismatch("V needs one value per state");
  if ((V.array() < 1.0).any()) throw InvalidArgument("V must be >= 1");
  DriftReport rep;
  rep.V = V;
  rep.C = C;
  rep.lambda = lambda;
  rep.b = b;
  rep.method = Method::Exact;
  rep.PV = chain.P * V;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index x = 0; x < chain.size(); ++x) {
    const bool inC = std::find(C.begin(), C.end(), x) != C.end();
    const double bound = lambda * V(x) + (inC ? b : 0.0);
    const double margin = bound - rep.PV(x);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    // relative slack for the rounding in P V
    if (margin < -1e-12 * std::max(1.0, std::abs(bound)))
      rep.violations.push_back({x, {}, rep.PV(x), bound, margin});
  }
  rep.holds = rep.violations.empty();
  return rep;
}

DriftReport drift_check(const chain::Kernel& kernel, const std::function<double(const chain::Point&)>& V,
                        const chain::StatePredicate& in_C, double lambda, double b,
                        const std::vector<chain::Point>& eval_points, std::size_t samples, std::uint64_t seed) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidArgument("lambda must lie in [0, 1)");
  if (!(b >= 0.0)) throw InvalidArgument("b must be >= 0");
  if (samples < 2) throw InvalidArgument("need at least 2 samples per point");
  DriftReport rep;
  rep.lambda = lambda;
  rep.b = b;
  rep.method = Method::Empirical;
  rep.V.resize(static_cast<Eigen::Index>(eval_points.size()));
  rep.PV.resize(static_cast<Eigen::Index>(eval_points.size()));
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < eval_points.size(); ++p) {
    const auto& x = eval_points[p];
    const double vx = V(x);
    if (!(vx >= 1.0)) throw InvalidArgument("V must be >= 1 on the evaluation points");
    Rng rng = Rng::for_stream(seed, p);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
      const double v = V(kernel.sample(x, rng));
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = s / n;
    const double se = std::sqrt(std::max(0.0, s2 / n - mean * mean) / (n - 1.0));
    const double bound = lambda * vx + (in_C(x) ? b : 0.0);
    const double margin = bound - mean;
    const auto idx = static_cast<Eigen::Index>(p);
    rep.V(idx) = vx;
    rep.PV(idx) = mean;
    if (in_C(x)) rep.C.push_back(idx);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin + 4.0 * se < 0.0)
      rep.violations.push_back({idx, std::vector<double>(x.coords().begin(), x.coords().end()), mean, bound, margin});
  }
  rep.holds = rep.violations.empty();
  return rep;
}

AppendixReport appendix_check(const FiniteChain& chain, const MinorizationCertificate& cert) {
  if (!chain.reversible) throw NotReversible("appendix check needs a reversible chain");
  check_set(chain, cert.C, "C");
  const Eigen::MatrixXd P2 = matrix_power(chain.P, 2 * cert.n0);
  const double c = cert.epsilon * cert.epsilon / 4.0;
  std::vector<char> inC(static_cast<std::size_t>(chain.size()), 0);
  for (auto x : cert.C) inC[static_cast<std::size_t>(x)] = 1;
  AppendixReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (auto x : cert.C)
    for (Eigen::Index y = 0; y < chain.size(); ++y) {
      const double rhs = inC[static_cast<std::size_t>(y)] ? c * chain.pi(y) : 0.0;
      const double margin = P2(x, y) - rhs;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_x = x;
        rep.worst_y = y;
      }
    }
  rep.holds = rep.worst_margin >= 0.0;
  return rep;
}

}  // namespace amc::stability
