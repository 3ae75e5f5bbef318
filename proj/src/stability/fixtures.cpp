#include "amc/stability/fixtures.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "amc/cex/example2.hpp"
#include "amc/chain/diagnostics.hpp"
#include "amc/errors.hpp"
#include "amc/stability/conditions.hpp"
#include "amc/stability/validators.hpp"

namespace amc::stability {

namespace {

using nlohmann::json;
constexpr double kZLimit = 4.0;

json report(std::string condition, bool holds, json constants, json margins, Method method) {
  return {{"condition", std::move(condition)},
          {"holds", holds},
          {"constants", std::move(constants)},
          {"margins", std::move(margins)},
          {"method", to_string(method)}};
}

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json discrepancy_json(const Discrepancy& d) {
  return {{"mean", d.mean}, {"std_error", d.std_error}, {"z", d.z}, {"z_limit", kZLimit}, {"replicas", d.replicas}};
}

Eigen::MatrixXd two_state(double a, double b) {
  Eigen::MatrixXd P(2, 2);
  P << 1 - a, a, b, 1 - b;
  return P;
}

Eigen::MatrixXd walk(int n, double up, double down) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) P(i, i + 1) = up;
    if (i > 0) P(i, i - 1) = down;
    P(i, i) = 1.0 - P.row(i).sum();
  }
  return P;
}

json kac(const Eigen::MatrixXd& P, const StateSet& A, int k, const FixtureOptions& o) {
  const auto chain = FiniteChain::from_matrix(P);
  const auto d = kac_validate(chain, A, k, o.replicas, o.seed, o.threads);
  return report("Kac return-time formula E(tau_A^(k)) = k / pi(A)", d.z <= kZLimit,
                {{"k", k}, {"pi_A", measure(chain.pi, A)}, {"expected", d.expected}}, discrepancy_json(d),
                Method::Empirical);
}

json wald(const PairSampler& s, double m, double p, const FixtureOptions& o) {
  const auto r = wald_validate(s, o.replicas, o.seed, m / p);
  auto margins = discrepancy_json(r.s);
  margins["m_hat"] = r.m_hat;
  margins["p_hat"] = r.p_hat;
  margins["plugin"] = r.plugin;
  return report("generalized Wald identity E(S) = m / p", r.s.z <= kZLimit,
                {{"m", m}, {"p", p}, {"expected", m / p}}, margins, Method::Empirical);
}

json drift(double up, double down, double base, double lambda, double b) {
  const auto chain = FiniteChain::from_matrix(walk(11, up, down));
  Eigen::VectorXd V(11);
  for (int i = 0; i < 11; ++i) V(i) = std::pow(base, i);
  const auto rep = drift_check(chain, V, {0}, lambda, b);
  json violations = json::array();
  for (const auto& v : rep.violations)
    violations.push_back({{"state", v.state}, {"PV", v.PV}, {"bound", v.bound}, {"margin", v.margin}});
  return report("geometric drift PV <= lambda V + b 1_C", rep.holds,
                {{"lambda", lambda}, {"b", b}, {"C", {0}}, {"V", fmt::format("{}^x", base)},
                 {"up", up}, {"down", down}},
                {{"worst_margin", rep.worst_margin}, {"violations", violations}}, Method::Exact);
}

json appendix_two_state() {
  const auto chain = FiniteChain::from_matrix(two_state(0.1, 0.2));
  const auto cert = minorization_extract(chain, {0, 1}, 1);
  const auto rep = appendix_check(chain, *cert);
  return report("P^{2 n0}(x, y) >= (eps^2 / 4) pi(y and C) on a reversible chain", rep.holds,
                {{"epsilon", cert->epsilon}, {"n0", cert->n0}, {"nu", vec(cert->nu)}, {"pi", vec(chain.pi)}},
                {{"worst_margin", rep.worst_margin}, {"worst_x", rep.worst_x}, {"worst_y", rep.worst_y}},
                Method::Exact);
}

json appendix_random(const FixtureOptions& o) {
  Rng rng(o.seed);
  double worst = HUGE_VAL;
  int failures = 0, checked = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + static_cast<int>(rng.bits() % 6);
    const auto chain = random_birth_death(n, rng);
    StateSet C;
    for (int i = 0; i < n; ++i) C.push_back(i);
    const auto cert = minorization_extract(chain, C, 1);
    if (!cert) continue;
    ++checked;
    const auto rep = appendix_check(chain, *cert);
    worst = std::min(worst, rep.worst_margin);
    failures += rep.holds ? 0 : 1;
  }
  return report("reversible minorization on 50 random birth-death chains", failures == 0 && checked > 0,
                {{"chains", 50}, {"certified", checked}, {"states", "3..8"}},
                {{"worst_margin", worst}, {"failures", failures}}, Method::Exact);
}

json minorization_two_state() {
  const auto chain = FiniteChain::from_matrix(two_state(0.1, 0.2));
  const auto cert = minorization_extract(chain, {0, 1}, 1);
  return report("minorization P^{n0}(x, .) >= eps nu(.) on C", cert.has_value(),
                {{"epsilon", cert ? cert->epsilon : 0.0}, {"nu", cert ? vec(cert->nu) : json::array()}, {"n0", 1}},
                json::object(), Method::Exact);
}

json a1_three_state() {
  Eigen::MatrixXd P(3, 3);
  P << 0.2, 0.8, 0.0, 0.5, 0.5, 0.0, 0.3, 0.3, 0.4;
  const auto rep = check_A1(FiniteChain::from_matrix(P), {0, 1}, {1});
  return report("(A1) P(x, dz) <= M mu_*(dz) on the outer shell", std::isfinite(rep.M),
                {{"M", rep.M}, {"mu_star", vec(rep.mu_star)}, {"vacuous", rep.vacuous}}, json::object(),
                rep.method);
}

json a1_gaussian() {
  const double sigma = 0.7, D = 1.0;
  auto f = [&](double x, double z) {
    const double t = (z - x) / sigma;
    return std::abs(z - x) <= D ? std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * std::numbers::pi)) : 0.0;
  };
  const auto rep = check_A1(f, {{-2.0, -1.0}, {1.0, 2.0}}, {{-3.0, -2.0}, {2.0, 3.0}}, 201);
  const double expected = 2.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return report("(A1) for a Gaussian proposal with jumps capped at D", std::isfinite(rep.M),
                {{"M", rep.M}, {"sigma", sigma}, {"D", D}, {"closed_form", expected}},
                {{"sup_density", rep.sup_density}, {"argmax_x", rep.argmax_x}, {"argmax_z", rep.argmax_z}},
                rep.method);
}

json a1_example3() {
  auto f = [](double x, double z) {
    if (x <= 3.0) return (z >= x - 1.0 && z <= x + 1.0) ? 0.5 : 0.0;
    return (z >= 4.0 && z <= 5.0) ? 1.0 : 0.0;
  };
  const auto rep = check_A1(f, {{2.0, 4.0}}, {{4.0, 6.0}}, 401);
  return report("(A1) for the binary-expansion example, K = [0, 2], D = 2", std::isfinite(rep.M),
                {{"M", rep.M}, {"mu_star", "uniform on [4, 6]"}},
                {{"sup_density", rep.sup_density}, {"argmax_x", rep.argmax_x}, {"argmax_z", rep.argmax_z}},
                rep.method);
}

json eps_delta_gaussian() {
  auto f = [](const std::vector<double>& x, const std::vector<double>& y) {
    const double t = y[0] - x[0];
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
  };
  const auto rep = epsilon_delta_check(f, Box{{0.0}, {1.0}}, 0.5, 201);
  return report("epsilon-delta lower bound for N(x, 1) on [0, 1]", rep.epsilon > 0.0,
                {{"epsilon", rep.epsilon}, {"delta", 0.5}},
                {{"argmin_x", rep.argmin_x}, {"argmin_y", rep.argmin_y}, {"pairs", rep.pairs}}, rep.method);
}

json balls(const FixtureOptions& o) {
  Rng rng(o.seed);
  int fails = 0, out = 0;
  double worst = HUGE_VAL;
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + t % 3;
    const double r = rng.uniform(0.2, 2.0);
    const double R = r + rng.uniform(0.0, 2.0);
    const double w = rng.uniform(0.0, 1.5 * r + (R - r));
    const auto b = ball_overlap(r, R, w, d, std::max<std::size_t>(o.replicas / 5, 1000), rng);
    fails += b.bound_holds ? 0 : 1;
    out += b.in_hypothesis ? 0 : 1;
    worst = std::min(worst, (b.overlap - b.bound) / std::max(b.bound, 1e-300));
  }
  json unit = json::array();
  bool unit_ok = true;
  for (int d = 1; d <= 2; ++d) {
    const auto b = ball_overlap(1.0, 1.0, 1.5, d, 1000000, rng);
    const double rel = std::abs(b.overlap - b.v_d) / b.v_d;
    unit_ok = unit_ok && rel <= 0.01;
    unit.push_back({{"d", d}, {"v_d", b.v_d}, {"estimate", b.overlap}, {"relative_error", rel}});
  }
  return report("Leb(A and B) >= r^d v_d for in-hypothesis ball pairs", fails == 0 && unit_ok,
                {{"triples", 100}, {"dimensions", {1, 2, 3}}},
                {{"failures", fails}, {"out_of_hypothesis", out}, {"worst_relative_slack", worst},
                 {"unit_balls", unit}},
                Method::Empirical);
}

json example2_return(const FixtureOptions& o) {
  const auto spec = cex::ex2::spec_with_beta({2.0, 3.0});
  const cex::ex2::Kernel kernel(spec);
  const auto rep = chain::hitting_time_samples(
      kernel, [&](Rng&) { return cex::ex2::point({1, 1}, spec); },
      [](const chain::Point& x) { return cex::ex2::is_origin(x); }, chain::kDefaultHittingCap, o.replicas, o.seed,
      o.threads);
  const double exact = cex::ex2::expected_return(1, 2.0);
  const double z = discrepancy_z(rep.mean, exact, rep.std_error);
  return report("(A2) finite expected return to O, branch k = 1, beta_1 = 2", z <= kZLimit && rep.n_censored == 0,
                {{"expected", exact}, {"cap", rep.cap}},
                {{"mean", rep.mean}, {"std_error", rep.std_error}, {"z", z}, {"censored_fraction", rep.censored_fraction}},
                Method::Empirical);
}

using Runner = std::function<json(const FixtureOptions&)>;

const std::map<std::string, Runner, std::less<>>& registry() {
  static const std::map<std::string, Runner, std::less<>> r{
      {"two-state-kac", [](const FixtureOptions& o) { return kac(two_state(0.5, 0.5), {0}, 1, o); }},
      {"two-state-kac-k3", [](const FixtureOptions& o) { return kac(two_state(0.5, 0.5), {0}, 3, o); }},
      {"two-state-kac-whole", [](const FixtureOptions& o) { return kac(two_state(0.5, 0.5), {0, 1}, 1, o); }},
      {"birth-death-kac", [](const FixtureOptions& o) { return kac(walk(6, 0.3, 0.4), {2, 3}, 2, o); }},
      {"wald-constant",
       [](const FixtureOptions& o) { return wald([](Rng& g) { return std::pair{1.0, g.bernoulli(0.5)}; }, 1.0, 0.5, o); }},
      {"wald-uniform",
       [](const FixtureOptions& o) {
         return wald([](Rng& g) { return std::pair{g.uniform(0.0, 2.0), g.bernoulli(0.25)}; }, 1.0, 0.25, o);
       }},
      {"wald-dependent",
       [](const FixtureOptions& o) {
         return wald(
             [](Rng& g) {
               const bool i = g.bernoulli(0.5);
               return std::pair{i ? 5.0 : 0.0, i};
             },
             2.5, 0.5, o);
       }},
      {"two-state-minorization", [](const FixtureOptions&) { return minorization_two_state(); }},
      {"two-state-appendix", [](const FixtureOptions&) { return appendix_two_state(); }},
      {"birth-death-appendix", appendix_random},
      {"walk-drift-holds", [](const FixtureOptions&) { return drift(0.2, 0.8, 2.0, 0.8, 0.4); }},
      {"walk-drift-fails", [](const FixtureOptions&) { return drift(0.25, 0.25, 2.0, 0.99, 1.0); }},
      {"three-state-a1", [](const FixtureOptions&) { return a1_three_state(); }},
      {"gaussian-a1", [](const FixtureOptions&) { return a1_gaussian(); }},
      {"example3-a1", [](const FixtureOptions&) { return a1_example3(); }},
      {"gaussian-eps-delta", [](const FixtureOptions&) { return eps_delta_gaussian(); }},
      {"ball-overlap", balls},
      {"example2-return", example2_return},
  };
  return r;
}

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

json run_fixture(std::string_view name, const FixtureOptions& options) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw InvalidArgument(fmt::format("unknown fixture '{}'", name));
  auto rep = it->second(options);
  rep["fixture"] = std::string(name);
  return rep;
}

}  // namespace amc::stability
