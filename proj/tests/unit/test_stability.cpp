#include <doctest.h>

#include <cmath>
#include <numbers>

#include "amc/errors.hpp"
#include "amc/stability/conditions.hpp"
#include "amc/stability/fixtures.hpp"
#include "amc/stability/validators.hpp"

using namespace amc;
using namespace amc::stability;

namespace {

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

StateSet all_states(const FiniteChain& c) {
  StateSet s;
  for (Eigen::Index i = 0; i < c.size(); ++i) s.push_back(i);
  return s;
}

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

TEST_CASE("finite chain validation and stationary law") {
  const auto c = FiniteChain::from_matrix(two_state(0.1, 0.2));
  CHECK(c.pi(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(c.reversible);
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.4, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain::from_matrix(bad), InvalidSpec);
  bad << 1.2, -0.2, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain::from_matrix(bad), InvalidSpec);
  CHECK_THROWS_AS(FiniteChain::from_matrix(Eigen::MatrixXd::Identity(2, 2)), InvalidSpec);

  Eigen::MatrixXd cyc = Eigen::MatrixXd::Zero(3, 3);
  cyc << 0.1, 0.8, 0.1, 0.1, 0.1, 0.8, 0.8, 0.1, 0.1;
  const auto nr = FiniteChain::from_matrix(cyc);
  CHECK_FALSE(nr.reversible);
}

TEST_CASE("minorization extraction") {
  const auto c = FiniteChain::from_matrix(two_state(0.1, 0.2));
  auto cert = minorization_extract(c, {0, 1}, 1);
  REQUIRE(cert);
  CHECK(cert->epsilon == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(cert->nu(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(cert->nu(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  cert = minorization_extract(c, {1}, 1);
  REQUIRE(cert);
  CHECK(cert->epsilon == doctest::Approx(1.0));
  CHECK(cert->nu(0) == doctest::Approx(0.2));

  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK_FALSE(minorization_extract(FiniteChain::from_matrix(swap), {0, 1}, 1));

  // maximality: eps + 1e-9 breaks the bound at the arg-min entry
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto bd = random_birth_death(3 + t % 6, rng);
    const auto C = all_states(bd);
    const auto crt = minorization_extract(bd, C, 1 + t % 3);
    if (!crt) continue;
    const Eigen::MatrixXd Pn = matrix_power(bd.P, crt->n0);
    bool broken = false;
    for (Eigen::Index y = 0; y < bd.size(); ++y) {
      double mn = 1.0;
      for (auto x : C) mn = std::min(mn, Pn(x, y));
      CHECK(mn >= crt->epsilon * crt->nu(y) - 1e-15);
      if ((crt->epsilon + 1e-9) * crt->nu(y) > mn) broken = true;
    }
    CHECK(broken);
  }
}

TEST_CASE("(A1) on finite chains") {
  Eigen::MatrixXd P(3, 3);
  P << 0.2, 0.8, 0.0, 0.5, 0.5, 0.0, 0.3, 0.3, 0.4;
  const auto c = FiniteChain::from_matrix(P);
  auto rep = check_A1(c, {0, 1}, {1});
  CHECK(rep.M == doctest::Approx(0.8));
  CHECK(rep.mu_star(1) == doctest::Approx(1.0));
  CHECK(rep.method == Method::Exact);

  Eigen::MatrixXd Q(3, 3);
  Q << 0.2, 0.3, 0.5, 0.2, 0.3, 0.5, 0.1, 0.1, 0.8;
  rep = check_A1(FiniteChain::from_matrix(Q), {0, 1}, {1, 2});
  CHECK(rep.M == doctest::Approx(0.8));
  CHECK(rep.mu_star(1) == doctest::Approx(0.375));
  CHECK(rep.mu_star(2) == doctest::Approx(0.625));

  rep = check_A1(FiniteChain::from_matrix(walk(5, 0.3, 0.3)), {0}, {3, 4});
  CHECK(rep.vacuous);
  CHECK(rep.M == 0.0);
}

TEST_CASE("(A1) for densities") {
  const double sigma = 0.7, D = 1.0;
  auto gauss = [&](double x, double z) {
    return std::abs(z - x) <= D ? phi((z - x) / sigma) / sigma : 0.0;
  };
  // K = [-1, 1]: K_D \ K and K_2D \ K_D on both sides
  const IntervalSet inner{{-2.0, -1.0}, {1.0, 2.0}}, outer{{-3.0, -2.0}, {2.0, 3.0}};
  auto rep = check_A1(gauss, inner, outer, 101);
  CHECK(rep.M == doctest::Approx(2.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma)));
  CHECK(rep.method == Method::Empirical);

  // the (3, 4] -> U[4, 5] move against uniform on (4, 6]
  auto ex3 = [](double x, double z) {
    if (x <= 3.0) return (z >= x - 1.0 && z <= x + 1.0) ? 0.5 : 0.0;
    return (z >= 4.0 && z <= 5.0) ? 1.0 : 0.0;
  };
  rep = check_A1(ex3, {{2.0, 4.0}}, {{4.0, 6.0}}, 201);
  CHECK(rep.M == doctest::Approx(2.0));
}

TEST_CASE("epsilon-delta grid check") {
  const Box J{{0.0}, {1.0}};
  auto constant = [](const std::vector<double>&, const std::vector<double>&) { return 0.7; };
  CHECK(epsilon_delta_check(constant, J, 0.5, 21).epsilon == 0.7);

  auto gauss = [](const std::vector<double>& x, const std::vector<double>& y) { return phi(y[0] - x[0]); };
  const auto rep = epsilon_delta_check(gauss, J, 0.5, 101);
  CHECK(rep.epsilon == doctest::Approx(phi(0.5)).epsilon(1e-12));
  CHECK(rep.epsilon == doctest::Approx(0.3521).epsilon(1e-4));
  CHECK(std::abs(std::abs(rep.argmin_y[0] - rep.argmin_x[0]) - 0.5) < 1e-12);

  auto holed = [](const std::vector<double>& x, const std::vector<double>& y) {
    return (std::abs(x[0] - 0.5) < 1e-9 && std::abs(y[0] - 0.6) < 1e-9) ? 0.0 : 1.0;
  };
  CHECK(epsilon_delta_check(holed, J, 0.5, 11).epsilon == 0.0);

  CHECK_THROWS_AS(epsilon_delta_check(constant, Box{{1.0}, {1.0}}, 0.5, 11), DegenerateRectangle);
  CHECK_THROWS_AS(epsilon_delta_check(constant, Box{{}, {}}, 0.5, 11), DegenerateRectangle);

  // two dimensions
  const auto r2 = epsilon_delta_check(
      [](const std::vector<double>& x, const std::vector<double>& y) {
        return std::exp(-std::hypot(y[0] - x[0], y[1] - x[1]));
      },
      Box{{0.0, 0.0}, {1.0, 1.0}}, 0.4, 11);
  CHECK(r2.epsilon == doctest::Approx(std::exp(-0.4)).epsilon(1e-12));
}

TEST_CASE("drift checks") {
  SUBCASE("V = 1 holds with equality") {
    const auto c = FiniteChain::from_matrix(walk(4, 0.3, 0.2));
    const auto rep = drift_check(c, Eigen::VectorXd::Ones(4), all_states(c), 0.5, 0.5);
    CHECK(rep.holds);
    CHECK(std::abs(rep.worst_margin) < 1e-15);
  }
  SUBCASE("failures are reported") {
    auto geometric = [](int n, double base) {
      Eigen::VectorXd V(n);
      for (int i = 0; i < n; ++i) V(i) = std::pow(base, i);
      return V;
    };
    struct Case {
      double up, down, base, ratio;
    };
    for (const auto& cs : {Case{0.25, 0.25, 2.0, 1.125}, Case{0.25, 0.25, 1.2, 0.25 * 1.2 + 0.5 + 0.25 / 1.2},
                           Case{0.2, 0.2, 1.5, 0.2 * 1.5 + 0.6 + 0.2 / 1.5}}) {
      const auto c = FiniteChain::from_matrix(walk(11, cs.up, cs.down));
      const auto V = geometric(11, cs.base);
      const auto rep = drift_check(c, V, {0}, 0.99, 100.0);
      CHECK_FALSE(rep.holds);
      CHECK(rep.PV(5) / V(5) == doctest::Approx(cs.ratio).epsilon(1e-12));
    }
  }
  SUBCASE("a walk pushed toward 0 drifts geometrically") {
    const auto c = FiniteChain::from_matrix(walk(11, 0.2, 0.8));
    Eigen::VectorXd V(11);
    for (int i = 0; i < 11; ++i) V(i) = std::pow(2.0, i);
    const auto rep = drift_check(c, V, {0}, 0.8, 0.4);
    CHECK(rep.holds);
    CHECK(rep.PV(5) / V(5) == doctest::Approx(0.8));
    CHECK_FALSE(drift_check(c, V, {0}, 0.8, 0.3).holds);
    CHECK_THROWS_AS(drift_check(c, V, {0}, 1.0, 0.3), InvalidArgument);
    // independent summation order
    for (Eigen::Index x = 0; x < 11; ++x) {
      double s = 0.0;
      for (Eigen::Index y = 10; y >= 0; --y) s += c.P(x, y) * V(y);
      CHECK(std::abs(s - rep.PV(x)) <= 1e-12 * std::abs(s));
    }
  }
  SUBCASE("sampled kernel") {
    const auto c = FiniteChain::from_matrix(walk(11, 0.2, 0.8));
    const FiniteChainKernel k(c);
    auto V = [](const chain::Point& x) { return std::pow(2.0, x[0]); };
    auto inC = [](const chain::Point& x) { return x[0] == 0.0; };
    const auto ok = drift_check(k, V, inC, 0.8, 0.4, c.states, 20000, 3);
    CHECK(ok.holds);
    CHECK(ok.method == Method::Empirical);
    const auto bad = drift_check(k, V, inC, 0.5, 0.0, c.states, 20000, 3);
    CHECK_FALSE(bad.holds);
  }
}

TEST_CASE("appendix lemma on reversible chains") {
  const auto c = FiniteChain::from_matrix(two_state(0.1, 0.2));
  const auto cert = minorization_extract(c, {0, 1}, 1);
  REQUIRE(cert);
  const auto rep = appendix_check(c, *cert);
  CHECK(rep.holds);
  CHECK(matrix_power(c.P, 2)(0, 0) == doctest::Approx(0.83));

  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto bd = random_birth_death(3 + t % 6, rng);
    REQUIRE(bd.reversible);
    const auto C = all_states(bd);
    const auto crt = minorization_extract(bd, C, 1);
    if (!crt) continue;
    CHECK(appendix_check(bd, *crt).holds);
  }

  Eigen::MatrixXd cyc(3, 3);
  cyc << 0.1, 0.8, 0.1, 0.1, 0.1, 0.8, 0.8, 0.1, 0.1;
  const auto nr = FiniteChain::from_matrix(cyc);
  const auto ncert = minorization_extract(nr, {0, 1, 2}, 1);
  REQUIRE(ncert);
  CHECK_THROWS_AS(appendix_check(nr, *ncert), NotReversible);
}

TEST_CASE("Kac validator") {
  const auto c = FiniteChain::from_matrix(two_state(0.5, 0.5));
  auto d = kac_validate(c, {0}, 1, 100000, 7);
  CHECK(d.expected == doctest::Approx(2.0));
  CHECK(d.z <= 4.0);
  d = kac_validate(c, {0}, 3, 100000, 8);
  CHECK(d.expected == doctest::Approx(6.0));
  CHECK(d.z <= 4.0);
  d = kac_validate(c, {0, 1}, 1, 1000, 9);
  CHECK(d.mean == 1.0);
  CHECK(d.z == 0.0);
  const auto bd = FiniteChain::from_matrix(walk(6, 0.3, 0.4));
  d = kac_validate(bd, {2, 3}, 2, 100000, 10, 2);
  CHECK(d.z <= 4.0);
}

TEST_CASE("Wald validator") {
  auto r = wald_validate([](Rng& g) { return std::pair{1.0, g.bernoulli(0.5)}; }, 100000, 1, 2.0);
  CHECK(r.s.z <= 4.0);
  r = wald_validate([](Rng& g) { return std::pair{g.uniform(0.0, 2.0), g.bernoulli(0.25)}; }, 100000, 2, 4.0);
  CHECK(r.s.z <= 4.0);
  r = wald_validate(
      [](Rng& g) {
        const bool i = g.bernoulli(0.5);
        return std::pair{i ? 5.0 : 0.0, i};
      },
      100000, 3, 5.0);
  CHECK(r.s.z <= 4.0);
  CHECK(r.plugin == doctest::Approx(5.0).epsilon(0.02));
  CHECK_THROWS_AS(wald_validate([](Rng&) { return std::pair{1.0, false}; }, 10, 1, std::nullopt, 100), NoSuccess);
}

TEST_CASE("ball overlap") {
  Rng rng(21);
  CHECK(unit_overlap_exact(2) == doctest::Approx(0.45331).epsilon(1e-5));
  auto rep = ball_overlap(1.0, 1.0, 1.5, 1, 1000000, rng);
  CHECK(std::abs(rep.overlap - 0.5) <= 0.005);
  CHECK(rep.bound_holds);
  rep = ball_overlap(1.0, 1.0, 1.5, 2, 1000000, rng);
  CHECK(std::abs(rep.overlap - 0.45331) <= 0.01 * 0.45331);
  rep = ball_overlap(1.0, 2.0, 2.5, 2, 200000, rng);
  CHECK(rep.in_hypothesis);
  CHECK(rep.bound_holds);

  // v_3 against the lens volume pi (4r + w)(2r - w)^2 / 12
  rep = ball_overlap(1.0, 1.0, 1.5, 3, 1000000, rng);
  const double v3 = std::numbers::pi * 5.5 * 0.25 / 12.0;
  CHECK(std::abs(rep.v_d - v3) <= 4.0 * rep.v_d_se);
  CHECK(std::abs(rep.overlap - v3) <= 4.0 * rep.overlap_se);

  for (int t = 0; t < 100; ++t) {
    const int d = 1 + t % 3;
    const double r = rng.uniform(0.2, 2.0);
    const double R = r + rng.uniform(0.0, 2.0);
    const double w = rng.uniform(0.0, 1.5 * r + (R - r));
    const auto b = ball_overlap(r, R, w, d, 20000, rng);
    CHECK(b.in_hypothesis);
    CHECK(b.bound_holds);
  }
  rep = ball_overlap(1.0, 1.0, 1.9, 2, 20000, rng);
  CHECK_FALSE(rep.in_hypothesis);
  CHECK_THROWS_AS(ball_overlap(2.0, 1.0, 0.5, 2, 100, rng), InvalidArgument);
}

TEST_CASE("every fixture reports the standard keys") {
  stability::FixtureOptions opt;
  opt.replicas = 2000;
  opt.seed = 3;
  for (const auto& name : stability::fixture_names()) {
    CAPTURE(name);
    const auto j = stability::run_fixture(name, opt);
    for (const char* key : {"condition", "holds", "constants", "margins", "method"}) CHECK(j.contains(key));
    CHECK(j["holds"].is_boolean());
    CHECK((j["method"] == "exact" || j["method"] == "empirical"));
  }
  CHECK_FALSE(stability::run_fixture("walk-drift-fails", opt)["holds"].get<bool>());
  CHECK_THROWS_AS(stability::run_fixture("no-such-fixture", opt), InvalidArgument);
}
