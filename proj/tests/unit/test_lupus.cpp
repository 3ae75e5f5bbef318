#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "amc/errors.hpp"
#include "amc/lupus/dataset.hpp"
#include "amc/lupus/ess.hpp"
#include "amc/lupus/probit.hpp"
#include "amc/lupus/pxda.hpp"
#include "amc/lupus/rca.hpp"
#include "amc/mcmc/stats.hpp"

using namespace amc;
using namespace amc::lupus;

namespace {

const LupusDataset& data() { return load_dataset(); }

Vector3 fd_gradient(const Vector3& b, double h) {
  Vector3 g;
  for (int k = 0; k < 3; ++k) {
    Vector3 up = b, dn = b;
    up[k] += h;
    dn[k] -= h;
    g[k] = (probit_log_posterior(up, data()) - probit_log_posterior(dn, data())) / (2 * h);
  }
  return g;
}

std::vector<double> coord(const std::vector<Eigen::Vector3d>& xs, int p, std::size_t from = 1) {
  std::vector<double> out;
  for (std::size_t i = from; i < xs.size(); ++i) out.push_back(xs[i][p]);
  return out;
}

}  // namespace

TEST_CASE("dataset matches the table") {
  const auto& d = data();
  CHECK(d.patients() == 55);
  CHECK(d.positives() == 18);
  CHECK(d.cells.size() == 25);
  auto cell = [&](double g, double a) {
    for (const auto& c : d.cells)
      if (c.delta_igg == g && c.iga == a) return std::make_pair(c.cases, c.total);
    return std::make_pair(-1, -1);
  };
  CHECK(cell(-2.0, 0.0) == std::make_pair(0, 7));
  CHECK(cell(1.0, 2.0) == std::make_pair(4, 4));
  CHECK(cell(0.5, 0.0) == std::make_pair(3, 4));
  CHECK(cell(1.5, 0.5) == std::make_pair(-1, -1));

  // row-major expansion, cases first within a cell
  std::vector<int> ys;
  for (Eigen::Index i = 0; i < d.X.rows(); ++i)
    if (d.X(i, 1) == 0.5 && d.X(i, 2) == 0.0) ys.push_back(d.y[static_cast<std::size_t>(i)]);
  CHECK(ys == std::vector<int>{1, 1, 1, 0});
  CHECK(d.X(0, 1) == -3.0);
  CHECK(d.X(54, 1) == 1.5);
  CHECK((d.X.col(0).array() == 1.0).all());

  std::ostringstream os;
  write_dataset_csv(os, d);
  const std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 26);
  CHECK(s.rfind("delta_igg,iga,cases,total\n", 0) == 0);
  CHECK(s.find('\r') == std::string::npos);
}

TEST_CASE("probit log posterior") {
  CHECK(probit_log_posterior(Vector3::Zero(), data()) == doctest::Approx(55 * std::log(0.5)).epsilon(1e-14));
  CHECK(55 * std::log(0.5) == doctest::Approx(-38.1231).epsilon(1e-6));

  // direct evaluation with Boost in moderate range
  const boost::math::normal_distribution<long double> N;
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Vector3 b(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    long double ref = 0;
    for (Eigen::Index i = 0; i < 55; ++i) {
      const long double eta = data().X.row(i).dot(b);
      ref += data().y[static_cast<std::size_t>(i)] ? std::log(boost::math::cdf(N, eta))
                                                   : std::log(boost::math::cdf(boost::math::complement(N, eta)));
    }
    CHECK(probit_log_posterior(b, data()) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
  }

  const double far = probit_log_posterior(Vector3(1e6, 0, 0), data());
  CHECK(std::isfinite(far));
  CHECK(far < -1e11);
  CHECK(std::isfinite(probit_log_posterior(Vector3(-40, 0, 0), data())));
}

TEST_CASE("gradient against central differences") {
  const Vector3 g0 = probit_gradient(Vector3::Zero(), data());
  const Vector3 fd0 = fd_gradient(Vector3::Zero(), 1e-5);
  CHECK((g0 - fd0).norm() / g0.norm() < 1e-6);

  Rng rng(9);
  const Vector3 mle = probit_mle(data()).beta;
  for (int t = 0; t < 20; ++t) {
    const Vector3 b = mle + Vector3(rng.normal(0, 2), rng.normal(0, 4), rng.normal(0, 3));
    const Vector3 g = probit_gradient(b, data());
    CAPTURE(b.transpose());
    CHECK((g - fd_gradient(b, 1e-5)).norm() / g.norm() < 1e-5);
    // Hessian against differences of the gradient
    Eigen::Matrix3d fd;
    for (int k = 0; k < 3; ++k) {
      Vector3 up = b, dn = b;
      up[k] += 1e-5;
      dn[k] -= 1e-5;
      fd.col(k) = (probit_gradient(up, data()) - probit_gradient(dn, data())) / 2e-5;
    }
    const Eigen::Matrix3d H = probit_hessian(b, data());
    CHECK((H - fd).norm() / H.norm() < 1e-5);
  }
}

TEST_CASE("Newton MLE") {
  const auto m = probit_mle(data());
  CHECK(m.gradient_norm < 1e-10);
  CHECK(probit_gradient(m.beta, data()).norm() < 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(probit_hessian(m.beta, data()));
  CHECK(eig.eigenvalues().maxCoeff() < 0.0);
  // a maximum: nearby points are lower
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    const Vector3 b = m.beta + 1e-3 * Vector3(rng.normal(), rng.normal(), rng.normal());
    CHECK(probit_log_posterior(b, data()) <= probit_log_posterior(m.beta, data()));
  }
}

TEST_CASE("PX-DA pieces") {
  const PxDa px(data());
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const Vector3 b(rng.normal(0, 3), rng.normal(0, 5), rng.normal(0, 3));
    const Eigen::VectorXd phi = px.draw_latent(b, rng);
    for (Eigen::Index i = 0; i < phi.size(); ++i) REQUIRE((phi[i] > 0) == (data().y[static_cast<std::size_t>(i)] == 1));
  }
  const Vector3 c(0.3, -1.25, 2.0);
  CHECK((px.least_squares(data().X * c) - c).norm() < 1e-12);

  LupusDataset bad = data();
  bad.X.col(2) = bad.X.col(1);
  CHECK_THROWS_AS(PxDa{bad}, InvalidSpec);
}

TEST_CASE("PX-DA leaves the posterior invariant at desk scale") {
  const PxDa px(data());
  const Vector3 mle = probit_mle(data()).beta;
  Rng r1 = Rng::for_stream(11, 0), r2 = Rng::for_stream(11, 1);
  const auto a = run_pxda(mle, 20000, px, r1);
  const auto b = run_pxda(mle, 20000, px, r2);
  Rng r3 = Rng::for_stream(11, 2);
  const auto ref = run_pxda(mle, 50000, px, r3);
  Rng r4 = Rng::for_stream(11, 3);
  const auto short_run = run_pxda(mle, 5000, px, r4);
  for (int p = 0; p < 3; ++p) {
    CAPTURE(p);
    const auto xa = coord(a, p), xb = coord(b, p), xr = coord(ref, p), xs = coord(short_run, p);
    const double se_ab = std::hypot(mcmc::batch_means_se(xa, 20), mcmc::batch_means_se(xb, 20));
    CHECK(std::abs(mcmc::mean(xa) - mcmc::mean(xb)) < 4 * se_ab);
    const double se_rs = std::hypot(mcmc::batch_means_se(xr, 20), mcmc::batch_means_se(xs, 20));
    CHECK(std::abs(mcmc::mean(xr) - mcmc::mean(xs)) < 4 * se_rs);
  }
}

TEST_CASE("RCA bookkeeping") {
  RcaConfig cfg;
  SUBCASE("clamp") {
    CHECK(clamp_coords(Vector3(1, -2, 3), cfg.L) == Vector3(1, -2, 3));
    CHECK(clamp_coords(Vector3(2 * cfg.L, -3 * cfg.L, 0), cfg.L) == Vector3(cfg.L, -cfg.L, 0));
  }
  SUBCASE("constant history gives the ridge exactly") {
    RcaState st(cfg);
    for (int i = 0; i < 10; ++i) st.update_stats(Vector3(0.1, -7, 3.3));
    CHECK(st.Sigma() == cfg.eps_reg * Eigen::Matrix3d::Identity());
    CHECK(st.mu() == Vector3(0.1, -7, 3.3));
  }
  SUBCASE("clamped history") {
    RcaState st(cfg);
    st.update_stats(Vector3(500, 0, 0));
    st.update_stats(Vector3(-500, 0, 0));
    CHECK(st.mu()[0] == 0.0);
    CHECK(st.Sigma()(0, 0) == doctest::Approx(2 * cfg.L * cfg.L + cfg.eps_reg));
  }
  SUBCASE("define_K") {
    CHECK(define_K(Vector3::Zero(), Eigen::Vector3d(1, 4, 0.25).asDiagonal()).radius == 2.0);
    CHECK(define_K(Vector3::Zero(), Eigen::Matrix3d::Identity()).radius == 1.0);
    CHECK(define_K(Vector3::Zero(), 1e-6 * Eigen::Matrix3d::Identity()).radius == doctest::Approx(1e-3));
    CHECK_THROWS_AS(define_K(Vector3::Zero(), Eigen::Matrix3d::Zero()), InvalidSpec);
  }
  SUBCASE("lambda") {
    CHECK(lambda_from_theta(0.05) == 0.2);
    CHECK(lambda_from_theta(0.5) == 0.5);
    CHECK(lambda_from_theta(0.95) == 0.8);
    RcaState st(cfg);
    CHECK(st.lambda() == 0.5);
    st.record_im(false);
    CHECK(st.lambda() == 0.2);
    for (int i = 0; i < 9; ++i) st.record_im(true);
    CHECK(st.theta() == 0.9);
    CHECK(st.lambda() == 0.8);
  }
  SUBCASE("config validation") {
    RcaConfig bad;
    bad.D = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
  }
}

TEST_CASE("RCA run contracts") {
  const PxDa px(data());
  const ProbitPosterior target(data());
  const Vector3 mle = probit_mle(data()).beta;
  RcaConfig cfg;
  Rng rng(5);
  const auto run = run_rca(mle, 5000, cfg, px, target, rng);
  REQUIRE(run.states.size() == cfg.M + 5001);
  for (std::size_t n = 1; n < run.states.size(); ++n) REQUIRE((run.states[n] - run.states[n - 1]).norm() <= cfg.D);
  for (double l : run.lambda_trace) REQUIRE((l >= 0.2 && l <= 0.8));
  CHECK(run.im_selected > 0);
  CHECK(run.im_accepted > 0);
  CHECK_FALSE(run.small_K);
  CHECK(std::isfinite(run.gap_constant));
  CHECK(run.K.radius > 1.0);
}

TEST_CASE("RCA with frozen parameters targets the posterior") {
  // K, mu, Sigma and lambda fixed from a PX-DA pilot; the kernel must then be
  // exactly invariant, so its long-run means match a PX-DA reference.
  const PxDa px(data());
  const ProbitPosterior target(data());
  const Vector3 mle = probit_mle(data()).beta;
  RcaConfig cfg;
  Rng pilot_rng(40);
  const auto pilot = run_pxda(mle, 2000, px, pilot_rng);
  RcaState st(cfg);
  for (const auto& x : pilot) st.update_stats(x);
  st.fix_K(define_K(st.mu(), st.Sigma()));
  st.pin_lambda(0.8);

  Rng rng(41);
  std::vector<Eigen::Vector3d> chain{mle};
  for (int n = 0; n < 40000; ++n) chain.push_back(rca_step(chain.back(), st, cfg, target, px, rng));
  Rng ref_rng(42);
  const auto ref = run_pxda(mle, 40000, px, ref_rng);
  for (int p = 0; p < 3; ++p) {
    CAPTURE(p);
    const auto a = coord(chain, p), b = coord(ref, p);
    const double se = std::hypot(mcmc::batch_means_se(a, 20), mcmc::batch_means_se(b, 20));
    CHECK(std::abs(mcmc::mean(a) - mcmc::mean(b)) < 4 * se);
  }
}

TEST_CASE("acf") {
  Rng rng(1);
  const std::size_t n = 100000;
  std::vector<double> wn(n), ar(n);
  for (auto& v : wn) v = rng.normal();
  ar[0] = rng.normal() / std::sqrt(1 - 0.81);
  for (std::size_t i = 1; i < n; ++i) ar[i] = 0.9 * ar[i - 1] + rng.normal();

  const auto r_wn = acf(wn, 50);
  for (double r : r_wn) CHECK(std::abs(r) < 4 / std::sqrt(double(n)));
  const auto r_ar = acf(ar, 10);
  for (std::size_t k = 1; k <= 10; ++k) CHECK(std::abs(r_ar[k - 1] - std::pow(0.9, double(k))) < 0.02);

  std::vector<double> rev(ar.rbegin(), ar.rend());
  const auto r_rev = acf(rev, 10);
  for (std::size_t k = 0; k < 10; ++k) CHECK(r_rev[k] == doctest::Approx(r_ar[k]).epsilon(1e-12));

  CHECK_THROWS_AS(acf(std::vector<double>(100, 2.0), 5), ConstantSeries);
  CHECK_THROWS_AS(acf(std::vector<double>{1, 2, 3}, 3), InvalidArgument);
}

TEST_CASE("ess report") {
  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? 1.0 : -1.0;
  const std::vector<std::string> names{"x"};
  const std::vector<std::vector<double>> one{alt};
  const auto rows = ess_report(one, one, names);
  CHECK(rows[0].a.S == 0.0);
  CHECK(rows[0].ess_a == 1000.0);
  CHECK(rows[0].factor == 1.0);

  Rng rng(3);
  const std::size_t n = 100000;
  std::vector<double> wn(n), ar(n);
  for (auto& v : wn) v = rng.normal();
  ar[0] = rng.normal() / std::sqrt(1 - 0.81);
  for (std::size_t i = 1; i < n; ++i) ar[i] = 0.9 * ar[i - 1] + rng.normal();
  const std::vector<std::vector<double>> a{ar}, b{wn};
  const auto r = ess_report(a, b, names, 1000);
  CHECK(r[0].factor == doctest::Approx(19.0).epsilon(0.25));

  const std::vector<std::vector<double>> shorter{std::vector<double>(10, 1.0)};
  CHECK_THROWS_AS(ess_report(a, shorter, names), ShapeMismatch);
}
