// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "amc/cex/example1.hpp"
#include "amc/cex/example2.hpp"
#include "amc/cex/example3.hpp"
#include "amc/chain/diagnostics.hpp"
#include "amc/lupus/dataset.hpp"
#include "amc/lupus/probit.hpp"
#include "amc/lupus/study.hpp"
#include "amc/mcmc/bam.hpp"
#include "amc/mcmc/stats.hpp"
#include "amc/stability/fixtures.hpp"
#include "app.hpp"

using namespace amc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

unsigned threads() { return std::clamp(std::thread::hardware_concurrency(), 1U, 16U); }

double Phi(double z) {
  static const boost::math::normal_distribution<> n01;
  return boost::math::cdf(n01, z);
}

Outcome c1_example2_returns() {
  using namespace cex;
  if (ex2::expected_return(1, 2.0) != 5.0) return {false, "r_1(beta=2) != 5"};
  const auto spec = ex2::spec_with_beta({2.0, 3.0, 4.0, 5.0});
  const ex2::Kernel kernel(spec);
  std::string detail = "r_1(2) = 5;";
  bool ok = true;
  for (std::int64_t k = 1; k <= 4; ++k) {
    const double beta = spec.beta[static_cast<std::size_t>(k - 1)];
    const auto rep = chain::hitting_time_samples(
        kernel, [&](Rng&) { return ex2::point({k, 1}, spec); },
        [](const chain::Point& x) { return ex2::is_origin(x); }, chain::kDefaultHittingCap, 100000,
        stream_seed(1, 100 + static_cast<std::uint64_t>(k)), threads());
    const double exact = ex2::expected_return(k, beta);
    const double z = rep.std_error > 0 ? (rep.mean - exact) / rep.std_error : (rep.mean == exact ? 0.0 : HUGE_VAL);
    ok &= rep.n_censored == 0 && std::abs(z) <= 4.0;
    detail += fmt::format(" k={} exact={} mc={:.4f} z={:+.2f}", k, exact, rep.mean, z);
  }
  return {ok, detail};
}

Outcome c2_example1_witness() {
  const auto w = cex::ex1::witness(10.0, 1000, 100000, 1, threads());
  const double bound = 0.5 - 4.0 * w.std_error;
  return {w.prob >= bound, fmt::format("L=10 column={} horizon={} P={:.4f} >= {:.4f}", w.column, w.horizon,
                                       w.prob, bound)};
}

Outcome c3_example3_divergence() {
  int good = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    const auto s = cex::ex3::summarize_path(0.0, 2000, 1, r);
    good += s.reached_case_c && s.increasing_after;
  }
  return {good == 100, fmt::format("{}/100 reach case (c) and increase", good)};
}

Outcome fixtures(const std::vector<std::string>& names, std::size_t replicas) {
  bool ok = true;
  std::string detail;
  for (const auto& n : names) {
    const json r = stability::run_fixture(n, {replicas, 1, threads()});
    const bool holds = r["holds"].get<bool>();
    ok &= holds;
    detail += fmt::format("{}{}={}", detail.empty() ? "" : " ", n, holds ? "ok" : "FAIL");
    if (r["margins"].contains("z")) detail += fmt::format("(z={:+.2f})", r["margins"]["z"].get<double>());
    if (r["margins"].contains("worst_margin"))
      detail += fmt::format("(worst margin {:.3g})", r["margins"]["worst_margin"].get<double>());
  }
  return {ok, detail};
}

Outcome c4_kac_wald() {
  return fixtures({"two-state-kac", "two-state-kac-k3", "two-state-kac-whole", "birth-death-kac", "wald-constant",
                   "wald-uniform", "wald-dependent"},
                  100000);
}

Outcome c5_appendix() { return fixtures({"birth-death-appendix"}, 100000); }

Outcome c6_ball_overlap() {
  const json r = stability::run_fixture("ball-overlap", {100000, 1, threads()});
  const auto& m = r["margins"];
  // analytic unit-ball overlaps, independent of the library
  const double v1 = 0.5;
  const double v2 = 0.45331;
  bool unit_ok = true;
  std::string unit;
  for (const auto& u : m["unit_balls"]) {
    const double pinned = u["d"].get<int>() == 1 ? v1 : v2;
    const double est = u["estimate"].get<double>();
    const double rel = std::abs(est - pinned) / pinned;
    unit_ok &= rel <= 0.01 && std::abs(u["v_d"].get<double>() - pinned) < 1e-5;
    unit += fmt::format(" v{}: mc={:.5f} rel={:.2e}", u["d"].get<int>(), est, rel);
  }
  const bool ok = r["holds"].get<bool>() && m["failures"].get<int>() == 0 && unit_ok;
  return {ok, fmt::format("100 triples, {} failures, worst slack {:.3g};{}", m["failures"].get<int>(),
                          m["worst_relative_slack"].get<double>(), unit)};
}

Outcome c7_bam() {
  using namespace mcmc;
  // frozen lattice chain against the brute-force Metropolis matrix
  const std::vector<double> w{1, 3, 2, 4, 1};
  const LatticeTarget lattice(w);
  BamConfig cfg;
  cfg.K = Ball{Vector::Constant(1, 2.0), 10.0};
  cfg.D = 2.5;
  const double s = 1.5;
  cfg.Sigma_star = Matrix::Constant(1, 1, s * s);
  cfg.lattice = 1.0;
  auto q = [&](int k) { return Phi((k + 0.5) / s) - Phi((k - 0.5) / s); };
  double P[5][5] = {};
  for (int i = 0; i < 5; ++i) {
    double off = 0;
    for (int j = 0; j < 5; ++j)
      if (j != i && std::abs(j - i) <= cfg.D) off += P[i][j] = q(j - i) * std::min(1.0, w[j] / w[i]);
    P[i][i] = 1.0 - off;
  }
  Rng rng(stream_seed(1, 7));
  const std::size_t steps = 1000000;
  const auto run = run_bam(lattice, cfg, Vector::Constant(1, 2.0), steps, rng, false);
  double counts[5][5] = {};
  for (std::size_t n = 0; n < steps; ++n)
    counts[int(run.states[n][0])][int(run.states[n + 1][0])] += 1;
  double worst_z = 0;
  bool lattice_ok = true;
  for (int i = 0; i < 5; ++i) {
    double visits = 0;
    for (int j = 0; j < 5; ++j) visits += counts[i][j];
    for (int j = 0; j < 5; ++j) {
      const double p = P[i][j];
      if (p == 0.0) {
        lattice_ok &= counts[i][j] == 0.0;
        continue;
      }
      const double z = (counts[i][j] / visits - p) / std::sqrt(p * (1 - p) / visits);
      worst_z = std::max(worst_z, std::abs(z));
    }
  }
  lattice_ok &= worst_z <= 4.0;

  // adaptive chain on N(0, I_2)
  const GaussianTarget gauss(Vector::Zero(2), Matrix::Identity(2, 2));
  BamConfig g;
  g.K = Ball{Vector::Zero(2), 3.0};
  g.D = 10.0;
  g.Sigma_star = Matrix::Identity(2, 2);
  Rng rng2(stream_seed(1, 8));
  const auto arun = run_bam(gauss, g, Vector::Zero(2), 200000, rng2);
  std::vector<double> r2;
  for (const auto& x : arun.states) r2.push_back(x.squaredNorm());
  const double m = mean(r2), se = batch_means_se(r2);
  const bool gauss_ok = std::abs(m - 2.0) <= 4.0 * se;
  return {lattice_ok && gauss_ok, fmt::format("lattice worst |z|={:.2f} (<= 4); E|X|^2={:.4f} se={:.4f} z={:+.2f}",
                                              worst_z, m, se, (m - 2.0) / se)};
}

Outcome c8_lupus() {
  lupus::StudyOptions o;
  o.steps = 5000;
  o.seed = 1;
  const auto r = lupus::reproduce(o);
  std::string f;
  for (const auto& row : r.ess) f += fmt::format("{}{:.2f}", f.empty() ? "" : "/", row.factor);
  std::string z;
  for (const auto& s : r.summary) z += fmt::format("{}{:+.2f}", z.empty() ? "" : "/", s.z);
  return {r.all_pass(),
          fmt::format("(a) factors {} in [1.5,10]: {}; (b) z {}: {}; (c) lambda in [{:.3f},{:.3f}]: {}; "
                      "(d) max jump {:.3f} <= 20: {}",
                      f, r.factors_in_range ? "ok" : "FAIL", z, r.means_agree ? "ok" : "FAIL", r.lambda_min,
                      r.lambda_max, r.lambda_in_range ? "ok" : "FAIL", r.rca.max_jump,
                      r.jumps_bounded ? "ok" : "FAIL")};
}

Outcome c9_gradient() {
  const auto& data = lupus::load_dataset();
  Rng rng(stream_seed(1, 9));
  const lupus::Vector3 mle = lupus::probit_mle(data).beta;
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const lupus::Vector3 b = mle + lupus::Vector3(rng.normal(0, 2), rng.normal(0, 4), rng.normal(0, 3));
    const lupus::Vector3 g = lupus::probit_gradient(b, data);
    lupus::Vector3 fd;
    for (int k = 0; k < 3; ++k) {
      lupus::Vector3 up = b, dn = b;
      up[k] += 1e-5;
      dn[k] -= 1e-5;
      fd[k] = (lupus::probit_log_posterior(up, data) - lupus::probit_log_posterior(dn, data)) / 2e-5;
    }
    worst = std::max(worst, (g - fd).norm() / g.norm());
  }
  return {worst < 1e-5, fmt::format("worst relative error {:.2e} over 20 points", worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

Outcome c10_reproducibility() {
  const fs::path root = fs::temp_directory_path() / fmt::format("amc-accept-{}", std::random_device{}());
  const std::vector<std::vector<std::string>> commands{
      {"counterexample", "run", "--which", "1", "--steps", "20000", "--replicas", "200"},
      {"counterexample", "run", "--which", "2", "--steps", "5000", "--replicas", "300"},
      {"counterexample", "run", "--which", "3", "--replicas", "20"},
      {"stability", "check", "--fixture", "birth-death-kac", "--replicas", "5000"},
      {"stability", "check", "--fixture", "ball-overlap", "--replicas", "5000"},
      {"bam", "demo", "--target", "correlated-2d", "--steps", "3000"},
      {"bam", "demo", "--target", "lattice-5", "--steps", "3000"},
      {"lupus", "reproduce", "--steps", "5000"},
      {"lupus", "dataset"}};
  std::size_t files = 0;
  std::string problem;
  for (std::size_t c = 0; c < commands.size() && problem.empty(); ++c) {
    fs::path dirs[2];
    for (int rep = 0; rep < 2; ++rep) {
      dirs[rep] = root / fmt::format("cmd{}-run{}", c, rep);
      auto args = commands[c];
      // the second run also uses a different thread count
      for (const auto& extra : {std::string("--seed"), std::string("11"), std::string("--threads"),
                                std::to_string(rep == 0 ? 1 : 4), std::string("--output-dir"), dirs[rep].string()})
        args.push_back(extra);
      std::ostringstream out, err;
      const int code = app::dispatch(args, out, err);
      if (code == app::kExitUsage) problem = fmt::format("usage error on command {}: {}", c, err.str());
    }
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      const std::string name = e.path().filename().string();
      if (name.ends_with(".meta.json")) continue;
      ++files;
      const fs::path other = dirs[1] / name;
      if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
        problem = fmt::format("{} differs between runs", name);
        break;
      }
      if (!fs::exists(dirs[1] / (name + ".meta.json"))) problem = fmt::format("{} has no sidecar", name);
    }
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  if (!problem.empty()) return {false, problem};
  return {files > 0, fmt::format("{} commands, {} data files byte-identical across runs", commands.size(), files)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "example 2 return times", 10, c1_example2_returns},
      {2, "example 1 non-tightness witness", 120, c2_example1_witness},
      {3, "example 3 divergence", 10, c3_example3_divergence},
      {4, "Kac and Wald validators", 60, c4_kac_wald},
      {5, "reversible minorization on random chains", 10, c5_appendix},
      {6, "ball overlap", 30, c6_ball_overlap},
      {7, "BAM correctness", 120, c7_bam},
      {8, "lupus study", 300, c8_lupus},
      {9, "probit gradient", 1, c9_gradient},
      {10, "reproducibility", HUGE_VAL, c10_reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    const std::string budget = std::isinf(c.budget_s) ? "" : fmt::format(" / {:.0f}s", c.budget_s);
    std::cout << fmt::format("{} {:>2} {}: {} [{:.2f}s{}{}]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail,
                             secs, budget, in_time ? "" : " over budget")
              << std::flush;
  }
  std::cout << fmt::format("{}/{} criteria pass\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
