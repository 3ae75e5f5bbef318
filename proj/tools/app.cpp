#include "app.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "amc/cex/example1.hpp"
#include "amc/cex/example2.hpp"
#include "amc/cex/example3.hpp"
#include "amc/chain/diagnostics.hpp"
#include "amc/errors.hpp"
#include "amc/io/output.hpp"
#include "amc/lupus/study.hpp"
#include "amc/mcmc/bam.hpp"
#include "amc/mcmc/stats.hpp"
#include "amc/stability/fixtures.hpp"

namespace amc::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// A failed empirical check: exit code 1 with the message on stderr.
struct CheckFailure {
  std::string message;
};

/// One flag that may also come from --config. Explicit flags win.
struct Flag {
  std::string key;
  CLI::Option* option;
  std::function<void(const json&)> assign;
  std::function<json()> value;
};

class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    const std::string key = key_of(name);
    CLI::Option* opt = app_->add_option(name, var, help);
    flags_.push_back({key, opt, [&var](const json& j) { var = j.get<T>(); }, [&var] { return json(var); }});
    return opt;
  }

  CLI::Option* add_flag(const std::string& name, bool& var, const std::string& help) {
    CLI::Option* opt = app_->add_flag(name, var, help);
    flags_.push_back({key_of(name), opt, [&var](const json& j) { var = j.get<bool>(); }, [&var] { return json(var); }});
    return opt;
  }

  /// Fill unset flags from the config file and return the effective config.
  json merge(const std::string& config_path) const {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw InvalidArgument(fmt::format("cannot read config file '{}'", config_path));
      json cfg;
      try {
        cfg = json::parse(f);
      } catch (const json::exception& e) {
        throw InvalidArgument(fmt::format("config file '{}' is not valid JSON: {}", config_path, e.what()));
      }
      if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");
      for (const auto& [k, v] : cfg.items()) {
        const auto it = std::find_if(flags_.begin(), flags_.end(), [&](const Flag& f) { return f.key == k; });
        if (it == flags_.end()) throw InvalidArgument(fmt::format("unknown config key '{}'", k));
        if (it->option->count() > 0) continue;
        try {
          it->assign(v);
        } catch (const json::exception&) {
          throw InvalidArgument(fmt::format("config key '{}' has the wrong type", k));
        }
      }
    }
    json eff = json::object();
    for (const auto& f : flags_) eff[f.key] = f.value();
    return eff;
  }

 private:
  static std::string key_of(const std::string& name) {
    std::string k = name.substr(name.find_first_not_of('-'));
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
  }

  CLI::App* app_;
  std::vector<Flag> flags_;
};

unsigned default_threads() { return std::clamp(std::thread::hardware_concurrency(), 1U, 16U); }

struct Common {
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::size_t replicas = 0;
  std::string output_dir = "out";
  std::string config;
  unsigned threads = default_threads();
};

void add_common(FlagSet& flags, CLI::App* app, Common& c, bool with_steps, bool with_replicas) {
  flags.add("--seed", c.seed, "master seed; every random stream derives from it");
  if (with_steps) flags.add("--steps", c.steps, "chain steps (0 = subcommand default)");
  if (with_replicas) flags.add("--replicas", c.replicas, "independent replicas (0 = subcommand default)");
  flags.add("--output-dir", c.output_dir, "directory for data files and sidecars");
  flags.add("--threads", c.threads, "worker threads; results do not depend on it");
  app->add_option("--config", c.config, "JSON file with default flag values")->check(CLI::ExistingFile);
}

/// Writes data files and their JSON sidecars.
class Outputs {
 public:
  Outputs(fs::path dir, std::string command, json config, std::uint64_t seed)
      : dir_(std::move(dir)), command_(std::move(command)), config_(std::move(config)), seed_(seed) {}

  void text(const std::string& name, const std::string& content) {
    io::write_text(dir_ / name, content);
    const std::vector<std::string> files{name};
    io::write_json(dir_ / (name + ".meta.json"), io::run_metadata(command_, config_, seed_, files));
    written_.push_back(name);
  }
  void json_file(const std::string& name, const json& doc) { text(name, doc.dump(2) + "\n"); }
  template <class F>
  void csv(const std::string& name, F&& fill) {
    std::ostringstream os;
    fill(os);
    text(name, os.str());
  }
  const std::vector<std::string>& written() const { return written_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::string command_;
  json config_;
  std::uint64_t seed_;
  std::vector<std::string> written_;
};

std::string joined(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
  return s;
}

// ---------------------------------------------------------------- counterexample

json run_example1(Outputs& out, const Common& c, const std::vector<double>& Ls) {
  const std::size_t steps = c.steps ? c.steps : 100000, replicas = c.replicas ? c.replicas : 1000;
  json rows = json::array();
  bool holds = true;
  out.csv("witness.csv", [&](std::ostream& os) {
    io::CsvWriter csv(os, {"L", "column", "max_reach_time", "replicas_reached", "horizon", "prob", "stderr"});
    for (std::size_t i = 0; i < Ls.size(); ++i) {
      const auto w = cex::ex1::witness(Ls[i], replicas, steps, stream_seed(c.seed, i), c.threads);
      csv.field(w.L).field(w.column).field(w.max_reach_time).field(w.replicas_reached).field(w.horizon);
      csv.field(w.prob).field(w.std_error);
      csv.end_row();
      const bool ok = w.prob >= 0.5 - 4.0 * w.std_error;
      holds &= ok;
      rows.push_back({{"L", w.L}, {"column", w.column}, {"horizon", w.horizon}, {"prob", w.prob},
                      {"stderr", w.std_error}, {"margin", w.prob - (0.5 - 4.0 * w.std_error)}, {"holds", ok}});
    }
  });
  return {{"example", 1}, {"condition", "P(X_{n,2} >= L) >= 1/2 - 4 stderr at the witness horizon"},
          {"holds", holds}, {"steps", steps}, {"replicas", replicas}, {"witness", rows}};
}

json run_example2(Outputs& out, const Common& c, const std::vector<double>& Ls) {
  using namespace cex;
  const std::size_t steps = c.steps ? c.steps : 100000, replicas = c.replicas ? c.replicas : 1000;

  // return times to O against the closed form, on a small spec
  const auto small = ex2::spec_with_beta({2.0, 3.0, 4.0, 5.0});
  const ex2::Kernel small_kernel(small);
  json returns = json::array();
  bool returns_ok = true;
  out.csv("return_times.csv", [&](std::ostream& os) {
    io::CsvWriter csv(os, {"k", "beta", "exact", "mc_mean", "stderr", "censored"});
    for (std::int64_t k = 1; k <= 4; ++k) {
      const double beta = small.beta[static_cast<std::size_t>(k - 1)];
      const auto rep = chain::hitting_time_samples(
          small_kernel, [&](Rng&) { return ex2::point({k, 1}, small); },
          [](const chain::Point& x) { return ex2::is_origin(x); }, chain::kDefaultHittingCap, replicas,
          stream_seed(c.seed, 100 + static_cast<std::uint64_t>(k)), c.threads);
      const double exact = ex2::expected_return(k, beta);
      const bool ok = rep.n_censored == 0 &&
                      (rep.std_error == 0.0 ? rep.mean == exact : std::abs(rep.mean - exact) <= 4 * rep.std_error);
      returns_ok &= ok;
      csv.field(k).field(beta).field(exact).field(rep.mean).field(rep.std_error).field(rep.n_censored);
      csv.end_row();
      returns.push_back({{"k", k}, {"exact", exact}, {"mean", rep.mean}, {"stderr", rep.std_error}, {"holds", ok}});
    }
  });

  // the adversary at O pushes mass out without bound
  const auto spec = ex2::build(6);
  const ex2::Kernel kernel(spec);
  const ex2::Adversary adversary(spec);
  chain::SimulationConfig cfg{.n_steps = steps,
                              .replicas = replicas,
                              .x0 = ex2::origin(),
                              .seed = stream_seed(c.seed, 1),
                              .thin = std::max<std::size_t>(1, steps / 1000),
                              .threads = c.threads};
  const auto ens = chain::run_ensemble(kernel, &adversary, [](const chain::Point& x) { return ex2::is_origin(x); }, cfg);
  const auto curve = chain::tail_curve(ens, Ls);
  out.csv("tail_curve.csv", [&](std::ostream& os) { io::write_tail_curve_csv(os, curve); });
  const auto& far = curve.back();
  const bool mass_far = far.sup_tail_prob > 4.0 * far.std_error;
  return {{"example", 2},
          {"condition", "return times match r_k; adversarial tail mass beyond the largest L is nonzero"},
          {"holds", returns_ok && mass_far},
          {"steps", steps},
          {"replicas", replicas},
          {"return_times", returns},
          {"tail_curve", io::to_json(std::span<const chain::TailPoint>(curve))},
          {"margins", {{"tail_minus_4se", far.sup_tail_prob - 4.0 * far.std_error}}}};
}

json run_example3(Outputs& out, const Common& c) {
  const std::size_t steps = c.steps ? c.steps : 2000, replicas = c.replicas ? c.replicas : 100;
  std::size_t good = 0;
  out.csv("paths.csv", [&](std::ostream& os) {
    io::CsvWriter csv(os, {"replica", "reached_case_c", "first_case_c", "increasing_after", "final_x"});
    for (std::size_t r = 0; r < replicas; ++r) {
      const auto s = cex::ex3::summarize_path(0.0, steps, c.seed, r);
      good += s.reached_case_c && s.increasing_after;
      csv.field(r).field(int(s.reached_case_c)).field(s.first_case_c).field(int(s.increasing_after)).field(s.final_x);
      csv.end_row();
    }
  });
  return {{"example", 3}, {"condition", "every replica reaches (3,4] and increases strictly afterwards"},
          {"holds", good == replicas}, {"steps", steps}, {"replicas", replicas}, {"diverged", good}};
}

// ---------------------------------------------------------------- bam

json bam_demo(Outputs& out, const Common& c, const std::string& target_name, bool frozen, double radius, double D) {
  const auto target = mcmc::make_demo_target(target_name);
  const int d = target->dim();
  mcmc::BamConfig cfg;
  const bool lattice = target_name == "lattice-5";
  cfg.K = mcmc::Ball{mcmc::Vector::Constant(d, lattice ? 2.0 : 0.0), radius > 0 ? radius : (lattice ? 10.0 : 3.0)};
  cfg.D = D > 0 ? D : (lattice ? 2.5 : 10.0);
  cfg.Sigma_star = (lattice ? 2.25 : 1.0) * mcmc::Matrix::Identity(d, d);
  if (lattice) cfg.lattice = 1.0;
  const std::size_t steps = c.steps ? c.steps : 20000;
  Rng rng(stream_seed(c.seed, 0));
  const auto run = mcmc::run_bam(*target, cfg, cfg.K.center, steps, rng, !frozen);

  out.csv("trajectory.csv", [&](std::ostream& os) {
    std::vector<std::string> header{"n"};
    for (int i = 0; i < d; ++i) header.push_back(fmt::format("x{}", i));
    io::CsvWriter csv(os, header);
    for (std::size_t n = 0; n < run.states.size(); ++n) {
      csv.field(n);
      for (int i = 0; i < d; ++i) csv.field(run.states[n][i]);
      csv.end_row();
    }
  });
  std::vector<double> r2;
  for (const auto& x : run.states) r2.push_back(x.squaredNorm());
  json sigma = json::array();
  for (int i = 0; i < d; ++i) {
    json row = json::array();
    for (int j = 0; j < d; ++j) row.push_back(run.final_sigma(i, j));
    sigma.push_back(row);
  }
  json doc{{"target", target_name},
           {"steps", steps},
           {"adaptive", !frozen},
           {"K", {{"radius", cfg.K.radius}}},
           {"D", cfg.D},
           {"acceptance_rate", run.acceptance_rate()},
           {"accepted", run.accepted},
           {"jump_rejections", run.jump_rejections},
           {"cases", {{"outside", run.outside}, {"deep", run.deep}, {"band", run.band}}},
           {"gap_constant", run.gap_constant},
           {"final_sigma", sigma},
           {"mean_squared_norm", mcmc::mean(r2)},
           {"mean_squared_norm_stderr", r2.size() >= 100 ? mcmc::batch_means_se(r2) : 0.0}};
  out.json_file("acceptance.json", doc);
  return doc;
}

// ---------------------------------------------------------------- report

int summarize(const fs::path& dir, std::ostream& os) {
  if (!fs::is_directory(dir)) throw InvalidArgument(fmt::format("no such directory '{}'", dir.string()));
  std::vector<fs::path> metas;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().string().ends_with(".meta.json")) metas.push_back(e.path());
  std::sort(metas.begin(), metas.end());
  json runs = json::array();
  for (const auto& m : metas) {
    std::ifstream f(m);
    json meta = json::parse(f, nullptr, false);
    if (meta.is_discarded()) continue;
    const std::string data_name = m.filename().string().substr(0, m.filename().string().size() - 10);
    const fs::path data = m.parent_path() / data_name;
    json entry{{"file", fs::relative(data, dir).generic_string()},
               {"command", meta.value("command", "")},
               {"seed", meta.value("seed", std::uint64_t{0})}};
    if (data.extension() == ".json" && fs::exists(data)) {
      std::ifstream df(data);
      const json doc = json::parse(df, nullptr, false);
      if (!doc.is_discarded() && doc.is_object()) {
        if (doc.contains("holds")) entry["holds"] = doc["holds"];
        if (doc.contains("checks")) entry["checks"] = doc["checks"];
      }
    }
    runs.push_back(entry);
  }
  for (const auto& r : runs) {
    std::string status = "-";
    if (r.contains("holds")) status = r["holds"].get<bool>() ? "holds" : "FAILS";
    if (r.contains("checks")) {
      bool all = true;
      for (const auto& [k, v] : r["checks"].items()) all &= v.get<bool>();
      status = all ? "all checks pass" : "some checks FAIL";
    }
    os << fmt::format("{:<50} {:<28} seed={:<12} {}\n", r["file"].get<std::string>(),
                      r["command"].get<std::string>(), r["seed"].get<std::uint64_t>(), status);
  }
  io::write_json(dir / "summary.json", json{{"runs", runs}});
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial Markov chain toolkit: counterexamples, stability checks, BAM and the lupus study", "amc"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // counterexample run
  auto* cex = app.add_subcommand("counterexample", "simulate the three counterexamples");
  cex->require_subcommand(1);
  auto* cex_run = cex->add_subcommand("run", "run one counterexample and check its claim");
  Common cex_c;
  int which = 0;
  std::vector<double> Ls;
  FlagSet cex_f(cex_run);
  cex_f.add("--which", which, "1, 2 or 3")->check(CLI::Range(1, 3));
  cex_f.add("--L", Ls, "tail levels (example 1: witness levels)");
  add_common(cex_f, cex_run, cex_c, true, true);

  // stability check / list
  auto* stab = app.add_subcommand("stability", "stability condition checks on fixtures");
  stab->require_subcommand(1);
  auto* stab_check = stab->add_subcommand("check", "run a named fixture");
  Common stab_c;
  std::string fixture;
  FlagSet stab_f(stab_check);
  stab_f.add("--fixture", fixture, "fixture name (see 'stability list')");
  add_common(stab_f, stab_check, stab_c, false, true);
  auto* stab_list = stab->add_subcommand("list", "print fixture names");

  // bam demo
  auto* bam = app.add_subcommand("bam", "bounded adaption Metropolis");
  bam->require_subcommand(1);
  auto* bam_demo_cmd = bam->add_subcommand("demo", "run BAM on a named target");
  Common bam_c;
  std::string target;
  bool frozen = false;
  double radius = 0.0, D = 0.0;
  FlagSet bam_f(bam_demo_cmd);
  bam_f.add("--target", target, "gaussian-2d, correlated-2d or lattice-5");
  bam_f.add_flag("--frozen", frozen, "keep the proposal covariance at Sigma_star");
  bam_f.add("--radius", radius, "radius of K (0 = target default)");
  bam_f.add("--D", D, "jump bound (0 = target default)");
  add_common(bam_f, bam_demo_cmd, bam_c, true, false);

  // lupus reproduce / dataset
  auto* lupus_cmd = app.add_subcommand("lupus", "probit regression study on the lupus data");
  lupus_cmd->require_subcommand(1);
  auto* lupus_rep = lupus_cmd->add_subcommand("reproduce", "PX-DA against RCA, ACF and ESS");
  Common lupus_c;
  lupus::StudyOptions study;
  FlagSet lupus_f(lupus_rep);
  lupus_f.add("--M", study.rca.M, "PX-DA warm-up iterations before RCA adapts");
  lupus_f.add("--L", study.rca.L, "coordinate clamp L for the running statistics");
  lupus_f.add("--eps-reg", study.rca.eps_reg, "ridge added to the running covariance");
  lupus_f.add("--D", study.rca.D, "jump bound");
  lupus_f.add("--upsilon", study.rca.upsilon, "edge smoothing width of the independence proposal");
  lupus_f.add("--acf-lags", study.acf_lags, "lags written to acf.csv");
  add_common(lupus_f, lupus_rep, lupus_c, true, false);
  auto* lupus_data = lupus_cmd->add_subcommand("dataset", "export the data table as CSV");
  Common data_c;
  FlagSet data_f(lupus_data);
  add_common(data_f, lupus_data, data_c, false, false);

  // report
  auto* report = app.add_subcommand("report", "summarize every output under a directory");
  Common rep_c;
  FlagSet rep_f(report);
  rep_f.add("--output-dir", rep_c.output_dir, "directory to scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help requests exit 0; every other parse error is a usage error
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    json result;
    if (cex_run->parsed()) {
      const json cfg = cex_f.merge(cex_c.config);
      if (which < 1 || which > 3) throw InvalidArgument("--which must be 1, 2 or 3");
      if (Ls.empty()) Ls = which == 1 ? std::vector<double>{10.0} : std::vector<double>{5.0, 10.0, 20.0, 50.0};
      if (!std::is_sorted(Ls.begin(), Ls.end())) throw InvalidArgument("--L values must be increasing");
      const fs::path dir = fs::path(cex_c.output_dir);
      Outputs o(dir, fmt::format("counterexample run --which {}", which), cfg, cex_c.seed);
      result = which == 1 ? run_example1(o, cex_c, Ls) : which == 2 ? run_example2(o, cex_c, Ls) : run_example3(o, cex_c);
      o.json_file("report.json", result);
      out << fmt::format("example {}: {} ({})\n", which, result["holds"].get<bool>() ? "holds" : "FAILS",
                         joined(o.written()));
      if (!result["holds"].get<bool>())
        throw CheckFailure{fmt::format("counterexample {} claim not reproduced: {}", which, result.dump())};
    } else if (stab_check->parsed()) {
      const json cfg = stab_f.merge(stab_c.config);
      if (fixture.empty()) throw InvalidArgument("--fixture is required");
      stability::FixtureOptions fo{stab_c.replicas ? stab_c.replicas : 100000, stab_c.seed, stab_c.threads};
      result = stability::run_fixture(fixture, fo);
      Outputs o(stab_c.output_dir, "stability check --fixture " + fixture, cfg, stab_c.seed);
      o.json_file("report.json", result);
      out << fmt::format("{}: {} [{}]\n", fixture, result["holds"].get<bool>() ? "holds" : "FAILS",
                         result["method"].get<std::string>());
      if (!result["holds"].get<bool>())
        throw CheckFailure{fmt::format("{} does not hold; margins {}", result["condition"].get<std::string>(),
                                       result["margins"].dump())};
    } else if (stab_list->parsed()) {
      for (const auto& n : stability::fixture_names()) out << n << "\n";
    } else if (bam_demo_cmd->parsed()) {
      const json cfg = bam_f.merge(bam_c.config);
      if (target.empty()) throw InvalidArgument("--target is required");
      Outputs o(bam_c.output_dir, "bam demo --target " + target, cfg, bam_c.seed);
      result = bam_demo(o, bam_c, target, frozen, radius, D);
      out << fmt::format("bam {}: acceptance rate {:.4f}, {} jump rejections\n", target,
                         result["acceptance_rate"].get<double>(), result["jump_rejections"].get<std::size_t>());
    } else if (lupus_rep->parsed()) {
      const json cfg = lupus_f.merge(lupus_c.config);
      study.steps = lupus_c.steps ? lupus_c.steps : 5000;
      study.seed = lupus_c.seed;
      const auto r = lupus::reproduce(study);
      Outputs o(lupus_c.output_dir, "lupus reproduce", cfg, lupus_c.seed);
      o.csv("samples.csv", [&](std::ostream& os) { lupus::write_samples_csv(os, r); });
      o.csv("acf.csv", [&](std::ostream& os) { lupus::write_acf_csv(os, r, study.acf_lags); });
      o.csv("dataset.csv", [&](std::ostream& os) { lupus::write_dataset_csv(os, lupus::load_dataset()); });
      result = lupus::report_json(r, study);
      o.json_file("report.json", result);
      for (const auto& row : r.ess)
        out << fmt::format("{}: S_pxda {:.2f}  S_rca {:.2f}  ESS factor {:.2f}\n", row.param, row.a.S, row.b.S,
                           row.factor);
      if (!r.all_pass()) throw CheckFailure{fmt::format("lupus checks failed: {}", result["checks"].dump())};
    } else if (lupus_data->parsed()) {
      const json cfg = data_f.merge(data_c.config);
      Outputs o(data_c.output_dir, "lupus dataset", cfg, data_c.seed);
      o.csv("dataset.csv", [&](std::ostream& os) { lupus::write_dataset_csv(os, lupus::load_dataset()); });
    } else if (report->parsed()) {
      return summarize(rep_c.output_dir, out);
    }
    return kExitOk;
  } catch (const CheckFailure& f) {
    err << "check failed: " << f.message << "\n";
    return kExitCheckFailed;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidSpec& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"amc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace amc::app
