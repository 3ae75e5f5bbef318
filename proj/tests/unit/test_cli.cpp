#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include <json.hpp>

#include "app.hpp"

namespace fs = std::filesystem;
using namespace amc::app;

namespace {

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("amc-cli-" + std::to_string(std::random_device{}()));
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("exit codes") {
  TempDir tmp;
  const std::string dir = tmp.path.string();
  CHECK(run({}) == kExitUsage);
  CHECK(run({"frobnicate"}) == kExitUsage);
  CHECK(run({"counterexample", "run", "--which", "4"}) == kExitUsage);
  CHECK(run({"stability", "check", "--fixture", "no-such-fixture", "--output-dir", dir}) == kExitUsage);
  CHECK(run({"bam", "demo", "--target", "banana", "--output-dir", dir}) == kExitUsage);
  CHECK(run({"stability", "check", "--fixture", "walk-drift-holds", "--output-dir", dir}) == kExitOk);
  std::string err;
  CHECK(run({"stability", "check", "--fixture", "walk-drift-fails", "--output-dir", dir}, &err) == kExitCheckFailed);
  CHECK(err.find("margin") != std::string::npos);
  CHECK(run({"report", "--output-dir", (tmp.path / "missing").string()}) == kExitUsage);
  CHECK(run({"report", "--output-dir", dir}) == kExitOk);
  CHECK(fs::exists(tmp.path / "summary.json"));
}

TEST_CASE("stability report carries the standard keys and a sidecar") {
  TempDir tmp;
  REQUIRE(run({"stability", "check", "--fixture", "two-state-kac", "--replicas", "2000", "--seed", "5",
               "--output-dir", tmp.path.string()}) == kExitOk);
  std::ifstream f(tmp.path / "report.json");
  const auto doc = nlohmann::json::parse(f);
  for (const char* key : {"condition", "holds", "constants", "margins", "method"}) CHECK(doc.contains(key));
  std::ifstream m(tmp.path / "report.json.meta.json");
  const auto meta = nlohmann::json::parse(m);
  CHECK(meta["seed"] == 5);
  CHECK(meta["rng"].get<std::string>().find("mt19937_64") != std::string::npos);
  CHECK(meta.contains("created_utc"));
  CHECK(slurp(tmp.path / "report.json").find("created_utc") == std::string::npos);
}

TEST_CASE("config file supplies defaults and flags override it") {
  TempDir tmp;
  fs::create_directories(tmp.path);
  const fs::path cfg = tmp.path / "cfg.json";
  std::ofstream(cfg) << R"({"steps": 50, "seed": 3, "target": "gaussian-2d"})";
  const fs::path out = tmp.path / "out";
  REQUIRE(run({"bam", "demo", "--config", cfg.string(), "--steps", "80", "--output-dir", out.string()}) == kExitOk);
  std::ifstream m(out / "trajectory.csv.meta.json");
  const auto meta = nlohmann::json::parse(m);
  CHECK(meta["config"]["steps"] == 80);
  CHECK(meta["config"]["seed"] == 3);
  CHECK(meta["config"]["target"] == "gaussian-2d");
  const std::string csv = slurp(out / "trajectory.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 82);  // header, X_0..X_80
  CHECK(csv.find('\r') == std::string::npos);

  std::ofstream(cfg) << R"({"stepz": 50})";
  CHECK(run({"bam", "demo", "--target", "gaussian-2d", "--config", cfg.string(), "--output-dir", out.string()}) ==
        kExitUsage);
  std::ofstream(cfg) << "{not json";
  CHECK(run({"bam", "demo", "--target", "gaussian-2d", "--config", cfg.string(), "--output-dir", out.string()}) ==
        kExitUsage);
}

TEST_CASE("lupus reproduce writes every output") {
  TempDir tmp;
  const int code = run({"lupus", "reproduce", "--steps", "600", "--M", "100", "--seed", "2", "--output-dir",
                        tmp.path.string()});
  CHECK((code == kExitOk || code == kExitCheckFailed));
  for (const char* name : {"samples.csv", "acf.csv", "report.json", "dataset.csv"}) {
    CHECK(fs::exists(tmp.path / name));
    CHECK(fs::exists(tmp.path / (std::string(name) + ".meta.json")));
  }
  const std::string samples = slurp(tmp.path / "samples.csv");
  CHECK(samples.rfind("sampler,n,beta0,beta1,beta2\n", 0) == 0);
  CHECK(slurp(tmp.path / "acf.csv").rfind("sampler,param,lag,rho\n", 0) == 0);
  // 17 significant digits
  const auto line_end = samples.find('\n', samples.find("pxda,1,"));
  const std::string row = samples.substr(samples.find("pxda,1,"), line_end - samples.find("pxda,1,"));
  const std::string first = row.substr(7, row.find(',', 7) - 7);
  std::size_t digits = 0;
  for (char ch : first) digits += std::isdigit(static_cast<unsigned char>(ch)) ? 1 : 0;
  CHECK(digits >= 17);
}
