#include "amc/io/output.hpp"

#include <chrono>
#include <fstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "amc/errors.hpp"
#include "amc/rng.hpp"

namespace amc::io {

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header)
    : out_(out), columns_(header.size()) {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) out_ << ',';
    out_ << header[k];
  }
  out_ << '\n';
}

void CsvWriter::sep() {
  if (in_row_ == columns_) throw ShapeMismatch("CSV row has more fields than the header");
  if (in_row_++) out_ << ',';
}

CsvWriter& CsvWriter::field(double x) {
  sep();
  out_ << format_real(x);
  return *this;
}

CsvWriter& CsvWriter::field(std::string_view s) {
  sep();
  out_ << s;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw ShapeMismatch("CSV row has fewer fields than the header");
  out_ << '\n';
  in_row_ = 0;
}

void write_trajectories_csv(std::ostream& out, const chain::ReplicaEnsemble& ensemble) {
  std::size_t dim = 0;
  if (!ensemble.trajectories.empty() && !ensemble.trajectories.front().states.empty())
    dim = ensemble.trajectories.front().states.front().dim();
  std::vector<std::string> header{"replica", "n"};
  for (std::size_t k = 0; k < dim; ++k) header.push_back(fmt::format("coord_{}", k));
  CsvWriter csv(out, std::move(header));
  for (std::size_t r = 0; r < ensemble.trajectories.size(); ++r) {
    const auto& tr = ensemble.trajectories[r];
    for (std::size_t t = 0; t < tr.states.size(); ++t) {
      csv.field(r).field(tr.times[t]);
      for (double c : tr.states[t].coords()) csv.field(c);
      csv.end_row();
    }
  }
}

void write_tail_curve_csv(std::ostream& out, std::span<const chain::TailPoint> curve) {
  CsvWriter csv(out, {"L", "sup_tail_prob", "stderr"});
  for (const auto& p : curve) {
    csv.field(p.L).field(p.sup_tail_prob).field(p.std_error);
    csv.end_row();
  }
}

json to_json(const chain::SimulationConfig& config) {
  return json{{"n_steps", config.n_steps},
              {"replicas", config.replicas},
              {"seed", config.seed},
              {"thin", config.thin},
              {"x0", std::vector<double>(config.x0.coords().begin(), config.x0.coords().end())}};
}

json to_json(std::span<const chain::TailPoint> curve) {
  json arr = json::array();
  for (const auto& p : curve)
    arr.push_back({{"L", p.L},
                   {"sup_tail_prob", p.sup_tail_prob},
                   {"stderr", p.std_error},
                   {"argmax_step", p.argmax_step}});
  return arr;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument(fmt::format("cannot open {} for writing", path.string()));
  f << text;
}

json run_metadata(std::string_view command, const json& config, std::uint64_t seed,
                  std::span<const std::string> outputs) {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  return json{{"command", command},
              {"config", config},
              {"seed", seed},
              {"rng", Rng::algorithm},
              {"outputs", std::vector<std::string>(outputs.begin(), outputs.end())},
              {"created_utc", fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now)}};
}

}  // namespace amc::io
