#pragma once

#include <concepts>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "amc/chain/diagnostics.hpp"
#include "amc/chain/simulate.hpp"

namespace amc::io {

using nlohmann::json;

/// 17 significant digits, enough for any double to read back exactly.
std::string format_real(double x);

/// Row-oriented CSV with '\n' line endings and no quoting (fields never
/// contain commas).
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& field(double x);
  CsvWriter& field(std::string_view s);
  template <std::integral T>
  CsvWriter& field(T x) {
    return field(std::string_view(std::to_string(x)));
  }
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

/// replica,n,coord_0..coord_{d-1}
void write_trajectories_csv(std::ostream& out, const chain::ReplicaEnsemble& ensemble);
/// L,sup_tail_prob,stderr
void write_tail_curve_csv(std::ostream& out, std::span<const chain::TailPoint> curve);

json to_json(const chain::SimulationConfig& config);
json to_json(std::span<const chain::TailPoint> curve);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const json& doc);
void write_text(const std::filesystem::path& path, std::string_view text);

/// Sidecar describing how a set of data files was produced. Everything
/// except `created_utc` is a pure function of the run's inputs.
json run_metadata(std::string_view command, const json& config, std::uint64_t seed,
                  std::span<const std::string> outputs);

}  // namespace amc::io
