#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// Named, self-contained checks behind "stability check --fixture <name>".
// Each report has the keys condition, holds, constants, margins and method
// ("exact" or "empirical").
namespace amc::stability {

struct FixtureOptions {
  std::size_t replicas = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

std::vector<std::string> fixture_names();

/// Throws InvalidArgument for an unknown name.
nlohmann::json run_fixture(std::string_view name, const FixtureOptions& options);

}  // namespace amc::stability
