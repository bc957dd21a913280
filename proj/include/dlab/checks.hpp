#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace dlab {

/// Outcome of one named verification experiment. `pass` and `metrics` are
/// pure functions of (name, config, seed); runtime_ms is informational only.
struct CheckReport {
  std::string name;
  bool pass = false;
  std::map<std::string, double> metrics;
  nlohmann::ordered_json config;  // echo of the effective parameters
  std::uint64_t seed = 0;
  std::int64_t runtime_ms = 0;
  std::string notes;
};

/// Registry order is fixed; `check --all` runs it front to back.
const std::vector<std::string>& check_names();

/// Runs one experiment. Unknown names throw std::invalid_argument listing the
/// registry. Missing config keys take their defaults; the effective values
/// are echoed into the report.
CheckReport run_check(const std::string& name, const nlohmann::json& config,
                      std::uint64_t seed);

nlohmann::ordered_json report_to_json(const CheckReport& report);

}  // namespace dlab
