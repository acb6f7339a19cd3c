#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tensorial {

inline constexpr const char* kSuiteVersion = "1.0";
inline constexpr int kCheckCount = 11;

struct CheckRecord {
  int id = 0;
  std::string anchor;
  nlohmann::json values = nlohmann::json::object();
  nlohmann::json tolerance = nlohmann::json::object();
  bool pass = false;
  double wall_seconds = 0;
  double cpu_seconds = 0;  // thread CPU time; runtime budgets are checked against this
  std::string error;       // exception text when the check threw
};

struct Report {
  std::string version = kSuiteVersion;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  double wall_seconds = 0;
  bool all_pass() const;
};

/// One acceptance check (1-based id). Never throws; failures land in the record.
CheckRecord run_check(int id, std::uint64_t seed);

/// Runs every check on a pool of `jobs` workers; records come back ordered by id.
Report reproduce_suite(int jobs = 1, std::uint64_t seed = 2024);

nlohmann::json report_to_json(const Report& r);

}  // namespace tensorial
