#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "salmon/strassen.hpp"

namespace salmon {

enum class Outcome { Pass, Fail, Skip };
std::string to_string(Outcome o);

struct AcceptanceOptions {
  /// Criterion numbers 1..9 to run; empty runs all of them.
  std::vector<int> criteria;
  /// LM data file; unset means default_lm_path().
  std::optional<std::filesystem::path> lm_file;
  std::uint64_t seed = 20240;
  std::size_t dimension_samples = kDefaultDimensionSamples;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  Outcome outcome = Outcome::Skip;
  double seconds = 0;
  /// Wall-clock limit; exceeding it fails the criterion.
  double limit_seconds = 0;
  std::string detail;
  nlohmann::json data = nlohmann::json::object();
  /// "PASS  3  positive soundness 3x3x4  (1.2 s / 60 s)  detail".
  std::string line() const;
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;
  /// No criterion failed.
  bool ok() const;
  nlohmann::json to_json() const;
};

/// Runs the selected criteria in order; `on_result` sees each one as it finishes.
AcceptanceReport run_acceptance(const AcceptanceOptions& opts,
                                const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace salmon
