#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace salmon {

enum class Verdict { Member, NonMember, Inconclusive };

std::string to_string(Verdict v);
/// Process exit code for a verdict: 0 member, 1 non-member, 3 inconclusive.
int exit_code(Verdict v);

struct Stage {
  std::string name;
  bool pass = true;
  /// Present on failure: the evidence (nonzero minor, nonzero value, ...).
  std::optional<nlohmann::json> witness;
  /// Stage metadata such as direction l, family, trials, prime.
  nlohmann::json info = nlohmann::json::object();
  double seconds = 0;
};

struct MembershipReport {
  Verdict verdict = Verdict::Member;
  std::string route;
  std::vector<Stage> stages;
  std::string mode;
  std::optional<std::uint64_t> seed;
  /// Name of the stage that fixed the verdict (empty when every stage passed).
  std::string decided_by;

  /// Timing fields are left out so that reports are reproducible byte for byte.
  nlohmann::json to_json(bool with_timing = false) const;
};

}  // namespace salmon
