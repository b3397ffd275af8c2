#include "salmon/report.hpp"

namespace salmon {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Member:
      return "MEMBER";
    case Verdict::NonMember:
      return "NON_MEMBER";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Member:
      return 0;
    case Verdict::NonMember:
      return 1;
    case Verdict::Inconclusive:
      return 3;
  }
  return 2;
}

nlohmann::json MembershipReport::to_json(bool with_timing) const {
  nlohmann::json j;
  j["verdict"] = to_string(verdict);
  j["route"] = route;
  j["mode"] = mode;
  if (seed) j["seed"] = *seed;
  if (!decided_by.empty()) j["decided_by"] = decided_by;
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages) {
    nlohmann::json e;
    e["name"] = s.name;
    e["pass"] = s.pass;
    if (s.witness) e["witness"] = *s.witness;
    if (!s.info.empty()) e["info"] = s.info;
    if (with_timing) e["seconds"] = s.seconds;
    st.push_back(std::move(e));
  }
  j["stages"] = std::move(st);
  return j;
}

}  // namespace salmon
