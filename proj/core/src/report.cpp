#include "hcomp/report.hpp"

namespace hcomp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["verdict"] = to_string(verdict);
  j["details"] = details;
  j["notes"] = notes;
  return j;
}

Verdict combine(std::initializer_list<Verdict> verdicts) {
  bool inconclusive = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::Fail) return Verdict::Fail;
    if (v == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

}  // namespace hcomp
