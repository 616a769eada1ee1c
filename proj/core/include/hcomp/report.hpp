#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hcomp {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

/// Structured result of a property check. `details` holds the fitted
/// constants and measured quantities; every number there is accompanied by
/// a strategy tag where more than one computation path exists.
struct CheckReport {
  std::string check;
  Verdict verdict = Verdict::Inconclusive;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> notes;

  bool passed() const noexcept { return verdict == Verdict::Pass; }
  nlohmann::json to_json() const;
};

/// Conjunction: Fail if any Fail, else Inconclusive if any, else Pass.
Verdict combine(std::initializer_list<Verdict> verdicts);

}  // namespace hcomp
