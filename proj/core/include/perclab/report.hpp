#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace perclab {

// One theorem-check record: {check, inputs_digest, lhs, rhs, pass, slack} plus flags and
// check-specific details. `lhs <= rhs + slack` (or >=, per check) is what `pass` reports.
struct CheckReport {
  std::string check;
  std::string inputs_digest;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  double slack = 0.0;
  // The inequality holds for trivial reasons (infinite threshold, bound >= 1, ...).
  bool vacuous = false;
  // Depends on user-supplied constants or trust inputs.
  bool conditional = false;
  // Produced from a non-certified input; not a theorem assertion.
  bool diagnostic = false;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const CheckReport& report);

// FNV-1a 64-bit digest rendered as 16 hex digits.
std::string digest(std::string_view text);

// Stable textual form of a double for digests and CSV output (round-trips exactly).
std::string format_double(double value);

}  // namespace perclab
