#include "perclab/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace perclab {

namespace {

nlohmann::json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json to_json(const CheckReport& report) {
  return nlohmann::json{
      {"check", report.check},
      {"inputs_digest", report.inputs_digest},
      {"lhs", number_or_string(report.lhs)},
      {"rhs", number_or_string(report.rhs)},
      {"pass", report.pass},
      {"slack", number_or_string(report.slack)},
      {"vacuous", report.vacuous},
      {"conditional", report.conditional},
      {"diagnostic", report.diagnostic},
      {"details", report.details},
  };
}

std::string digest(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace perclab
