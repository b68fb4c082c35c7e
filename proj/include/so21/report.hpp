#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace so21 {

/// One verified quantity. `expected` is either the target value or the upper
/// bound, depending on how the check was built; `tolerance` is always
/// explicit.
struct Check {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::optional<std::size_t> dimension;

  /// |measured - expected| <= tolerance
  static Check near(std::string name, double measured, double expected, double tolerance);
  /// measured <= bound (expected = bound, tolerance = bound)
  static Check below(std::string name, double measured, double bound);
  /// measured >= bound (expected = bound, tolerance = 0)
  static Check above(std::string name, double measured, double bound);
  /// lo <= measured <= hi (expected = midpoint, tolerance = half-width)
  static Check within(std::string name, double measured, double lo, double hi);
  /// A precondition or structural property that either holds or does not.
  static Check holds(std::string name, bool ok);

  Check& with_dimension(std::size_t dim) {
    dimension = dim;
    return *this;
  }
};

void to_json(nlohmann::ordered_json& j, const Check& c);
void from_json(const nlohmann::ordered_json& j, Check& c);

struct RunReport {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  /// Computed quantities that are reported but not judged.
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<Check> checks;
  double wall_seconds = 0.0;

  void add(Check c) { checks.push_back(std::move(c)); }
  void add(const std::vector<Check>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); }
  bool all_passed() const;
  std::size_t failures() const;
};

void to_json(nlohmann::ordered_json& j, const RunReport& r);
void from_json(const nlohmann::ordered_json& j, RunReport& r);

/// Fixed-width table for terminals.
std::string format_table(const RunReport& r);

}  // namespace so21
