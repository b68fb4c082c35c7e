#include "so21/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace so21 {

Check Check::near(std::string name, double measured, double expected, double tolerance) {
  const bool ok = std::isfinite(measured) && std::abs(measured - expected) <= tolerance;
  return {std::move(name), measured, expected, tolerance, ok, std::nullopt};
}

Check Check::below(std::string name, double measured, double bound) {
  const bool ok = std::isfinite(measured) && measured <= bound;
  return {std::move(name), measured, bound, bound, ok, std::nullopt};
}

Check Check::above(std::string name, double measured, double bound) {
  const bool ok = std::isfinite(measured) && measured >= bound;
  return {std::move(name), measured, bound, 0.0, ok, std::nullopt};
}

Check Check::within(std::string name, double measured, double lo, double hi) {
  const bool ok = std::isfinite(measured) && measured >= lo && measured <= hi;
  return {std::move(name), measured, 0.5 * (lo + hi), 0.5 * (hi - lo), ok, std::nullopt};
}

Check Check::holds(std::string name, bool ok) {
  return {std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, ok, std::nullopt};
}

void to_json(nlohmann::ordered_json& j, const Check& c) {
  j = nlohmann::ordered_json{{"check", c.name},
                             {"measured", c.measured},
                             {"expected", c.expected},
                             {"tolerance", c.tolerance},
                             {"passed", c.passed}};
  if (c.dimension) j["dimension"] = *c.dimension;
}

void from_json(const nlohmann::ordered_json& j, Check& c) {
  j.at("check").get_to(c.name);
  j.at("measured").get_to(c.measured);
  j.at("expected").get_to(c.expected);
  j.at("tolerance").get_to(c.tolerance);
  j.at("passed").get_to(c.passed);
  if (j.contains("dimension")) {
    c.dimension = j.at("dimension").get<std::size_t>();
  } else {
    c.dimension.reset();
  }
}

bool RunReport::all_passed() const { return failures() == 0; }

std::size_t RunReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

void to_json(nlohmann::ordered_json& j, const RunReport& r) {
  j = nlohmann::ordered_json{{"command", r.command},
                             {"parameters", r.parameters},
                             {"results", r.results},
                             {"checks", r.checks},
                             {"passed", r.all_passed()},
                             {"wall_seconds", r.wall_seconds}};
}

void from_json(const nlohmann::ordered_json& j, RunReport& r) {
  j.at("command").get_to(r.command);
  r.parameters = j.at("parameters");
  r.results = j.value("results", nlohmann::ordered_json::object());
  r.checks = j.at("checks").get<std::vector<Check>>();
  j.at("wall_seconds").get_to(r.wall_seconds);
}

std::string format_table(const RunReport& r) {
  std::size_t width = 5;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());

  std::ostringstream out;
  out << "== " << r.command << " ==\n";
  for (const auto& [key, value] : r.results.items()) out << "  " << key << " = " << value.dump() << '\n';
  char line[512];
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-*s  %-4s  measured=% .9e  expected=% .9e  tol=%.2e\n",
                  static_cast<int>(width), c.name.c_str(), c.passed ? "ok" : "FAIL", c.measured,
                  c.expected, c.tolerance);
    out << line;
  }
  std::snprintf(line, sizeof line, "%zu checks, %zu failed, %.3f s\n", r.checks.size(),
                r.failures(), r.wall_seconds);
  out << line;
  return out.str();
}

}  // namespace so21
