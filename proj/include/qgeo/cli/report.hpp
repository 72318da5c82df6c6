#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace qgeo {

inline constexpr const char* kReportSchema = "qgeo-report/1";
inline constexpr const char* kEngineVersion = "0.1.0";

// One verified quantity. A check with no tolerance is informational.
struct CheckRecord {
  std::string name;
  std::string anchor;  // the statement or identity being exercised
  std::map<std::string, double> values;
  std::optional<double> residual, tolerance;
  std::string relation = "<";  // residual < tolerance, or ">" for strict positivity checks
  bool pass = true;
  std::string note;

  CheckRecord& judge() {
    if (residual && tolerance) {
      const double r = *residual, t = *tolerance;
      pass = std::isfinite(r) && (relation == ">" ? r > t : r < t);
    }
    return *this;
  }
};

inline CheckRecord make_check(std::string name, std::string anchor, double residual, double tolerance,
                              std::map<std::string, double> values = {}, std::string relation = "<") {
  CheckRecord c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.values = std::move(values);
  c.residual = residual;
  c.tolerance = tolerance;
  c.relation = std::move(relation);
  return c.judge();
}

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  std::vector<std::string> warnings;

  std::size_t passed() const {
    std::size_t s = 0;
    for (const auto& c : checks) s += c.pass;
    return s;
  }
  std::size_t failed() const { return checks.size() - passed(); }
  bool ok() const { return failed() == 0; }

  void add(CheckRecord c) { checks.push_back(std::move(c)); }
  void append(const Report& r) {
    checks.insert(checks.end(), r.checks.begin(), r.checks.end());
    warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
  }

  // Replaces every "<" tolerance.
  void override_tolerance(double tol) {
    for (auto& c : checks)
      if (c.tolerance && c.relation == "<") {
        c.tolerance = tol;
        c.judge();
      }
  }
};

namespace detail {

// Non-finite numbers become strings so the output stays valid JSON.
inline nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const CheckRecord& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["anchor"] = c.anchor;
  nlohmann::ordered_json v = nlohmann::ordered_json::object();
  for (const auto& [k, x] : c.values) v[k] = detail::number(x);
  j["values"] = v;
  j["residual"] = c.residual ? detail::number(*c.residual) : nlohmann::ordered_json();
  j["tolerance"] = c.tolerance ? detail::number(*c.tolerance) : nlohmann::ordered_json();
  j["relation"] = c.relation;
  j["pass"] = c.pass;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["engine_version"] = kEngineVersion;
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["summary"] = {{"total", r.checks.size()}, {"passed", r.passed()}, {"failed", r.failed()}};
  j["warnings"] = r.warnings;
  nlohmann::ordered_json cs = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) cs.push_back(to_json(c));
  j["checks"] = cs;
  return j;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) o += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return o + "\"";
}

// Residual table, one row per check.
inline std::string to_csv(const Report& r) {
  std::ostringstream o;
  o.precision(17);
  o << "name,anchor,residual,relation,tolerance,pass\n";
  for (const auto& c : r.checks) {
    o << csv_field(c.name) << ',' << csv_field(c.anchor) << ',';
    if (c.residual) o << *c.residual;
    o << ',' << c.relation << ',';
    if (c.tolerance) o << *c.tolerance;
    o << ',' << (c.pass ? "true" : "false") << '\n';
  }
  return o.str();
}

// Plain text summary for the terminal.
inline std::string to_text(const Report& r) {
  std::ostringstream o;
  o.precision(6);
  for (const auto& c : r.checks) {
    o << (!c.pass ? "FAIL " : c.tolerance ? "PASS " : "info ") << c.name;
    if (c.residual) o << "  residual=" << *c.residual;
    if (c.tolerance) o << " " << c.relation << " " << *c.tolerance;
    for (const auto& [k, v] : c.values) o << "  " << k << "=" << v;
    if (!c.note.empty()) o << "  (" << c.note << ")";
    o << '\n';
  }
  for (const auto& w : r.warnings) o << "warning: " << w << '\n';
  o << r.passed() << "/" << r.checks.size() << " checks passed\n";
  return o.str();
}

}  // namespace qgeo
