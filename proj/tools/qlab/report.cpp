#include "report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>

#include "qlab/constants.hpp"

#ifndef QLAB_GIT_REVISION
#define QLAB_GIT_REVISION "unknown"
#endif
#ifndef QLAB_VERSION
#define QLAB_VERSION "0.0.0"
#endif

namespace qlab::cli {

namespace {

using qlab::to_string;
using qlab::cli::to_string;

const char* bound_name(Check::Bound b) {
  switch (b) {
    case Check::Bound::at_most: return "<=";
    case Check::Bound::at_least: return ">=";
    case Check::Bound::below: return "<";
  }
  return "?";
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

nlohmann::json constants_json(int n) {
  const Constants c = constants(n);
  nlohmann::json j{{"n", n}};
  const std::pair<const char*, const Rational*> named[] = {
      {"A", &c.A}, {"B", &c.B}, {"C", &c.C},          {"a", &c.a},
      {"b", &c.b}, {"Lambda", &c.Lambda}, {"alpha", &c.alpha}};
  for (const auto& [k, r] : named) j[k] = {{"exact", to_string(*r)}, {"value", to_double(*r)}};
  return j;
}

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

}  // namespace

Report::Report(const ExperimentConfig& cfg) : cfg_(cfg) {}

void Report::check(const std::string& name, double value, double tol, Check::Bound bound) {
  bool ok = false;
  switch (bound) {
    case Check::Bound::at_most: ok = value <= tol; break;
    case Check::Bound::at_least: ok = value >= tol; break;
    case Check::Bound::below: ok = value < tol; break;
  }
  checks_.push_back({name, value, tol, bound, ok && !std::isnan(value)});
}

void Report::check_exact(const std::string& name, bool ok) {
  checks_.push_back({name, ok ? 0.0 : 1.0, 0.0, Check::Bound::at_most, ok});
}

void Report::set_grid(int n, int resolution, int eval_resolution) {
  grid_ = {{"dim", n},
           {"resolution", resolution},
           {"eval_resolution", eval_resolution},
           {"period", 2.0 * std::numbers::pi}};
}

bool Report::passed() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return !checks_.empty();
}

nlohmann::json Report::to_json(const std::string& timestamp) const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : checks_)
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"bound", bound_name(c.bound)},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table_.rows) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& v : r) row.push_back(v.is_number_float() ? number(v.get<double>()) : v);
    rows.push_back(std::move(row));
  }
  nlohmann::json constants = nlohmann::json::array();
  for (int n = cfg_.n; n <= cfg_.n_last; ++n) constants.push_back(constants_json(n));

  nlohmann::json j;
  j["schema"] = 1;
  j["command"] = to_string(cfg_.command);
  j["timestamp"] = timestamp;
  j["build"] = {{"version", QLAB_VERSION}, {"revision", QLAB_GIT_REVISION}};
  j["config"] = cfg_.to_json();
  j["grid"] = grid_;
  j["constants"] = constants.size() == 1 ? constants[0] : constants;
  j["checks"] = std::move(checks);
  j["table"] = {{"columns", table_.columns}, {"rows", std::move(rows)}};
  j["details"] = details_;
  j["pass"] = passed();
  return j;
}

void Report::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t i = 0; i < table_.columns.size(); ++i)
    os << (i ? "," : "") << table_.columns[i];
  os << '\n';
  for (const auto& r : table_.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
    os << '\n';
  }
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qlab::cli
