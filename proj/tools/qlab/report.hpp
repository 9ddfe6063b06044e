#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace qlab::cli {

struct Check {
  enum class Bound { at_most, at_least, below };
  std::string name;
  double value = 0;
  double tolerance = 0;
  Bound bound = Bound::at_most;
  bool pass = false;
};

/// One row per seed (or trial); cells are numbers or strings.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

class Report {
 public:
  explicit Report(const ExperimentConfig& cfg);

  /// value <= tol, value >= tol, or value < tol.
  void check(const std::string& name, double value, double tol,
             Check::Bound bound = Check::Bound::at_most);
  void check_exact(const std::string& name, bool ok);

  Table& table() { return table_; }
  nlohmann::json& details() { return details_; }
  void set_grid(int n, int resolution, int eval_resolution);

  bool passed() const;
  const std::vector<Check>& checks() const { return checks_; }

  /// Everything except the timestamp depends only on the configuration.
  nlohmann::json to_json(const std::string& timestamp) const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  ExperimentConfig cfg_;
  std::vector<Check> checks_;
  Table table_;
  nlohmann::json details_ = nlohmann::json::object();
  nlohmann::json grid_;
};

std::string utc_timestamp();

}  // namespace qlab::cli
