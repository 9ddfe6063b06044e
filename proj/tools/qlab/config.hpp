#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qlab::cli {

/// Bad configuration; maps to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command {
  verify_adjoint,
  verify_gamma_fd,
  verify_trace,
  verify_conformal,
  verify_diffeo,
  verify_decomposition,
  gbc,
  models,
  prescribe,
  rigidity,
  secondvar,
};

std::string to_string(Command c);

/// Everything a run can be told, each field unset until a layer provides it.
/// Layers are merged as: command defaults < config file < command-line flags.
struct Settings {
  std::optional<std::string> n;  // "4" or, for models, "3..10"
  std::optional<int> resolution;
  std::optional<int> eval_resolution;
  std::optional<std::string> seeds;  // "0..4", "1,3,7" or "5"
  std::optional<double> amplitude;
  std::optional<double> u_amplitude;
  std::optional<int> max_mode;
  std::optional<int> trials;
  std::optional<double> step;
  std::map<std::string, double> tolerances;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> psi;
  std::optional<std::filesystem::path> metric_out;

  /// Fields set in `over` replace ours; tolerances merge key by key.
  void overlay(const Settings& over);
};

/// Reads a JSON object. Unknown keys and mistyped values throw ConfigError.
/// A "command" key, when present, must name `expected`.
Settings settings_from_json(const nlohmann::json& j, Command expected);
Settings load_settings(const std::filesystem::path& path, Command expected);

/// Fully resolved, validated configuration of one run.
struct ExperimentConfig {
  Command command = Command::verify_adjoint;
  int n = 3;
  int n_last = 3;  // models sweeps n..n_last
  int resolution = 24;
  int eval_resolution = 24;
  std::vector<std::uint64_t> seeds;
  double amplitude = 0.05;
  double u_amplitude = 0.1;
  int max_mode = 3;
  int trials = 100;
  double step = 1e-2;
  std::map<std::string, double> tolerances;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> psi;
  std::optional<std::filesystem::path> metric_out;

  double tol(const std::string& name) const { return tolerances.at(name); }
  nlohmann::json to_json() const;
};

Settings command_defaults(Command c);

/// Applies defaults, the file layer and the flag layer, then validates.
ExperimentConfig resolve(Command c, const Settings& file, const Settings& flags);

std::vector<std::uint64_t> parse_seeds(const std::string& s);
std::pair<int, int> parse_int_range(const std::string& s);

}  // namespace qlab::cli
