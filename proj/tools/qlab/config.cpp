#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace qlab::cli {

namespace {

struct CommandInfo {
  Command command;
  const char* name;
};

constexpr CommandInfo kCommands[] = {
    {Command::verify_adjoint, "verify adjoint"},
    {Command::verify_gamma_fd, "verify gamma-fd"},
    {Command::verify_trace, "verify trace"},
    {Command::verify_conformal, "verify conformal"},
    {Command::verify_diffeo, "verify diffeo"},
    {Command::verify_decomposition, "verify decomposition"},
    {Command::gbc, "gbc"},
    {Command::models, "models"},
    {Command::prescribe, "prescribe"},
    {Command::rigidity, "rigidity"},
    {Command::secondvar, "secondvar"},
};

int parse_int(const std::string& s, const char* what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end)
    throw ConfigError(std::string(what) + ": '" + s + "' is not an integer");
  return v;
}

template <class T>
T get(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config: key '" + key + "' has the wrong type");
  }
}

// n and seeds accept either a number or a range string.
std::string number_or_string(const nlohmann::json& j, const std::string& key) {
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_string()) return j.get<std::string>();
  if (key == "seeds" && j.is_array()) {
    std::string s;
    for (const auto& e : j) {
      if (!e.is_number_unsigned()) throw ConfigError("config: seeds must be non-negative integers");
      if (!s.empty()) s += ',';
      s += std::to_string(e.get<std::uint64_t>());
    }
    return s;
  }
  throw ConfigError("config: key '" + key + "' has the wrong type");
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool fft_friendly(int r) {
  for (int p : {2, 3, 5, 7})
    while (r % p == 0) r /= p;
  return r == 1;
}

int default_resolution(Command c, int n) {
  switch (c) {
    case Command::verify_conformal: return n == 3 ? 24 : 16;
    case Command::prescribe: return n == 3 ? 24 : 16;
    case Command::rigidity:
    case Command::secondvar:
    case Command::verify_decomposition: return n == 3 ? 16 : 12;
    default: return n == 3 ? 24 : n == 4 ? 12 : 8;
  }
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& ci : kCommands)
    if (ci.command == c) return ci.name;
  return "?";
}

void Settings::overlay(const Settings& o) {
  if (o.n) n = o.n;
  if (o.resolution) resolution = o.resolution;
  if (o.eval_resolution) eval_resolution = o.eval_resolution;
  if (o.seeds) seeds = o.seeds;
  if (o.amplitude) amplitude = o.amplitude;
  if (o.u_amplitude) u_amplitude = o.u_amplitude;
  if (o.max_mode) max_mode = o.max_mode;
  if (o.trials) trials = o.trials;
  if (o.step) step = o.step;
  for (const auto& [k, v] : o.tolerances) tolerances[k] = v;
  if (o.output) output = o.output;
  if (o.csv) csv = o.csv;
  if (o.psi) psi = o.psi;
  if (o.metric_out) metric_out = o.metric_out;
}

Settings settings_from_json(const nlohmann::json& j, Command expected) {
  require(j.is_object(), "config: top level must be an object");
  Settings s;
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      require(get<std::string>(v, key) == to_string(expected),
              "config: file is for command '" + v.dump() + "', not '" + to_string(expected) + "'");
    } else if (key == "n") {
      s.n = number_or_string(v, key);
    } else if (key == "resolution") {
      s.resolution = get<int>(v, key);
    } else if (key == "eval_resolution") {
      s.eval_resolution = get<int>(v, key);
    } else if (key == "seeds") {
      s.seeds = number_or_string(v, key);
    } else if (key == "amplitude") {
      s.amplitude = get<double>(v, key);
    } else if (key == "u_amplitude") {
      s.u_amplitude = get<double>(v, key);
    } else if (key == "max_mode") {
      s.max_mode = get<int>(v, key);
    } else if (key == "trials") {
      s.trials = get<int>(v, key);
    } else if (key == "step") {
      s.step = get<double>(v, key);
    } else if (key == "tolerances") {
      require(v.is_object(), "config: tolerances must be an object");
      for (const auto& [tk, tv] : v.items()) s.tolerances[tk] = get<double>(tv, "tolerances." + tk);
    } else if (key == "output") {
      s.output = get<std::string>(v, key);
    } else if (key == "csv") {
      s.csv = get<std::string>(v, key);
    } else if (key == "psi") {
      s.psi = get<std::string>(v, key);
    } else if (key == "metric_out") {
      s.metric_out = get<std::string>(v, key);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return s;
}

Settings load_settings(const std::filesystem::path& path, Command expected) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return settings_from_json(j, expected);
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string item = s.substr(pos, comma - pos);
    const auto [lo, hi] = parse_int_range(item);
    require(lo >= 0, "seeds: must be non-negative");
    for (int v = lo; v <= hi; ++v) out.push_back(static_cast<std::uint64_t>(v));
    pos = comma + 1;
  }
  require(!out.empty() && out.size() <= 1000, "seeds: between 1 and 1000 seeds");
  std::set<std::uint64_t> uniq(out.begin(), out.end());
  require(uniq.size() == out.size(), "seeds: duplicates in '" + s + "'");
  return out;
}

std::pair<int, int> parse_int_range(const std::string& s) {
  const std::size_t dots = s.find("..");
  if (dots == std::string::npos) {
    const int v = parse_int(s, "range");
    return {v, v};
  }
  const int lo = parse_int(s.substr(0, dots), "range");
  const int hi = parse_int(s.substr(dots + 2), "range");
  require(lo <= hi, "range: '" + s + "' is empty");
  return {lo, hi};
}

Settings command_defaults(Command c) {
  Settings s;
  s.seeds = "0";
  s.max_mode = 3;
  s.amplitude = 0.05;
  s.u_amplitude = 0.1;
  s.trials = 100;
  s.step = 1e-2;
  switch (c) {
    case Command::verify_adjoint:
      s.n = "3";
      s.seeds = "0..4";
      s.tolerances = {{"relative", 1e-7}};
      break;
    case Command::verify_gamma_fd:
      s.n = "3";
      s.seeds = "0..4";
      s.tolerances = {{"min_order", 1.9}};
      break;
    case Command::verify_trace:
      s.n = "3";
      s.seeds = "0..4";
      s.tolerances = {{"relative", 1e-8}};
      break;
    case Command::verify_conformal:
      s.n = "4";
      s.max_mode = 2;
      s.tolerances = {{"relative", 1e-7}};
      break;
    case Command::verify_diffeo:
      s.n = "3";
      s.seeds = "0..4";
      s.tolerances = {{"absolute", 1e-6}};
      break;
    case Command::verify_decomposition:
      s.n = "3";
      s.seeds = "0..4";
      s.tolerances = {{"absolute", 1e-10}};
      break;
    case Command::gbc:
      s.n = "4";
      s.amplitude = 0.02;
      s.tolerances = {{"relative", 1e-3}};
      break;
    case Command::models:
      s.n = "3..10";
      break;
    case Command::prescribe:
      s.n = "3";
      s.amplitude = 1e-3;
      s.max_mode = 2;
      s.tolerances = {{"residual", 1e-9}, {"scaling", 1e-9}};
      break;
    case Command::rigidity:
      s.n = "3";
      s.amplitude = 0.04;
      s.max_mode = 2;
      s.tolerances = {{"min_order", 2.9}, {"constant_mode", 1e-12}};
      break;
    case Command::secondvar:
      s.n = "3";
      s.seeds = "0..2";
      s.max_mode = 2;
      s.tolerances = {{"relative", 1e-4}};
      break;
  }
  return s;
}

ExperimentConfig resolve(Command c, const Settings& file, const Settings& flags) {
  const Settings defaults = command_defaults(c);
  for (const Settings* layer : {&file, &flags})
    for (const auto& [k, v] : layer->tolerances)
      require(defaults.tolerances.count(k) == 1,
              "config: command '" + to_string(c) + "' has no tolerance '" + k + "'");
  Settings s = defaults;
  s.overlay(file);
  s.overlay(flags);

  ExperimentConfig cfg;
  cfg.command = c;
  const auto [n0, n1] = parse_int_range(*s.n);
  cfg.n = n0;
  cfg.n_last = n1;
  if (c == Command::models) {
    require(n0 >= 3 && n1 <= 64, "n: models sweeps within 3..64");
  } else {
    require(n0 == n1, "n: a single dimension is expected");
    require(n0 >= 3 && n0 <= 6, "n: grid experiments support 3 <= n <= 6");
  }
  if (c == Command::gbc) require(cfg.n == 4, "n: gbc is four-dimensional");

  cfg.resolution = s.resolution.value_or(default_resolution(c, cfg.n));
  cfg.eval_resolution = s.eval_resolution.value_or(cfg.resolution);
  require(cfg.resolution >= 8 && cfg.resolution <= 512 && cfg.resolution % 2 == 0,
          "resolution: even, between 8 and 512");
  require(fft_friendly(cfg.resolution) && fft_friendly(cfg.eval_resolution),
          "resolution: only factors 2, 3, 5, 7 are supported");
  require(cfg.eval_resolution >= cfg.resolution && cfg.eval_resolution <= 512 &&
              cfg.eval_resolution % 2 == 0,
          "eval_resolution: even, at least resolution, at most 512");

  cfg.seeds = parse_seeds(*s.seeds);
  cfg.amplitude = *s.amplitude;
  cfg.u_amplitude = *s.u_amplitude;
  cfg.max_mode = *s.max_mode;
  cfg.trials = *s.trials;
  cfg.step = *s.step;
  require(cfg.amplitude > 0 && cfg.amplitude <= 0.5, "amplitude: in (0, 0.5]");
  require(cfg.u_amplitude > 0 && cfg.u_amplitude <= 0.5, "u_amplitude: in (0, 0.5]");
  require(cfg.max_mode >= 1 && 2 * cfg.max_mode < cfg.resolution,
          "max_mode: at least 1 and below resolution / 2");
  require(cfg.trials >= 1 && cfg.trials <= 100000, "trials: between 1 and 100000");
  require(cfg.step > 0 && cfg.step <= 0.1, "step: in (0, 0.1]");

  cfg.tolerances = s.tolerances;
  for (const auto& [k, v] : cfg.tolerances)
    require(std::isfinite(v) && v >= 0, "tolerance '" + k + "': finite and non-negative");

  cfg.output = s.output;
  cfg.csv = s.csv;
  cfg.psi = s.psi;
  cfg.metric_out = s.metric_out;
  if (c != Command::prescribe) require(!cfg.psi && !cfg.metric_out, "psi/metric_out: prescribe only");
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"command", to_string(command)},
                   {"n", n},
                   {"resolution", resolution},
                   {"eval_resolution", eval_resolution},
                   {"seeds", seeds},
                   {"amplitude", amplitude},
                   {"max_mode", max_mode},
                   {"tolerances", tolerances}};
  switch (command) {
    case Command::models:
      j = {{"command", to_string(command)}, {"n", n}, {"n_last", n_last}};
      break;
    case Command::verify_conformal: j["u_amplitude"] = u_amplitude; break;
    case Command::rigidity: j["trials"] = trials; break;
    case Command::secondvar: j["step"] = step; break;
    case Command::prescribe:
      if (psi) j["psi"] = psi->string();
      break;
    default: break;
  }
  return j;
}

}  // namespace qlab::cli
