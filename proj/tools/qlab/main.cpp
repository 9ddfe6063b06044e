// qlab: batch driver for the Q-curvature experiments.
// Exit status: 0 all checks pass, 1 some check failed (report still written),
// 2 invalid configuration or arguments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"

using namespace qlab::cli;

namespace {

struct Leaf {
  Command command;
  CLI::App* app = nullptr;
  Settings flags;
  std::string config;
  std::vector<std::string> tolerances;
  std::string output, csv, psi, metric_out;
};

void add_options(Leaf& leaf) {
  CLI::App& a = *leaf.app;
  Settings& s = leaf.flags;
  a.add_option("--config", leaf.config, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  a.add_option("--n", s.n, leaf.command == Command::models ? "dimension range, e.g. 3..10" : "dimension");
  a.add_option("-o,--output", leaf.output, "JSON report path (default: stdout)");
  a.add_option("--csv", leaf.csv, "CSV table path");
  if (leaf.command == Command::models) return;
  a.add_option("--res", s.resolution, "grid points per axis");
  a.add_option("--eval-res", s.eval_resolution,
               "evaluate on this finer grid after spectral prolongation");
  a.add_option("--seeds", s.seeds, "seed list: 0..4, 1,3,7 or 5");
  a.add_option("--amp", s.amplitude, "perturbation amplitude (target amplitude for prescribe)");
  a.add_option("--max-mode", s.max_mode, "band limit of the random fields");
  a.add_option("--tol", leaf.tolerances, "override a tolerance: name=value")->take_all();
  switch (leaf.command) {
    case Command::verify_conformal:
      a.add_option("--u-amp", s.u_amplitude, "amplitude of the conformal factor");
      break;
    case Command::rigidity: a.add_option("--trials", s.trials, "random divergence-free directions"); break;
    case Command::secondvar: a.add_option("--step", s.step, "finite-difference step"); break;
    case Command::prescribe:
      a.add_option("--psi", leaf.psi, "target field file (.json or binary)");
      a.add_option("--metric-out", leaf.metric_out, "write the solved metric here");
      break;
    default: break;
  }
}

void finish_flags(Leaf& leaf) {
  for (const auto& t : leaf.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects name=value, got '" + t + "'");
    try {
      std::size_t used = 0;
      const std::string v = t.substr(eq + 1);
      leaf.flags.tolerances[t.substr(0, eq)] = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError("--tol: '" + t + "' has no numeric value");
    }
  }
  if (!leaf.output.empty()) leaf.flags.output = leaf.output;
  if (!leaf.csv.empty()) leaf.flags.csv = leaf.csv;
  if (!leaf.psi.empty()) leaf.flags.psi = leaf.psi;
  if (!leaf.metric_out.empty()) leaf.flags.metric_out = leaf.metric_out;
}

int execute(Leaf& leaf) {
  ExperimentConfig cfg;
  try {
    finish_flags(leaf);
    const Settings file = leaf.config.empty() ? Settings{} : load_settings(leaf.config, leaf.command);
    cfg = resolve(leaf.command, file, leaf.flags);
  } catch (const ConfigError& e) {
    std::cerr << "qlab: " << e.what() << '\n';
    return 2;
  }

  Report rep(cfg);
  try {
    rep = run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "qlab: " << e.what() << '\n';
    return 2;
  }

  const std::string text = rep.to_json(utc_timestamp()).dump(2);
  if (cfg.output) {
    std::ofstream os(*cfg.output);
    if (!os) {
      std::cerr << "qlab: cannot write " << cfg.output->string() << '\n';
      return 2;
    }
    os << text << '\n';
  } else {
    std::cout << text << '\n';
  }
  if (cfg.csv) rep.write_csv(*cfg.csv);

  for (const auto& c : rep.checks())
    std::fprintf(stderr, "[%s] %s: %.6g (tolerance %.3g)\n", c.pass ? "PASS" : "FAIL",
                 c.name.c_str(), c.value, c.tolerance);
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlab: Q-curvature and Paneitz operator experiments on flat tori"};
  app.require_subcommand(1);
  CLI::App* verify = app.add_subcommand("verify", "variational identities on perturbed tori");
  verify->require_subcommand(1);

  std::vector<std::unique_ptr<Leaf>> leaves;
  auto leaf = [&](CLI::App* parent, const char* name, const char* help, Command c) {
    auto l = std::make_unique<Leaf>();
    l->command = c;
    l->app = parent->add_subcommand(name, help);
    add_options(*l);
    leaves.push_back(std::move(l));
  };
  leaf(verify, "adjoint", "int f Gamma h = int <Gamma* f, h>", Command::verify_adjoint);
  leaf(verify, "gamma-fd", "central differences of Q against Gamma h", Command::verify_gamma_fd);
  leaf(verify, "trace", "trace of Gamma* f against (P f - (n+4)/2 Q f) / 2", Command::verify_trace);
  leaf(verify, "conformal", "conformal transformation laws of Q and P", Command::verify_conformal);
  leaf(verify, "diffeo", "Gamma(L_X g) = X.dQ and delta Gamma* f = f dQ / 2", Command::verify_diffeo);
  leaf(verify, "decomposition", "divergence-free projection at constant metrics",
       Command::verify_decomposition);
  leaf(&app, "gbc", "Gauss-Bonnet-Chern defect on T4 and the unit S4", Command::gbc);
  leaf(&app, "models", "closed-form identities on Einstein space forms", Command::models);
  leaf(&app, "prescribe", "solve Q_g = psi near the flat metric", Command::prescribe);
  leaf(&app, "rigidity", "sign of the second variation and cubic remainder", Command::rigidity);
  leaf(&app, "secondvar", "quadratic form against nested differences", Command::secondvar);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto& l : leaves)
    if (l->app->parsed()) return execute(*l);
  return 2;
}
