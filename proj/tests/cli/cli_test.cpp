#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"

using namespace qlab::cli;

namespace {

ExperimentConfig resolved(Command c, const nlohmann::json& file = nlohmann::json::object()) {
  return resolve(c, settings_from_json(file, c), Settings{});
}

}  // namespace

TEST(Seeds, RangesListsAndSingletons) {
  EXPECT_EQ(parse_seeds("0..4"), (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(parse_seeds("1,3,7"), (std::vector<std::uint64_t>{1, 3, 7}));
  EXPECT_EQ(parse_seeds("5"), (std::vector<std::uint64_t>{5}));
  for (const char* bad : {"", "3..1", "1,1", "a", "1,,2", "-1", "0..5000"})
    EXPECT_THROW(parse_seeds(bad), ConfigError) << bad;
  EXPECT_EQ(parse_int_range("3..10"), (std::pair<int, int>{3, 10}));
}

TEST(Config, DefaultsPerCommand) {
  const ExperimentConfig c = resolved(Command::verify_conformal);
  EXPECT_EQ(c.n, 4);
  EXPECT_EQ(c.eval_resolution, c.resolution);
  EXPECT_DOUBLE_EQ(c.tol("relative"), 1e-7);
  EXPECT_EQ(resolved(Command::gbc).n, 4);
  const ExperimentConfig m = resolved(Command::models);
  EXPECT_EQ(m.n, 3);
  EXPECT_EQ(m.n_last, 10);
}

TEST(Config, FlagsOverrideFile) {
  const Settings file = settings_from_json({{"resolution", 16}, {"seeds", "0..1"}}, Command::verify_adjoint);
  Settings flags;
  flags.resolution = 20;
  const ExperimentConfig c = resolve(Command::verify_adjoint, file, flags);
  EXPECT_EQ(c.resolution, 20);
  EXPECT_EQ(c.seeds.size(), 2u);
}

TEST(Config, RejectsBadInput) {
  const auto bad = [](Command c, const nlohmann::json& j) { return resolved(c, j); };
  EXPECT_THROW(bad(Command::verify_adjoint, {{"resolutoin", 16}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"command", "gbc"}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"resolution", "big"}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"n", "2"}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"resolution", 13}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"resolution", 22}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"resolution", 16}, {"eval_resolution", 12}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"amplitude", 0.9}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"resolution", 8}, {"max_mode", 4}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_adjoint, {{"tolerances", {{"foo", 1.0}}}}), ConfigError);
  EXPECT_THROW(bad(Command::gbc, {{"n", "3"}}), ConfigError);
  EXPECT_THROW(bad(Command::verify_trace, {{"psi", "x.json"}}), ConfigError);
  EXPECT_THROW(settings_from_json(nlohmann::json::array(), Command::models), ConfigError);
}

TEST(Run, ModelsReportIsExactAndPasses) {
  const Report r = run(resolved(Command::models, {{"n", "3..5"}}));
  EXPECT_TRUE(r.passed());
  const nlohmann::json j = r.to_json("2000-01-01T00:00:00Z");
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("command"), "models");
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_FALSE(j.at("table").at("rows").empty());
}

TEST(Run, ReportIsDeterministic) {
  const ExperimentConfig c =
      resolved(Command::verify_adjoint, {{"resolution", 8}, {"max_mode", 1}, {"seeds", "0..1"}});
  const nlohmann::json a = run(c).to_json("t");
  const nlohmann::json b = run(c).to_json("t");
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.at("pass").get<bool>());
}

TEST(Run, FailedCheckIsReported) {
  const ExperimentConfig c = resolved(Command::verify_adjoint,
                                      {{"resolution", 8}, {"max_mode", 1}, {"seeds", "0"},
                                       {"tolerances", {{"relative", 1e-300}}}});
  EXPECT_FALSE(run(c).passed());
}
