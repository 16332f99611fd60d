#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "ridel/errors.hpp"
#include "ridel/instance_io.hpp"
#include "ridel/sweep.hpp"
#include "ridel/verify.hpp"

using namespace ridel;

namespace {

const char* kBinary = R"({
  "schema_version": "1.0",
  "states": ["R", "L"],
  "actions": ["r", "l"],
  "mu_p": [0.7, 0.3],
  "payoffs": "state_matching",
  "lambda": 1.0
})";

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(InstanceIo, ParsesMinimalFile) {
  const auto f = parse_instance(kBinary);
  EXPECT_EQ(f.states, (std::vector<std::string>{"R", "L"}));
  EXPECT_TRUE(f.payoffs.is_state_matching());
  EXPECT_EQ(f.lambda, 1.0);
  EXPECT_FALSE(f.mu_agent);
  EXPECT_FALSE(f.instrument);
  EXPECT_EQ(f.agent_instance().mu(), f.mu_p);
}

TEST(InstanceIo, RoundTripsEveryInstrument) {
  std::vector<std::string> instruments = {
      R"({"type": "agent_belief", "mu": [0.6, 0.3, 0.1]})",
      R"({"type": "transfers", "tau": [0.1, 0.0, 0.2], "limited_liability": true})",
      R"({"type": "outcome_contract", "tau_high": 0.2, "tau_low": 0.0, "rho": 1.0})",
      R"({"type": "restriction", "allowed": ["a", "c"]})",
  };
  for (const auto& ins : instruments) {
    const std::string text = R"({"schema_version": "1.0", "states": ["x", "y", "z"], "actions": ["a", "b", "c"],
      "mu_p": [0.5, 0.3, 0.2], "mu_agent": [0.4, 0.35, 0.25],
      "payoffs": [[1, 0, 0], [0, 1, 0.5], [0.2, 0.2, 0.2]], "lambda": 0.7, "instrument": )" +
                             ins + "}";
    const auto f = parse_instance(text);
    ASSERT_TRUE(f.instrument);
    EXPECT_EQ(parse_instance(write_instance(f)), f) << ins;
  }
}

TEST(InstanceIo, RestrictionLabelsMapToIndices) {
  const auto f = parse_instance(R"({"schema_version": "1.0", "states": ["x", "y", "z"], "actions": ["a", "b", "c"],
      "mu_p": [0.5, 0.3, 0.2], "payoffs": "state_matching", "lambda": 1,
      "instrument": {"type": "restriction", "allowed": ["c", "a"]}})");
  const auto& r = std::get<ActionRestriction>(*f.instrument);
  EXPECT_EQ(r.allowed, (std::vector<std::size_t>{2, 0}));
}

TEST(InstanceIo, RejectsMalformedInput) {
  const std::vector<std::string> bad = {
      "",
      "{",
      "[]",
      R"({"schema_version": "2.0", "states": ["R", "L"], "actions": ["r", "l"], "mu_p": [0.7, 0.3], "payoffs": "state_matching", "lambda": 1})",
      R"({"schema_version": "1.0", "states": ["R", "L"], "actions": ["r", "l"], "mu_p": [0.7, 0.4], "payoffs": "state_matching", "lambda": 1})",
      R"({"schema_version": "1.0", "states": ["R", "L"], "actions": ["r", "l"], "mu_p": [0.7, 0.3], "payoffs": "state_matching", "lambda": 0})",
      R"({"schema_version": "1.0", "states": ["R", "L"], "actions": ["r"], "mu_p": [0.7, 0.3], "payoffs": "state_matching", "lambda": 1})",
      R"({"schema_version": "1.0", "states": ["R", "L"], "actions": ["r", "l"], "mu_p": [0.7, 0.3], "payoffs": [[1, 0]], "lambda": 1})",
      R"({"schema_version": "1.0", "states": ["R", "R"], "actions": ["r", "l"], "mu_p": [0.7, 0.3], "payoffs": "state_matching", "lambda": 1})",
      R"({"schema_version": "1.0", "states": ["R", "L"], "actions": ["r", "l"], "mu_p": [0.7, 0.3], "payoffs": "state_matching", "lambda": "one"})",
      R"({"schema_version": "1.0", "states": ["R", "L"], "actions": ["r", "l"], "mu_p": [0.7, 0.3], "payoffs": "state_matching", "lambda": 1, "instrument": {"type": "bribe"}})",
      R"({"schema_version": "1.0", "states": ["R", "L"], "actions": ["r", "l"], "mu_p": [0.7, 0.3], "payoffs": "state_matching", "lambda": 1, "instrument": {"type": "restriction", "allowed": ["q"]}})",
  };
  for (const auto& t : bad) EXPECT_THROW(parse_instance(t), InvalidInput) << t;
  EXPECT_THROW(read_instance("/nonexistent/instance.json"), InvalidInput);
}

TEST(InstanceIo, DataFilesParse) {
  for (const char* name : {"binary_07.json", "binary_05.json", "three_state.json", "skewed_three.json",
                           "uniform_four.json", "nonimplementable.json", "transfers.json", "contract.json",
                           "restriction.json"}) {
    EXPECT_NO_THROW(read_instance(std::string(RIDEL_TEST_DATA_DIR) + "/" + name)) << name;
  }
  EXPECT_THROW(read_instance(std::string(RIDEL_TEST_DATA_DIR) + "/malformed.json"), InvalidInput);
}

TEST(Sweep, FormatNumber) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST(Sweep, GridEndpointsAndColumns) {
  SweepSpec spec;
  spec.parameter = SweepParameter::agent_mu;
  spec.lo = 0.1;
  spec.hi = 0.9;
  spec.steps = 7;
  spec.outputs = {"pi_Rr", "principal_value"};
  const auto t = run_sweep(spec);
  EXPECT_EQ(t.header, (std::vector<std::string>{"agent_mu", "pi_Rr", "principal_value"}));
  ASSERT_EQ(t.rows.size(), 7u);
  EXPECT_EQ(t.rows.front()[0], 0.1);
  EXPECT_EQ(t.rows.back()[0], 0.9);
  spec.outputs = {"nonsense"};
  EXPECT_THROW(run_sweep(spec), InvalidInput);
  EXPECT_THROW(parse_sweep_parameter("nonsense"), InvalidInput);
  EXPECT_THROW(sweep_preset("fig9"), InvalidInput);
}

TEST(Sweep, PresetsMatchGoldenFiles) {
  for (const char* name : {"fig1", "fig3"}) {
    auto spec = sweep_preset(name);
    spec.steps = 11;
    std::ostringstream out;
    write_csv(run_sweep(spec), out);
    EXPECT_EQ(out.str(), read_file(std::string(RIDEL_TEST_GOLDEN_DIR) + "/" + name + "_11.csv")) << name;
  }
}

TEST(Sweep, Fig2PeaksAtOptimalBelief) {
  const auto t = run_sweep(sweep_preset("fig2"));
  std::size_t arg = 0;
  for (std::size_t k = 1; k < t.rows.size(); ++k)
    if (t.rows[k][1] > t.rows[arg][1]) arg = k;
  EXPECT_NEAR(t.rows[arg][0], std::sqrt(0.7) / (std::sqrt(0.7) + std::sqrt(0.3)), 1e-3);
}

TEST(Verify, AllSuitesPass) {
  const auto reports = run_verify("all", 7);
  EXPECT_EQ(reports.size(), verify_suite_names().size());
  for (const auto& r : reports) {
    for (const auto& p : r.properties) EXPECT_TRUE(p.ok()) << r.suite << ": " << p.name << " " << p.detail;
  }
}

TEST(Verify, AliasesAndUnknownNames) {
  EXPECT_EQ(run_verify("prop9", 1).front().suite, "nonimplementable");
  EXPECT_EQ(run_verify("lemma1-oracle", 1).front().suite, "relaxed-oracle");
  EXPECT_THROW(run_verify("no-such-suite", 1), InvalidInput);
}
