#pragma once

// JSON instance files for the command-line tool.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ridel/core.hpp"
#include "ridel/instruments.hpp"

namespace ridel {

inline constexpr const char* kSchemaVersion = "1.0";

struct AgentBeliefChoice {
  Belief mu;
  friend bool operator==(const AgentBeliefChoice&, const AgentBeliefChoice&) = default;
};

struct ActionRestriction {
  std::vector<std::size_t> allowed;
  friend bool operator==(const ActionRestriction&, const ActionRestriction&) = default;
};

using InstrumentSpec = std::variant<AgentBeliefChoice, TransferSchedule, OutcomeContract, ActionRestriction>;

struct InstanceFile {
  std::string schema_version;
  std::vector<std::string> states;
  std::vector<std::string> actions;
  Belief mu_p;
  std::optional<Belief> mu_agent;
  PayoffMatrix payoffs;
  double lambda;
  std::optional<InstrumentSpec> instrument;

  /// The agent's problem: mu_agent if given, else the principal's prior.
  RIInstance agent_instance() const;

  friend bool operator==(const InstanceFile&, const InstanceFile&) = default;
};

/// Throws InvalidInput on malformed JSON, unknown schema versions or
/// inconsistent dimensions.
InstanceFile parse_instance(const std::string& text);
InstanceFile read_instance(const std::filesystem::path& path);

/// Pretty-printed JSON; parse_instance(write_instance(f)) == f.
std::string write_instance(const InstanceFile& file);

}  // namespace ridel
