#include "ridel/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ridel/errors.hpp"

namespace ridel {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw InvalidInput(std::string("instance file is missing \"") + key + "\"");
  return obj.at(key);
}

std::vector<std::string> labels(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InvalidInput(std::string(what) + " must be a non-empty list of labels");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw InvalidInput(std::string(what) + " labels must be strings");
    out.push_back(x.get<std::string>());
  }
  if (std::set<std::string>(out.begin(), out.end()).size() != out.size()) {
    throw InvalidInput(std::string(what) + " labels must be unique");
  }
  return out;
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be a list of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw InvalidInput(std::string(what) + " must be a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Belief belief(const json& j, std::size_t n, const char* what) {
  auto v = numbers(j, what);
  if (v.size() != n) throw InvalidInput(std::string(what) + " has the wrong number of entries");
  return Belief(std::move(v));
}

double number(const json& obj, const char* key) {
  const auto& j = require(obj, key);
  if (!j.is_number()) throw InvalidInput(std::string("\"") + key + "\" must be a number");
  return j.get<double>();
}

std::size_t index_of(const std::vector<std::string>& names, const std::string& label) {
  const auto it = std::find(names.begin(), names.end(), label);
  if (it == names.end()) throw InvalidInput("unknown action label \"" + label + "\"");
  return static_cast<std::size_t>(it - names.begin());
}

InstrumentSpec parse_instrument(const json& j, const InstanceFile& f) {
  if (!j.is_object()) throw InvalidInput("instrument must be an object");
  const auto& type = require(j, "type");
  if (!type.is_string()) throw InvalidInput("instrument type must be a string");
  const std::string t = type.get<std::string>();
  if (t == "agent_belief") return AgentBeliefChoice{belief(require(j, "mu"), f.states.size(), "instrument mu")};
  if (t == "transfers") {
    auto tau = numbers(require(j, "tau"), "tau");
    if (tau.size() != f.actions.size()) throw InvalidInput("tau must have one entry per action");
    const bool ll = j.contains("limited_liability") && j.at("limited_liability").get<bool>();
    return TransferSchedule(std::move(tau), ll);
  }
  if (t == "outcome_contract") {
    OutcomeContract c{number(j, "tau_high"), number(j, "tau_low"), j.contains("rho") ? number(j, "rho") : 1.0};
    return c;
  }
  if (t == "restriction") {
    const auto names = labels(require(j, "allowed"), "allowed");
    ActionRestriction r;
    for (const auto& n : names) r.allowed.push_back(index_of(f.actions, n));
    return r;
  }
  throw InvalidInput("unknown instrument type \"" + t + "\"");
}

json dump_numbers(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

RIInstance InstanceFile::agent_instance() const { return RIInstance(mu_agent.value_or(mu_p), payoffs, lambda); }

InstanceFile parse_instance(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed instance file: ") + e.what());
  }
  if (!root.is_object()) throw InvalidInput("instance file must hold a JSON object");
  try {
    const auto& version = require(root, "schema_version");
    if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
      throw InvalidInput(std::string("unsupported schema_version; expected \"") + kSchemaVersion + "\"");
    }
    auto states = labels(require(root, "states"), "states");
    auto actions = labels(require(root, "actions"), "actions");
    const std::size_t ns = states.size();
    const std::size_t na = actions.size();

    const auto& pj = require(root, "payoffs");
    std::optional<PayoffMatrix> payoffs;
    if (pj.is_string()) {
      if (pj.get<std::string>() != "state_matching") throw InvalidInput("payoffs must be \"state_matching\" or a matrix");
      if (na != ns) throw InvalidInput("state-matching payoffs need as many actions as states");
      payoffs = PayoffMatrix::state_matching(ns);
    } else {
      if (!pj.is_array() || pj.size() != na) throw InvalidInput("payoffs must have one row per action");
      std::vector<std::vector<double>> rows;
      for (const auto& r : pj) {
        rows.push_back(numbers(r, "payoff row"));
        if (rows.back().size() != ns) throw InvalidInput("payoff rows must have one entry per state");
      }
      payoffs = PayoffMatrix::from_rows(rows);
    }

    InstanceFile f{kSchemaVersion,
                   std::move(states),
                   std::move(actions),
                   belief(require(root, "mu_p"), ns, "mu_p"),
                   std::nullopt,
                   std::move(*payoffs),
                   number(root, "lambda"),
                   std::nullopt};
    if (root.contains("mu_agent") && !root.at("mu_agent").is_null()) {
      f.mu_agent = belief(root.at("mu_agent"), ns, "mu_agent");
    }
    if (root.contains("instrument") && !root.at("instrument").is_null()) {
      f.instrument = parse_instrument(root.at("instrument"), f);
    }
    (void)f.agent_instance();  // validates lambda
    return f;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed instance file: ") + e.what());
  }
}

InstanceFile read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read instance file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string write_instance(const InstanceFile& f) {
  json root;
  root["schema_version"] = f.schema_version;
  root["states"] = f.states;
  root["actions"] = f.actions;
  root["mu_p"] = dump_numbers(f.mu_p.probs());
  if (f.mu_agent) root["mu_agent"] = dump_numbers(f.mu_agent->probs());
  if (f.payoffs.is_state_matching()) {
    root["payoffs"] = "state_matching";
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < f.payoffs.n_actions(); ++i) rows.push_back(dump_numbers(f.payoffs.row(i)));
    root["payoffs"] = rows;
  }
  root["lambda"] = f.lambda;
  if (f.instrument) {
    json ins;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, AgentBeliefChoice>) {
            ins["type"] = "agent_belief";
            ins["mu"] = dump_numbers(x.mu.probs());
          } else if constexpr (std::is_same_v<T, TransferSchedule>) {
            ins["type"] = "transfers";
            ins["tau"] = x.tau;
            ins["limited_liability"] = x.limited_liability;
          } else if constexpr (std::is_same_v<T, OutcomeContract>) {
            ins["type"] = "outcome_contract";
            ins["tau_high"] = x.tau_high;
            ins["tau_low"] = x.tau_low;
            ins["rho"] = x.rho;
          } else {
            ins["type"] = "restriction";
            json names = json::array();
            for (std::size_t i : x.allowed) names.push_back(f.actions.at(i));
            ins["allowed"] = names;
          }
        },
        *f.instrument);
    root["instrument"] = ins;
  }
  return root.dump(2) + "\n";
}

}  // namespace ridel
