#include "ridel/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "ridel/agent_solver.hpp"
#include "ridel/delegation.hpp"
#include "ridel/errors.hpp"
#include "ridel/instruments.hpp"

namespace ridel {

namespace {

// Mutual information of the two-state rule with the given precisions.
double binary_information(double mu, double p_rr, double p_ll) {
  const double pi[2][2] = {{p_rr, 1.0 - p_ll}, {1.0 - p_rr, p_ll}};  // [action][state]
  const double m[2] = {mu, 1.0 - mu};
  double mi = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double beta = m[0] * pi[i][0] + m[1] * pi[i][1];
    for (int j = 0; j < 2; ++j) {
      if (m[j] > 0.0 && pi[i][j] > 0.0) mi += m[j] * pi[i][j] * std::log(pi[i][j] / beta);
    }
  }
  return std::max(mi, 0.0);
}

using Column = std::function<double(const SweepBase&)>;

const std::map<std::string, Column>& column_table() {
  static const std::map<std::string, Column> table = [] {
    std::map<std::string, Column> t;
    auto contract = [](const SweepBase& b) {
      return outcome_contract_agent(b.agent_mu, b.lambda, OutcomeContract{b.tau_bar, 0.0, 1.0});
    };
    auto match = [contract](const SweepBase& b) {
      const auto p = contract(b);
      return b.principal_mu * p.p_Rr + (1.0 - b.principal_mu) * p.p_Ll;
    };
    t["agent_mu"] = [](const SweepBase& b) { return b.agent_mu; };
    t["principal_mu"] = [](const SweepBase& b) { return b.principal_mu; };
    t["lambda"] = [](const SweepBase& b) { return b.lambda; };
    t["tau_bar"] = [](const SweepBase& b) { return b.tau_bar; };
    t["pi_Rr"] = [contract](const SweepBase& b) { return contract(b).p_Rr; };
    t["pi_Ll"] = [contract](const SweepBase& b) { return contract(b).p_Ll; };
    t["principal_value"] = match;
    t["contract_value"] = [match](const SweepBase& b) { return (1.0 - b.tau_bar) * match(b); };
    t["mutual_information"] = [contract](const SweepBase& b) {
      const auto p = contract(b);
      return binary_information(b.agent_mu, p.p_Rr, p.p_Ll);
    };
    t["agent_value"] = [contract](const SweepBase& b) {
      const auto p = contract(b);
      const double hit = b.agent_mu * p.p_Rr + (1.0 - b.agent_mu) * p.p_Ll;
      return (1.0 + b.tau_bar) * hit - b.lambda * binary_information(b.agent_mu, p.p_Rr, p.p_Ll);
    };
    t["mu_star"] = [](const SweepBase& b) { return optimal_belief_binary(b.principal_mu); };
    t["pi_Rr_optimal"] = [](const SweepBase& b) {
      return binary_precisions(optimal_belief_binary(b.principal_mu), b.lambda).p_Rr;
    };
    t["pi_Ll_optimal"] = [](const SweepBase& b) {
      return binary_precisions(optimal_belief_binary(b.principal_mu), b.lambda).p_Ll;
    };
    t["pi_Rr_aligned"] = [](const SweepBase& b) { return binary_precisions(b.principal_mu, b.lambda).p_Rr; };
    t["pi_Ll_aligned"] = [](const SweepBase& b) { return binary_precisions(b.principal_mu, b.lambda).p_Ll; };
    t["value_optimal"] = [](const SweepBase& b) { return optimal_delegation_value_binary(b.principal_mu, b.lambda); };
    t["value_aligned"] = [](const SweepBase& b) {
      return principal_value_binary(b.principal_mu, b.principal_mu, b.lambda);
    };
    t["value_no_learning"] = [](const SweepBase& b) { return std::max(b.principal_mu, 1.0 - b.principal_mu); };
    return t;
  }();
  return table;
}

}  // namespace

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "agent_mu") return SweepParameter::agent_mu;
  if (name == "principal_mu") return SweepParameter::principal_mu;
  if (name == "lambda") return SweepParameter::lambda;
  if (name == "tau_bar") return SweepParameter::tau_bar;
  throw InvalidInput("unknown sweep parameter \"" + name + "\"");
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::agent_mu: return "agent_mu";
    case SweepParameter::principal_mu: return "principal_mu";
    case SweepParameter::lambda: return "lambda";
    case SweepParameter::tau_bar: return "tau_bar";
  }
  return "";
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "agent_mu",      "principal_mu",  "lambda",        "tau_bar",       "pi_Rr",         "pi_Ll",
      "principal_value", "contract_value", "agent_value", "mutual_information", "mu_star", "pi_Rr_optimal",
      "pi_Ll_optimal", "pi_Rr_aligned", "pi_Ll_aligned", "value_optimal", "value_aligned", "value_no_learning"};
  return cols;
}

SweepSpec sweep_preset(const std::string& name) {
  SweepSpec s;
  if (name == "fig1") {
    s.parameter = SweepParameter::agent_mu;
    s.outputs = {"pi_Rr", "pi_Ll"};
  } else if (name == "fig2") {
    s.parameter = SweepParameter::agent_mu;
    s.outputs = {"principal_value"};
  } else if (name == "fig3") {
    s.parameter = SweepParameter::principal_mu;
    s.outputs = {"mu_star"};
  } else if (name == "fig4") {
    s.parameter = SweepParameter::principal_mu;
    s.outputs = {"pi_Rr_optimal", "pi_Ll_optimal", "pi_Rr_aligned", "pi_Ll_aligned"};
  } else {
    throw InvalidInput("unknown preset \"" + name + "\"");
  }
  return s;
}

SweepTable run_sweep(const SweepSpec& spec) {
  if (!(spec.lo < spec.hi)) throw InvalidInput("sweep range needs lo < hi");
  if (spec.steps < 2) throw InvalidInput("sweep needs at least 2 steps");
  const auto& table = column_table();
  SweepTable out;
  out.header.push_back(to_string(spec.parameter));
  std::vector<const Column*> cols{&table.at(out.header.front())};
  for (const auto& name : spec.outputs) {
    const auto it = table.find(name);
    if (it == table.end()) throw InvalidInput("unknown sweep output \"" + name + "\"");
    if (name == out.header.front()) continue;
    out.header.push_back(name);
    cols.push_back(&it->second);
  }
  const double n = static_cast<double>(spec.steps - 1);
  for (std::size_t k = 0; k < spec.steps; ++k) {
    const double x = k + 1 == spec.steps ? spec.hi : spec.lo + (spec.hi - spec.lo) * static_cast<double>(k) / n;
    SweepBase b = spec.base;
    switch (spec.parameter) {
      case SweepParameter::agent_mu: b.agent_mu = x; break;
      case SweepParameter::principal_mu: b.principal_mu = x; break;
      case SweepParameter::lambda: b.lambda = x; break;
      case SweepParameter::tau_bar: b.tau_bar = x; break;
    }
    std::vector<double> row;
    for (const Column* c : cols) row.push_back((*c)(b));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << table.header[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
}

}  // namespace ridel
