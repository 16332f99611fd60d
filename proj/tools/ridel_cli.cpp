// ridel: batch front end for solving, comparing and verifying delegation instances.
//
// Exit codes: 0 success, 1 a verification property failed, 2 bad input,
// 3 numerical failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ridel/agent_solver.hpp"
#include "ridel/delegation.hpp"
#include "ridel/errors.hpp"
#include "ridel/instance_io.hpp"
#include "ridel/instruments.hpp"
#include "ridel/sweep.hpp"
#include "ridel/verify.hpp"

namespace {

using nlohmann::json;
using namespace ridel;

int verbosity() {
  const char* v = std::getenv("RIDEL_LOG");
  return v ? std::atoi(v) : 0;
}

void log(const std::string& msg) {
  if (verbosity() > 0) std::cerr << "[ridel] " << msg << '\n';
}

std::string fmt(double v) { return format_number(v); }

std::string fmt(std::span<const double> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

json to_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

json rule_json(const DecisionRule& pi) {
  json rows = json::array();
  for (std::size_t i = 0; i < pi.n_actions(); ++i) {
    std::vector<double> r;
    for (std::size_t j = 0; j < pi.n_states(); ++j) r.push_back(pi(i, j));
    rows.push_back(r);
  }
  return rows;
}

json solution_json(const AgentSolution& s) {
  return json{{"beta", to_json(s.beta.probs())},
              {"consideration_size", s.beta.consideration_size()},
              {"pi", rule_json(s.pi)},
              {"gross_value", s.gross_value},
              {"info_cost", s.info_cost},
              {"net_value", s.net_value},
              {"kkt_residual", s.kkt_residual},
              {"iterations", s.iterations}};
}

void solution_text(std::ostream& out, const AgentSolution& s, const InstanceFile& f) {
  out << "beta: " << fmt(s.beta.probs()) << '\n';
  out << "consideration set:";
  for (std::size_t i : s.beta.consideration_set()) out << ' ' << f.actions[i];
  out << '\n';
  for (std::size_t i = 0; i < s.pi.n_actions(); ++i) {
    out << "pi(" << f.actions[i] << " | .): (";
    for (std::size_t j = 0; j < s.pi.n_states(); ++j) out << (j ? ", " : "") << fmt(s.pi(i, j));
    out << ")\n";
  }
  out << "gross value: " << fmt(s.gross_value) << '\n';
  out << "information cost: " << fmt(s.info_cost) << '\n';
  out << "net value: " << fmt(s.net_value) << '\n';
  out << "residual: " << fmt(s.kkt_residual) << '\n';
}

// Writes the machine-readable result before anything reaches stdout, so a
// failure leaves no partial output.
void emit(const std::string& text, const json& data, const std::string& out_path) {
  if (!out_path.empty()) {
    std::ofstream o(out_path);
    if (!o) throw InvalidInput("cannot write " + out_path);
    o << data.dump(2) << '\n';
    if (!o) throw InvalidInput("cannot write " + out_path);
  }
  std::cout << text;
}

InstanceFile load(const std::string& path, double lambda_override) {
  InstanceFile f = read_instance(path);
  if (!std::isnan(lambda_override)) {
    if (!(lambda_override > 0.0)) throw InvalidInput("lambda must be positive");
    f.lambda = lambda_override;
  }
  log("loaded " + path);
  return f;
}

int cmd_solve(const std::string& path, const std::string& out_path, double lambda, double grid_step,
              long max_iters) {
  const InstanceFile f = load(path, lambda);
  const RIInstance inst = f.agent_instance();
  SolverConfig cfg;
  cfg.max_iters = max_iters;
  const AgentSolution s = solve_agent(inst, cfg);
  std::ostringstream text;
  solution_text(text, s, f);
  json data = solution_json(s);
  data["principal_value"] = principal_value(f.mu_p, s.pi, f.payoffs);
  text << "principal value: " << fmt(data["principal_value"].get<double>()) << '\n';
  if (grid_step > 0.0) {
    const AgentSolution g = brute_force_agent(inst, grid_step);
    data["grid_search"] = solution_json(g);
    text << "grid search (step " << fmt(grid_step) << ") net value: " << fmt(g.net_value) << '\n';
  }
  emit(text.str(), data, out_path);
  return 0;
}

int cmd_delegate(const std::string& path, const std::string& out_path, double lambda) {
  const InstanceFile f = load(path, lambda);
  if (!f.payoffs.is_state_matching()) throw InvalidInput("delegate needs state-matching payoffs");
  const DelegationReport r = delegation_report(f.mu_p, f.lambda);
  std::ostringstream text;
  text << "mu_star: " << fmt(r.mu_star.probs()) << '\n';
  text << "beta_star: " << fmt(r.beta_star.probs()) << '\n';
  text << "K_star: " << r.K_star << '\n';
  text << "K_aligned: " << r.K_aligned << '\n';
  text << "value_optimal: " << fmt(r.value_optimal) << '\n';
  text << "value_aligned: " << fmt(r.value_aligned) << '\n';
  text << "value_no_learning: " << fmt(r.value_no_learning) << '\n';
  const json data{{"mu_p", to_json(r.mu_p.probs())},
                  {"lambda", r.lambda},
                  {"mu_star", to_json(r.mu_star.probs())},
                  {"beta_star", to_json(r.beta_star.probs())},
                  {"pi_star", rule_json(r.pi_star)},
                  {"K_star", r.K_star},
                  {"K_aligned", r.K_aligned},
                  {"value_optimal", r.value_optimal},
                  {"value_aligned", r.value_aligned},
                  {"value_no_learning", r.value_no_learning},
                  {"crosscheck_error", r.crosscheck_error}};
  emit(text.str(), data, out_path);
  return 0;
}

bool binary_matching(const InstanceFile& f) { return f.payoffs.is_state_matching() && f.states.size() == 2; }

int cmd_instruments(const std::string& path, const std::string& out_path, double lambda) {
  const InstanceFile f = load(path, lambda);
  const RIInstance inst = f.agent_instance();
  std::ostringstream text;
  json data;
  auto report_agent = [&](const std::string& label, const AgentSolution& s) {
    const double v = principal_value(f.mu_p, s.pi, f.payoffs);
    text << label << " beta: " << fmt(s.beta.probs()) << '\n';
    text << label << " principal value: " << fmt(v) << '\n';
    json j = solution_json(s);
    j["principal_value"] = v;
    data[label] = j;
  };

  if (!f.instrument) {
    // No instrument given: show what each instrument achieves for this instance.
    if (binary_matching(f)) {
      const double mu = inst.mu()[0];
      const double mu_p = f.mu_p[0];
      if (mu > 0.0 && mu < 1.0 && mu_p > 0.0 && mu_p < 1.0) {
        const auto tau = belief_to_transfers(mu, mu_p, f.lambda);
        text << "transfers implementing the optimal agent: " << fmt(tau.tau) << '\n';
        data["optimal_transfers"] = tau.tau;
        report_agent("with_transfers", solve_agent_with_action_transfers(inst, tau));
      }
      if (mu > 0.0 && mu < 1.0 && mu_p > 0.5 && mu_p < 1.0) {
        const auto c = optimal_outcome_contract(mu, mu_p, f.lambda);
        text << "optimal outcome contract tau_high: " << fmt(c.tau_high) << '\n';
        text << "contract principal value: " << fmt(outcome_contract_value(mu, mu_p, f.lambda, c.tau_high)) << '\n';
        data["optimal_contract"] = {{"tau_high", c.tau_high},
                                    {"tau_low", c.tau_low},
                                    {"value", outcome_contract_value(mu, mu_p, f.lambda, c.tau_high)}};
      }
    }
    if (f.payoffs.is_state_matching()) {
      const auto r = optimal_restriction(f.mu_p, f.lambda);
      text << "best restriction:";
      std::vector<std::string> names;
      for (std::size_t i : r.best) names.push_back(f.actions[i]);
      for (const auto& n : names) text << ' ' << n;
      text << "\nbest restriction value: " << fmt(r.best_value) << '\n';
      data["optimal_restriction"] = {{"allowed", names}, {"value", r.best_value}};
    }
    report_agent("unrestricted", solve_agent(inst));
    emit(text.str(), data, out_path);
    return 0;
  }

  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AgentBeliefChoice>) {
          report_agent("agent", solve_agent(RIInstance(x.mu, f.payoffs, f.lambda)));
        } else if constexpr (std::is_same_v<T, TransferSchedule>) {
          report_agent("with_transfers", solve_agent_with_action_transfers(inst, x));
          if (f.payoffs.is_state_matching()) {
            const Belief mu = transfers_to_belief(x, inst);
            text << "equivalent agent belief: " << fmt(mu.probs()) << '\n';
            data["equivalent_belief"] = to_json(mu.probs());
          }
        } else if constexpr (std::is_same_v<T, OutcomeContract>) {
          if (!binary_matching(f)) throw InvalidInput("outcome contracts need two states with state-matching payoffs");
          const auto p = outcome_contract_agent(inst.mu()[0], f.lambda, x);
          const double hit = f.mu_p[0] * p.p_Rr + (1.0 - f.mu_p[0]) * p.p_Ll;
          const double value = hit - x.rho * (x.tau_high * hit + x.tau_low * (1.0 - hit));
          text << "precisions: (" << fmt(p.p_Rr) << ", " << fmt(p.p_Ll) << ")\n";
          text << "contract principal value: " << fmt(value) << '\n';
          data["precisions"] = {p.p_Rr, p.p_Ll};
          data["interior"] = p.interior;
          data["principal_value"] = value;
        } else {
          report_agent("restricted", restricted_agent(inst, x.allowed));
          report_agent("unrestricted", solve_agent(inst));
        }
      },
      *f.instrument);
  emit(text.str(), data, out_path);
  return 0;
}

struct SweepArgs {
  std::string instance, preset, parameter, out;
  std::vector<std::string> outputs;
  double lo = 0.0, hi = 1.0, lambda = -1.0, mu_p = -1.0, agent_mu = -1.0, tau_bar = -1.0;
  std::size_t steps = 0;
  bool lo_set = false, hi_set = false;
};

int cmd_sweep(const SweepArgs& a) {
  SweepSpec spec;
  if (!a.preset.empty()) {
    spec = sweep_preset(a.preset);
  } else if (a.parameter.empty()) {
    throw InvalidInput("sweep needs --preset or --parameter");
  }
  if (!a.parameter.empty()) spec.parameter = parse_sweep_parameter(a.parameter);
  if (!a.outputs.empty()) spec.outputs = a.outputs;
  if (spec.outputs.empty()) throw InvalidInput("sweep needs --outputs");
  if (!a.instance.empty()) {
    const InstanceFile f = read_instance(a.instance);
    if (!binary_matching(f)) throw InvalidInput("sweeps need two states with state-matching payoffs");
    spec.base.principal_mu = f.mu_p[0];
    spec.base.agent_mu = f.agent_instance().mu()[0];
    spec.base.lambda = f.lambda;
    if (f.instrument) {
      if (const auto* c = std::get_if<OutcomeContract>(&*f.instrument)) spec.base.tau_bar = c->tau_high;
    }
  }
  if (a.lambda > 0.0) spec.base.lambda = a.lambda;
  if (a.mu_p >= 0.0) spec.base.principal_mu = a.mu_p;
  if (a.agent_mu >= 0.0) spec.base.agent_mu = a.agent_mu;
  if (a.tau_bar >= 0.0) spec.base.tau_bar = a.tau_bar;
  if (a.lo_set) spec.lo = a.lo;
  if (a.hi_set) spec.hi = a.hi;
  if (a.steps) spec.steps = a.steps;

  const SweepTable table = run_sweep(spec);
  std::ostringstream csv;
  write_csv(table, csv);
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream o(a.out);
    if (!o) throw InvalidInput("cannot write " + a.out);
    o << csv.str();
    if (!o) throw InvalidInput("cannot write " + a.out);
    std::cout << "wrote " << table.rows.size() << " rows to " << a.out << '\n';
  }
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
  const auto reports = run_verify(suite, seed);
  std::ostringstream text;
  json data = json::array();
  bool ok = true;
  for (const auto& r : reports) {
    json props = json::array();
    for (const auto& p : r.properties) {
      text << (p.ok() ? "PASS " : "FAIL ") << r.suite << ": " << p.name << " [" << p.passed << "/" << p.total << "]";
      if (!p.detail.empty()) text << " (" << p.detail << ")";
      text << '\n';
      props.push_back({{"name", p.name}, {"passed", p.passed}, {"total", p.total}, {"detail", p.detail}});
    }
    ok = ok && r.ok();
    data.push_back({{"suite", r.suite}, {"ok", r.ok()}, {"properties", props}});
  }
  emit(text.str(), data, out_path);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational-inattention delegation toolkit"};
  app.require_subcommand(1);
  std::string out, instance, suite;
  double lambda = std::nan(""), grid_step = -1.0;
  std::uint64_t seed = 0;

  auto* solve = app.add_subcommand("solve", "Solve the agent's problem for an instance file");
  solve->add_option("instance", instance, "Instance file (JSON)")->required();
  solve->add_option("--out", out, "Also write the result as JSON");
  solve->add_option("--lambda", lambda, "Override the cost parameter");
  solve->add_option("--grid-step", grid_step, "Also run a grid search with this step");
  long max_iters = SolverConfig{}.max_iters;
  solve->add_option("--max-iters", max_iters, "Fixed-point iteration limit");

  auto* delegate = app.add_subcommand("delegate", "Optimal agent belief and benchmark values");
  delegate->add_option("instance", instance, "Instance file (JSON)")->required();
  delegate->add_option("--out", out, "Also write the result as JSON");
  delegate->add_option("--lambda", lambda, "Override the cost parameter");

  auto* instruments = app.add_subcommand("instruments", "Evaluate transfers, contracts and restrictions");
  instruments->add_option("instance", instance, "Instance file (JSON)")->required();
  instruments->add_option("--out", out, "Also write the result as JSON");
  instruments->add_option("--lambda", lambda, "Override the cost parameter");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Write a one-parameter sweep of the two-state model as CSV");
  sweep->add_option("instance", sw.instance, "Optional two-state instance supplying the base point");
  sweep->add_option("--preset", sw.preset, "fig1 | fig2 | fig3 | fig4")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));
  sweep->add_option("--parameter", sw.parameter, "agent_mu | principal_mu | lambda | tau_bar");
  sweep->add_option("--outputs", sw.outputs, "Output columns")->delimiter(',');
  auto* lo = sweep->add_option("--lo", sw.lo, "Lower end of the range");
  auto* hi = sweep->add_option("--hi", sw.hi, "Upper end of the range");
  sweep->add_option("--steps", sw.steps, "Number of grid points");
  sweep->add_option("--lambda", sw.lambda, "Cost parameter");
  sweep->add_option("--mu-p", sw.mu_p, "Principal's belief in state r");
  sweep->add_option("--agent-mu", sw.agent_mu, "Agent's belief in state r");
  sweep->add_option("--tau-bar", sw.tau_bar, "Outcome-contract payment");
  sweep->add_option("--out", sw.out, "CSV output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run a randomized verification suite");
  verify->add_option("suite", suite, "Suite name or \"all\"")->required();
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--out", out, "Also write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*solve) return cmd_solve(instance, out, lambda, grid_step, max_iters);
    if (*delegate) return cmd_delegate(instance, out, lambda);
    if (*instruments) return cmd_instruments(instance, out, lambda);
    if (*sweep) {
      sw.lo_set = lo->count() > 0;
      sw.hi_set = hi->count() > 0;
      return cmd_sweep(sw);
    }
    if (*verify) return cmd_verify(suite, seed, out);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
