#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ridel/agent_solver.hpp"
#include "ridel/communication.hpp"
#include "ridel/core.hpp"
#include "ridel/delegation.hpp"
#include "ridel/errors.hpp"
#include "ridel/implementability.hpp"
#include "ridel/instruments.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ridel;

namespace {

std::vector<std::vector<double>> rule_rows(const DecisionRule& pi) {
  std::vector<std::vector<double>> rows(pi.n_actions(), std::vector<double>(pi.n_states()));
  for (std::size_t i = 0; i < pi.n_actions(); ++i) {
    for (std::size_t j = 0; j < pi.n_states(); ++j) rows[i][j] = pi(i, j);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_ridel, m) {
  m.doc() = "Rational-inattention delegation toolkit";

  auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  (void)invalid;
  static py::exception<NonConvergence> non_conv(m, "NonConvergence", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NonConvergence& e) {
      py::set_error(non_conv, e.what());
    }
  });

  py::class_<Belief>(m, "Belief")
      .def(py::init<std::vector<double>>(), "probs"_a)
      .def_static("uniform", &Belief::uniform)
      .def_static("binary", &Belief::binary)
      .def_property_readonly("probs", &Belief::values)
      .def("__len__", &Belief::size)
      .def("__getitem__", [](const Belief& b, std::size_t i) {
        if (i >= b.size()) throw py::index_error();
        return b[i];
      })
      .def("__repr__", [](const Belief& b) { return "Belief(" + py::repr(py::cast(b.values())).cast<std::string>() + ")"; });
  py::implicitly_convertible<std::vector<double>, Belief>();

  py::class_<PayoffMatrix>(m, "PayoffMatrix")
      .def(py::init(&PayoffMatrix::from_rows), "rows"_a)
      .def_static("state_matching", &PayoffMatrix::state_matching)
      .def_property_readonly("n_actions", &PayoffMatrix::n_actions)
      .def_property_readonly("n_states", &PayoffMatrix::n_states)
      .def_property_readonly("is_state_matching", &PayoffMatrix::is_state_matching)
      .def("__call__", [](const PayoffMatrix& u, std::size_t i, std::size_t j) { return u(i, j); });

  py::class_<ChoiceDistribution>(m, "ChoiceDistribution")
      .def(py::init<std::vector<double>, double>(), "beta"_a, "support_threshold"_a = kDefaultSupportThreshold)
      .def_property_readonly("beta", &ChoiceDistribution::values)
      .def_property_readonly("consideration_set", &ChoiceDistribution::consideration_set)
      .def_property_readonly("K", &ChoiceDistribution::consideration_size);
  py::implicitly_convertible<std::vector<double>, ChoiceDistribution>();

  py::class_<RIInstance>(m, "RIInstance")
      .def(py::init<Belief, PayoffMatrix, double>(), "mu"_a, "u"_a, "lambda_"_a)
      .def_property_readonly("mu", &RIInstance::mu)
      .def_property_readonly("lam", &RIInstance::lambda);

  py::class_<DecisionRule>(m, "DecisionRule")
      .def(py::init([](const std::vector<std::vector<double>>& rows) {
             if (rows.empty()) throw InvalidInput("DecisionRule: no rows");
             std::vector<double> flat;
             for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
             return DecisionRule(rows.size(), rows.front().size(), std::move(flat));
           }),
           "rows"_a)
      .def_property_readonly("rows", &rule_rows)
      .def("__call__", [](const DecisionRule& pi, std::size_t i, std::size_t j) { return pi(i, j); });

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("fp_tolerance", &SolverConfig::fp_tolerance)
      .def_readwrite("prune_threshold", &SolverConfig::prune_threshold)
      .def_readwrite("newton_polish", &SolverConfig::newton_polish);

  py::class_<AgentSolution>(m, "AgentSolution")
      .def_readonly("beta", &AgentSolution::beta)
      .def_readonly("pi", &AgentSolution::pi)
      .def_readonly("gross_value", &AgentSolution::gross_value)
      .def_readonly("info_cost", &AgentSolution::info_cost)
      .def_readonly("net_value", &AgentSolution::net_value)
      .def_readonly("kkt_residual", &AgentSolution::kkt_residual)
      .def_readonly("iterations", &AgentSolution::iterations);

  py::class_<BinaryPrecisions>(m, "BinaryPrecisions")
      .def_readonly("p_Rr", &BinaryPrecisions::p_Rr)
      .def_readonly("p_Ll", &BinaryPrecisions::p_Ll)
      .def_readonly("interior", &BinaryPrecisions::interior);

  m.def("entropy", &entropy, "b"_a);
  m.def("mutual_information", &mutual_information, "mu"_a, "pi"_a);
  m.def("info_cost", &info_cost, "mu"_a, "pi"_a, "lambda_"_a);
  m.def("agent_value", &agent_value, "inst"_a, "pi"_a);
  m.def("principal_value", &principal_value, "mu_p"_a, "pi"_a, "u"_a);

  m.def("conditional_from_unconditional", &conditional_from_unconditional, "beta"_a, "inst"_a);
  m.def("solve_agent", &solve_agent, "inst"_a, "cfg"_a = SolverConfig{});
  m.def("optimality_residual", &optimality_residual, "beta"_a, "inst"_a);
  m.def("brute_force_agent", &brute_force_agent, "inst"_a, "grid_step"_a, "max_grid_points"_a = 20'000'000);
  m.def("binary_precisions", &binary_precisions, "mu_r"_a, "lambda_"_a);
  m.def("pandora_wtp", &pandora_wtp, "mu_r"_a, "c"_a);

  py::class_<DelegationReport>(m, "DelegationReport")
      .def_readonly("mu_p", &DelegationReport::mu_p)
      .def_readonly("lam", &DelegationReport::lambda)
      .def_readonly("mu_star", &DelegationReport::mu_star)
      .def_readonly("beta_star", &DelegationReport::beta_star)
      .def_readonly("pi_star", &DelegationReport::pi_star)
      .def_readonly("K_star", &DelegationReport::K_star)
      .def_readonly("K_aligned", &DelegationReport::K_aligned)
      .def_readonly("value_optimal", &DelegationReport::value_optimal)
      .def_readonly("value_aligned", &DelegationReport::value_aligned)
      .def_readonly("value_no_learning", &DelegationReport::value_no_learning);

  m.def("optimal_unconditional", &optimal_unconditional, "mu_p"_a, "lambda_"_a);
  m.def("aligned_unconditional", &aligned_unconditional, "mu"_a, "lambda_"_a);
  m.def("principal_value_statematching", &principal_value_statematching, "mu_p"_a, "beta"_a, "lambda_"_a);
  m.def("optimal_belief_binary", &optimal_belief_binary, "mu_p_r"_a);
  m.def("optimal_belief_general", &optimal_belief_general, "mu_p"_a);
  m.def(
      "consideration_sizes",
      [](const Belief& mu_p, double lambda) {
        const auto s = consideration_sizes(mu_p, lambda);
        return py::make_tuple(s.aligned, s.optimal);
      },
      "mu_p"_a, "lambda_"_a);
  m.def("invert_beta_to_belief", &invert_beta_to_belief, "beta"_a, "u"_a, "lambda_"_a);
  m.def("delegation_report", &delegation_report, "mu_p"_a, "lambda_"_a, "cfg"_a = SolverConfig{});
  m.def("principal_value_binary", &principal_value_binary, "mu_agent"_a, "mu_p_r"_a, "lambda_"_a);

  py::class_<TransferSchedule>(m, "TransferSchedule")
      .def(py::init<std::vector<double>, bool>(), "tau"_a, "limited_liability"_a = false)
      .def_readonly("tau", &TransferSchedule::tau)
      .def_readonly("limited_liability", &TransferSchedule::limited_liability);

  py::class_<OutcomeContract>(m, "OutcomeContract")
      .def(py::init([](double hi, double lo, double rho) { return OutcomeContract{hi, lo, rho}; }),
           "tau_high"_a = 0.0, "tau_low"_a = 0.0, "rho"_a = 1.0)
      .def_readonly("tau_high", &OutcomeContract::tau_high)
      .def_readonly("tau_low", &OutcomeContract::tau_low)
      .def_readonly("rho", &OutcomeContract::rho);

  py::class_<FeasibilityCertificate>(m, "FeasibilityCertificate")
      .def_readonly("feasible", &FeasibilityCertificate::feasible)
      .def_readonly("mu", &FeasibilityCertificate::mu)
      .def_readonly("dual_witness", &FeasibilityCertificate::dual_witness);

  m.def("solve_agent_with_action_transfers", &solve_agent_with_action_transfers, "inst"_a, "tau"_a,
        "cfg"_a = SolverConfig{});
  m.def("belief_to_transfers", &belief_to_transfers, "mu_agent"_a, "mu_p_r"_a, "lambda_"_a);
  m.def("transfers_to_belief", &transfers_to_belief, "tau"_a, "inst"_a);
  m.def("outcome_contract_agent", &outcome_contract_agent, "mu_r"_a, "lambda_"_a, "contract"_a);
  m.def("optimal_outcome_contract", &optimal_outcome_contract, "mu_r"_a, "mu_p_r"_a, "lambda_"_a);
  m.def(
      "contract_thresholds",
      [](double mu_p_r, double lambda) {
        const auto t = contract_thresholds(mu_p_r, lambda);
        py::dict d;
        d["learn_lo"] = t.learn_lo;
        d["learn_hi"] = t.learn_hi;
        d["mu_bar_1"] = t.mu_bar_1;
        d["mu_bar_2"] = t.mu_bar_2;
        d["first_nonempty"] = t.first_nonempty;
        d["second_nonempty"] = t.second_nonempty;
        return d;
      },
      "mu_p_r"_a, "lambda_"_a);
  m.def("restricted_agent", &restricted_agent, "inst"_a, "allowed"_a, "cfg"_a = SolverConfig{});
  m.def(
      "optimal_restriction",
      [](const Belief& mu_p, double lambda, std::size_t max_n) {
        const auto r = optimal_restriction(mu_p, lambda, max_n);
        return py::make_tuple(r.best, r.best_value);
      },
      "mu_p"_a, "lambda_"_a, "max_N"_a = 12);
  m.def("implementability_check", &implementability_check, "beta"_a, "u"_a, "lambda_"_a);
  m.def("nonimplementable_payoffs", &nonimplementable_payoffs, "eps"_a = 0.1);

  m.def(
      "principal_posterior",
      [](const Belief& mu_p, const DecisionRule& pi) {
        const auto t = principal_posterior(mu_p, pi);
        py::dict d;
        for (std::size_t k = 0; k < t.recommendations.size(); ++k) d[py::int_(t.recommendations[k])] = t.posteriors[k].values();
        return d;
      },
      "mu_p"_a, "pi_agent"_a);
  m.def(
      "obedience_check",
      [](const Belief& mu_star, double lambda) {
        const auto r = obedience_check(mu_star, lambda);
        py::dict d;
        for (std::size_t k = 0; k < r.recommendations.size(); ++k) d[py::int_(r.recommendations[k])] = bool(r.obedient[k]);
        return d;
      },
      "mu_star"_a, "lambda_"_a);
  m.def("verify_communication_equilibrium", &verify_communication_equilibrium, "mu_p"_a, "lambda_"_a);
}
