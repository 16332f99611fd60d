#pragma once

// Instruments other than agent selection: action transfers, outcome contracts
// and restriction of the action set.

#include <cstddef>
#include <vector>

#include "ridel/agent_solver.hpp"
#include "ridel/core.hpp"
#include "ridel/implementability.hpp"

namespace ridel {

/// Action-contingent payments tau(a_i). Two-action schedules are ordered (R, L).
struct TransferSchedule {
  std::vector<double> tau;
  bool limited_liability = false;

  TransferSchedule(std::vector<double> tau, bool limited_liability = false);
  friend bool operator==(const TransferSchedule&, const TransferSchedule&) = default;
};

/// Pays tau_high when the action matches the state and tau_low otherwise.
struct OutcomeContract {
  double tau_high = 0.0;
  double tau_low = 0.0;
  double rho = 1.0;
  friend bool operator==(const OutcomeContract&, const OutcomeContract&) = default;
};

AgentSolution solve_agent_with_action_transfers(const RIInstance& inst, const TransferSchedule& tau,
                                                const SolverConfig& cfg = {});

/// Transfer (tau_R, 0) under which an agent with belief mu_agent reproduces the
/// choice rule of the principal's optimal agent.
TransferSchedule belief_to_transfers(double mu_agent, double mu_p_r, double lambda);

/// The prior that, without transfers, produces the same choice rule as inst under tau.
Belief transfers_to_belief(const TransferSchedule& tau, const RIInstance& inst);

/// Agent precisions under an outcome contract with tau_low = 0: the cost
/// parameter effectively becomes lambda / (1 + tau_high).
BinaryPrecisions outcome_contract_agent(double mu_r, double lambda, const OutcomeContract& contract);

/// Principal payoff (1 - tau_high) * P(match) under the principal's prior.
double outcome_contract_value(double mu_r, double mu_p_r, double lambda, double tau_high);

/// Left side of the contract first-order condition; depends only on beliefs.
double contract_gamma(double mu_r, double mu_p_r);
/// Right side; continuous and increasing in tau_high on [0, 1).
double contract_chi(double tau_high, double lambda);

/// Best contract with tau_low = 0 and rho = 1: bisection on the first-order
/// condition, then an explicit comparison with the zero-payment corner.
OutcomeContract optimal_outcome_contract(double mu_r, double mu_p_r, double lambda);

/// Where the first-order condition starts to admit a positive payment. Agent
/// beliefs in [learn_lo, mu_bar_1] or [mu_bar_2, learn_hi] get tau_high > 0;
/// an interval is empty when its flag is false.
struct ContractThresholds {
  double learn_lo;
  double learn_hi;
  double mu_bar_1;
  double mu_bar_2;
  bool first_nonempty;
  bool second_nonempty;
};
ContractThresholds contract_thresholds(double mu_p_r, double lambda);

/// Agent restricted to the listed actions; the result is reported over the
/// full action set with zero probability on forbidden actions.
AgentSolution restricted_agent(const RIInstance& inst, const std::vector<std::size_t>& allowed,
                               const SolverConfig& cfg = {});

struct RestrictionResult {
  std::vector<std::size_t> best;  // an argmax; the full set whenever it attains the maximum
  double best_value;
  double full_value;
  /// Principal value of every nonempty subset, indexed by bitmask.
  std::vector<double> subset_values;
};

/// Enumerates every nonempty action subset for a common-prior, state-matching
/// agent. Throws std::logic_error if a proper subset beats the full set by more
/// than 1e-10.
RestrictionResult optimal_restriction(const Belief& mu_p, double lambda, std::size_t max_N = 12,
                                      const SolverConfig& cfg = {});

}  // namespace ridel
