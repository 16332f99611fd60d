#include "ridel/instruments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ridel/delegation.hpp"
#include "ridel/errors.hpp"

namespace ridel {

namespace {

void check_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw InvalidInput(std::string(what) + " must lie in (0, 1)");
}

// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
template <class F>
double bisect(F f, double lo, double hi, double tol = 1e-13) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TransferSchedule::TransferSchedule(std::vector<double> t, bool ll) : tau(std::move(t)), limited_liability(ll) {
  if (tau.empty()) throw InvalidInput("empty transfer schedule");
  for (double x : tau) {
    if (!std::isfinite(x)) throw InvalidInput("non-finite transfer");
    if (limited_liability && x < 0.0) throw InvalidInput("negative transfer under limited liability");
  }
}

AgentSolution solve_agent_with_action_transfers(const RIInstance& inst, const TransferSchedule& tau,
                                                const SolverConfig& cfg) {
  const RIInstance shifted(inst.mu(), inst.u().with_action_bonus(tau.tau), inst.lambda());
  return solve_agent(shifted, cfg);
}

TransferSchedule belief_to_transfers(double mu_agent, double mu_p_r, double lambda) {
  check_open_unit(mu_agent, "agent belief");
  check_open_unit(mu_p_r, "principal belief");
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  const double x = std::exp(-1.0 / lambda);
  const double odds = (1.0 - mu_agent) / mu_agent;
  const double s = std::sqrt((1.0 - mu_p_r) / mu_p_r);
  const double tau_r = lambda * std::log((odds + s * x) / (odds * x + s));
  return TransferSchedule({tau_r, 0.0});
}

Belief transfers_to_belief(const TransferSchedule& tau, const RIInstance& inst) {
  if (tau.tau.size() != inst.u().n_actions()) throw InvalidInput("transfer schedule length differs from actions");
  const auto sol = solve_agent_with_action_transfers(inst, tau);
  const double shift = *std::max_element(tau.tau.begin(), tau.tau.end());
  std::vector<double> tilted(tau.tau.size());
  double s = 0.0;
  for (std::size_t i = 0; i < tilted.size(); ++i) {
    tilted[i] = sol.beta[i] * std::exp((tau.tau[i] - shift) / inst.lambda());
    s += tilted[i];
  }
  for (double& v : tilted) v /= s;
  const auto mu = invert_beta_to_belief(ChoiceDistribution(tilted), inst.u(), inst.lambda());
  if (!mu) throw InvalidInput("no prior reproduces the choice rule induced by these transfers");

  const auto check = solve_agent(RIInstance(*mu, inst.u(), inst.lambda()));
  double err = 0.0;
  for (std::size_t k = 0; k < check.pi.values().size(); ++k) {
    err = std::max(err, std::abs(check.pi.values()[k] - sol.pi.values()[k]));
  }
  if (err > 1e-8) throw NonConvergence("transfer-equivalent prior failed its round trip", err, check.iterations);
  return *mu;
}

BinaryPrecisions outcome_contract_agent(double mu_r, double lambda, const OutcomeContract& contract) {
  const double spread = 1.0 + contract.tau_high - contract.tau_low;
  if (!(spread > 0.0)) throw InvalidInput("contract must reward matching the state");
  return binary_precisions(mu_r, lambda / spread);
}

double outcome_contract_value(double mu_r, double mu_p_r, double lambda, double tau_high) {
  const auto p = outcome_contract_agent(mu_r, lambda, OutcomeContract{tau_high, 0.0, 1.0});
  return (1.0 - tau_high) * (mu_p_r * p.p_Rr + (1.0 - mu_p_r) * p.p_Ll);
}

double contract_gamma(double mu_r, double mu_p_r) {
  check_open_unit(mu_r, "agent belief");
  return mu_p_r * (1.0 - mu_r) / mu_r + (1.0 - mu_p_r) * mu_r / (1.0 - mu_r);
}

double contract_chi(double tau_high, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  // Numerator and denominator divided by E^2 to stay finite for small lambda.
  const double a = (1.0 + tau_high) / lambda;
  const double inv2 = std::exp(-2.0 * a);
  const double num = lambda * (1.0 - inv2) + 2.0 * (1.0 - tau_high) * inv2;
  const double den = lambda * (1.0 - inv2) + (1.0 - tau_high) * (1.0 + inv2);
  return std::exp(a) * num / den;
}

OutcomeContract optimal_outcome_contract(double mu_r, double mu_p_r, double lambda) {
  check_open_unit(mu_r, "agent belief");
  if (!(mu_p_r > 0.5 && mu_p_r < 1.0)) throw InvalidInput("principal belief must lie in (0.5, 1)");
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  const double g = contract_gamma(mu_r, mu_p_r);
  const double hi = std::nextafter(1.0, 0.0);
  OutcomeContract corner{0.0, 0.0, 1.0};
  if (!(g > contract_chi(0.0, lambda) && g < contract_chi(hi, lambda))) return corner;
  const double root = bisect([&](double t) { return contract_chi(t, lambda) - g; }, 0.0, hi);
  if (outcome_contract_value(mu_r, mu_p_r, lambda, root) > outcome_contract_value(mu_r, mu_p_r, lambda, 0.0)) {
    return OutcomeContract{root, 0.0, 1.0};
  }
  return corner;
}

ContractThresholds contract_thresholds(double mu_p_r, double lambda) {
  if (!(mu_p_r > 0.5 && mu_p_r < 1.0)) throw InvalidInput("principal belief must lie in (0.5, 1)");
  const double x = std::exp(-1.0 / lambda);
  const double learn_lo = x / (1.0 + x);
  const double learn_hi = 1.0 / (1.0 + x);
  const double target = contract_chi(0.0, lambda);
  const double mid = optimal_belief_binary(mu_p_r);
  // gamma falls on (0, mu*] and rises on [mu*, 1) with gamma(mu*) < 1 < target.
  auto f = [&](double m) { return contract_gamma(m, mu_p_r) - target; };
  const double eps = 1e-15;
  const double m1 = bisect(f, eps, mid);
  const double m2 = bisect(f, mid, 1.0 - eps);
  return {learn_lo, learn_hi, m1, m2, m1 >= learn_lo, m2 <= learn_hi};
}

AgentSolution restricted_agent(const RIInstance& inst, const std::vector<std::size_t>& allowed,
                               const SolverConfig& cfg) {
  if (allowed.empty()) throw InvalidInput("restriction to an empty action set");
  std::vector<std::size_t> sorted = allowed;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidInput("restriction lists an action twice");
  }
  const RIInstance sub(inst.mu(), inst.u().restricted_to(allowed), inst.lambda());
  const auto sol = solve_agent(sub, cfg);

  const std::size_t na = inst.u().n_actions();
  const std::size_t ns = inst.u().n_states();
  std::vector<double> beta(na, 0.0), pi(na * ns, 0.0);
  for (std::size_t k = 0; k < allowed.size(); ++k) {
    beta[allowed[k]] = sol.beta[k];
    for (std::size_t j = 0; j < ns; ++j) pi[allowed[k] * ns + j] = sol.pi(k, j);
  }
  return AgentSolution{ChoiceDistribution(std::move(beta), sol.beta.support_threshold()),
                       DecisionRule(na, ns, std::move(pi)),
                       sol.gross_value,
                       sol.info_cost,
                       sol.net_value,
                       sol.kkt_residual,
                       sol.iterations};
}

RestrictionResult optimal_restriction(const Belief& mu_p, double lambda, std::size_t max_N,
                                      const SolverConfig& cfg) {
  const std::size_t n = mu_p.size();
  if (n > max_N || n >= 8 * sizeof(std::size_t) - 1) throw InvalidInput("too many actions to enumerate subsets");
  const PayoffMatrix u = PayoffMatrix::state_matching(n);
  const RIInstance inst(mu_p, u, lambda);
  const std::size_t full = (std::size_t{1} << n) - 1;
  RestrictionResult out{{}, 0.0, 0.0, std::vector<double>(full + 1, 0.0)};
  std::size_t best_mask = full;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    std::vector<std::size_t> allowed;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) allowed.push_back(i);
    }
    const auto sol = restricted_agent(inst, allowed, cfg);
    out.subset_values[mask] = principal_value(mu_p, sol.pi, u);
  }
  out.full_value = out.subset_values[full];
  out.best_value = out.full_value;
  for (std::size_t mask = 1; mask < full; ++mask) {
    if (out.subset_values[mask] > out.best_value) {
      out.best_value = out.subset_values[mask];
      best_mask = mask;
    }
  }
  if (out.best_value > out.full_value + 1e-10) {
    throw std::logic_error("a proper action subset beats the full action set");
  }
  best_mask = full;
  out.best_value = out.full_value;
  for (std::size_t i = 0; i < n; ++i) {
    if ((best_mask >> i) & 1U) out.best.push_back(i);
  }
  return out;
}

}  // namespace ridel
