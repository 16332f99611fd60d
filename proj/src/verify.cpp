#include "ridel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "ridel/agent_solver.hpp"
#include "ridel/communication.hpp"
#include "ridel/delegation.hpp"
#include "ridel/errors.hpp"
#include "ridel/implementability.hpp"
#include "ridel/instruments.hpp"

namespace ridel {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Flat Dirichlet draw, floored so that every state keeps some mass.
Belief random_belief(Rng& rng, std::size_t n, double floor = 0.0) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) {
    x = ex(rng) + floor;
    s += x;
  }
  for (double& x : v) x /= s;
  return Belief(std::move(v));
}

RIInstance random_instance(Rng& rng) {
  const std::size_t ns = pick(rng, 2, 5);
  const bool matching = pick(rng, 0, 1) == 0;
  const std::size_t na = matching ? ns : pick(rng, 2, 5);
  const double lambda = uniform(rng, 0.2, 5.0);
  if (matching) return RIInstance(random_belief(rng, ns), PayoffMatrix::state_matching(ns), lambda);
  std::vector<double> u(na * ns);
  for (double& x : u) x = uniform(rng, 0.0, 1.0);
  return RIInstance(random_belief(rng, ns), PayoffMatrix(na, ns, std::move(u)), lambda);
}

struct Tracker {
  PropertyResult r;
  double worst = 0.0;

  explicit Tracker(std::string name) { r.name = std::move(name); }
  void check(bool ok) {
    ++r.total;
    if (ok) ++r.passed;
  }
  void measure(double err, double tol) {
    worst = std::max(worst, err);
    check(err <= tol);
  }
  PropertyResult done() {
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst %.3g", worst);
    if (worst > 0.0) r.detail = buf;
    return r;
  }
};

// Runs body and counts numerical or input failures as failed checks.
void guarded(Tracker& t, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception&) {
    t.check(false);
  }
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<PropertyResult> agent_kkt(Rng& rng) {
  Tracker t("optimality residual <= 1e-9");
  for (int k = 0; k < 200; ++k) {
    const auto inst = random_instance(rng);
    guarded(t, [&] { t.measure(optimality_residual(solve_agent(inst).beta, inst), 1e-9); });
  }
  return {t.done()};
}

std::vector<PropertyResult> agent_oracle(Rng& rng) {
  Tracker grid("solver vs grid search (step 0.01)");
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = pick(rng, 2, 3);
    const RIInstance inst(random_belief(rng, n), PayoffMatrix::state_matching(n), uniform(rng, 0.3, 3.0));
    guarded(grid, [&] {
      const double gap = solve_agent(inst).net_value - brute_force_agent(inst, 0.01).net_value;
      grid.measure(std::abs(gap), 5 * 0.01);
    });
  }
  Tracker closed("two-state closed form vs solver");
  for (int k = 0; k < 100; ++k) {
    const double mu = uniform(rng, 0.01, 0.99);
    const double lambda = uniform(rng, 0.2, 5.0);
    guarded(closed, [&] {
      const auto p = binary_precisions(mu, lambda);
      const auto sol = solve_agent(RIInstance(Belief::binary(mu), PayoffMatrix::state_matching(2), lambda));
      closed.measure(std::max(std::abs(sol.pi(0, 0) - p.p_Rr), std::abs(sol.pi(1, 1) - p.p_Ll)), 1e-8);
    });
  }
  return {grid.done(), closed.done()};
}

std::vector<PropertyResult> relaxed_oracle(Rng& rng) {
  Tracker t("closed form vs exact grid optimum (step 0.002)");
  const double lambdas[] = {0.5, 1.0, 2.0};
  for (int k = 0; k < 60; ++k) {
    const auto mu_p = random_belief(rng, pick(rng, 2, 4));
    const double lambda = lambdas[pick(rng, 0, 2)];
    guarded(t, [&] {
      t.measure(max_abs_diff(optimal_unconditional(mu_p, lambda).values(),
                             relaxed_grid_optimum(mu_p, lambda, 0.002).values()),
                0.005);
    });
  }
  return {t.done()};
}

std::vector<PropertyResult> belief_roundtrip(Rng& rng) {
  Tracker star("agent at the optimal belief reproduces the optimal choice probabilities");
  for (int k = 0; k < 100; ++k) {
    const auto mu_p = random_belief(rng, pick(rng, 2, 6));
    const double lambda = uniform(rng, 0.2, 5.0);
    guarded(star, [&] {
      const auto sol = solve_agent(RIInstance(optimal_belief_general(mu_p),
                                              PayoffMatrix::state_matching(mu_p.size()), lambda));
      star.measure(max_abs_diff(sol.beta.values(), optimal_unconditional(mu_p, lambda).values()), 1e-8);
    });
  }
  Tracker inv("inverted belief reproduces the choice probabilities");
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = pick(rng, 2, 5);
    const auto beta = random_belief(rng, n, 0.05);
    const double lambda = uniform(rng, 0.2, 5.0);
    guarded(inv, [&] {
      const auto u = PayoffMatrix::state_matching(n);
      const auto mu = invert_beta_to_belief(ChoiceDistribution(beta.values()), u, lambda);
      if (!mu) return inv.check(false);
      inv.measure(max_abs_diff(solve_agent(RIInstance(*mu, u, lambda)).beta.values(), beta.values()), 1e-8);
    });
  }
  return {star.done(), inv.done()};
}

std::vector<PropertyResult> lambda_invariance(Rng&) {
  Tracker t("grid argmax over agent beliefs within one step of the optimal belief");
  const double mu_p = 0.7;
  const double target = optimal_belief_binary(mu_p);
  for (double lambda : {0.3, 0.5, 1.0}) {
    double best = -1.0, arg = 0.0;
    for (int k = 0; k <= 10000; ++k) {
      const double mu = k * 1e-4;
      const double v = principal_value_binary(mu, mu_p, lambda);
      if (v > best) {
        best = v;
        arg = mu;
      }
    }
    t.measure(std::abs(arg - target), 1e-4);
  }
  return {t.done()};
}

std::vector<PropertyResult> consideration(Rng& rng) {
  Tracker t("optimal consideration set at least as large as aligned");
  std::size_t strict = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto mu_p = random_belief(rng, pick(rng, 2, 6));
    const auto sizes = consideration_sizes(mu_p, uniform(rng, 0.2, 5.0));
    t.check(sizes.optimal >= sizes.aligned);
    if (sizes.optimal > sizes.aligned) ++strict;
  }
  Tracker s("strict expansion observed");
  s.check(strict > 0);
  return {t.done(), s.done()};
}

std::vector<PropertyResult> nonimplementable(Rng&) {
  Tracker t("three-action counterexample is certified infeasible");
  const auto u = nonimplementable_payoffs();
  for (const auto& b : std::vector<std::vector<double>>{{1 / 3.0, 1 / 3.0, 1 / 3.0}, {0.2, 0.3, 0.5}, {0.45, 0.45, 0.1}}) {
    const ChoiceDistribution beta(b);
    const auto cert = implementability_check(beta, u, 1.0);
    t.check(!cert.feasible && witness_violation(cert.dual_witness, beta, u, 1.0) <= 1e-9);
  }
  return {t.done()};
}

std::vector<PropertyResult> implementability(Rng& rng) {
  auto out = nonimplementable(rng);
  Tracker t("state-matching choice probabilities are always implementable");
  Tracker ex("exactly one certificate verifies");
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = pick(rng, 2, 5);
    const double lambda = uniform(rng, 0.2, 5.0);
    const ChoiceDistribution beta(random_belief(rng, n, 0.02).values());
    guarded(t, [&] {
      const auto u = PayoffMatrix::state_matching(n);
      const auto cert = implementability_check(beta, u, lambda);
      t.check(cert.feasible && implementation_error(*cert.mu, beta, u, lambda) <= 1e-9);
    });
    // Random payoffs exercise both sides of the alternative.
    const std::size_t na = pick(rng, 2, 4);
    std::vector<double> uu(na * n);
    for (double& x : uu) x = uniform(rng, 0.0, 2.0);
    const PayoffMatrix u(na, n, std::move(uu));
    const ChoiceDistribution b2(random_belief(rng, na, 0.02).values());
    guarded(ex, [&] {
      const auto cert = implementability_check(b2, u, lambda);
      const bool primal = cert.feasible && implementation_error(*cert.mu, b2, u, lambda) <= 1e-9;
      const bool dual = !cert.feasible && witness_violation(cert.dual_witness, b2, u, lambda) <= 1e-9;
      ex.check(primal != dual);
    });
  }
  out.push_back(t.done());
  out.push_back(ex.done());
  return out;
}

std::vector<PropertyResult> transfers(Rng& rng) {
  Tracker eq("transfers reproduce the optimal choice rule");
  Tracker sign("transfer to R is non-negative iff the agent is below the optimal belief");
  for (int k = 0; k < 100; ++k) {
    const double mu_p = uniform(rng, 0.05, 0.95);
    const double mu = uniform(rng, 0.05, 0.95);
    const double lambda = uniform(rng, 0.2, 5.0);
    guarded(eq, [&] {
      const auto tau = belief_to_transfers(mu, mu_p, lambda);
      const auto u = PayoffMatrix::state_matching(2);
      const auto with_tau = solve_agent_with_action_transfers(RIInstance(Belief::binary(mu), u, lambda), tau);
      const auto best = solve_agent(RIInstance(Belief::binary(optimal_belief_binary(mu_p)), u, lambda));
      eq.measure(max_abs_diff(with_tau.pi.values(), best.pi.values()), 1e-8);
      sign.check((tau.tau[0] >= 0.0) == (mu <= optimal_belief_binary(mu_p)));
    });
  }
  return {eq.done(), sign.done()};
}

std::vector<PropertyResult> outcome_contract(Rng& rng) {
  const double mu_p = 0.7, lambda = 1.0;
  const auto th = contract_thresholds(mu_p, lambda);
  const double mu_star = optimal_belief_binary(mu_p);
  Tracker order("thresholds bracket the optimal and principal beliefs");
  order.check(th.mu_bar_1 < mu_star && mu_star < mu_p && mu_p < th.mu_bar_2);
  Tracker pos("positive payment inside the sufficient intervals");
  for (int k = 0; k < 50; ++k) {
    if (th.first_nonempty) {
      const double mu = uniform(rng, th.learn_lo, th.mu_bar_1);
      if (mu > th.learn_lo && mu < th.mu_bar_1) pos.check(optimal_outcome_contract(mu, mu_p, lambda).tau_high > 0.0);
    }
    if (th.second_nonempty) {
      const double mu = uniform(rng, th.mu_bar_2, th.learn_hi);
      if (mu > th.mu_bar_2 && mu < th.learn_hi) pos.check(optimal_outcome_contract(mu, mu_p, lambda).tau_high > 0.0);
    }
  }
  Tracker aligned("no payment for an aligned agent");
  aligned.check(optimal_outcome_contract(mu_p, mu_p, lambda).tau_high == 0.0);
  return {order.done(), pos.done(), aligned.done()};
}

std::vector<PropertyResult> restriction(Rng& rng) {
  Tracker t("full action set is never beaten by a subset");
  for (int k = 0; k < 60; ++k) {
    const auto mu_p = random_belief(rng, pick(rng, 2, 5));
    const double lambda = uniform(rng, 0.2, 5.0);
    guarded(t, [&] {
      const auto r = optimal_restriction(mu_p, lambda);
      const double best = *std::max_element(r.subset_values.begin() + 1, r.subset_values.end());
      t.check(best <= r.full_value + 1e-10);
    });
  }
  return {t.done()};
}

std::vector<PropertyResult> communication(Rng& rng) {
  Tracker eq("principal follows every recommendation");
  Tracker ob("obedience condition holds on the consideration set");
  for (int k = 0; k < 300; ++k) {
    const auto mu_p = random_belief(rng, pick(rng, 2, 5));
    const double lambda = uniform(rng, 0.2, 5.0);
    guarded(eq, [&] { eq.check(verify_communication_equilibrium(mu_p, lambda)); });
    const auto r = obedience_check(optimal_belief_general(mu_p), lambda);
    ob.check(std::all_of(r.obedient.begin(), r.obedient.end(), [](bool b) { return b; }));
  }
  return {eq.done(), ob.done()};
}

using Suite = std::vector<PropertyResult> (*)(Rng&);

const std::map<std::string, Suite>& suites() {
  static const std::map<std::string, Suite> s = {
      {"agent-kkt", agent_kkt},
      {"agent-oracle", agent_oracle},
      {"relaxed-oracle", relaxed_oracle},
      {"belief-roundtrip", belief_roundtrip},
      {"lambda-invariance", lambda_invariance},
      {"consideration", consideration},
      {"implementability", implementability},
      {"transfers", transfers},
      {"outcome-contract", outcome_contract},
      {"restriction", restriction},
      {"nonimplementable", nonimplementable},
      {"communication", communication},
  };
  return s;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a = {{"lemma1-oracle", "relaxed-oracle"},
                                                       {"prop9", "nonimplementable"}};
  return a;
}

}  // namespace

bool SuiteReport::ok() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.ok(); });
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {
      "agent-kkt",       "agent-oracle",     "relaxed-oracle", "belief-roundtrip",
      "lambda-invariance", "consideration",  "implementability", "transfers",
      "outcome-contract", "restriction",     "nonimplementable", "communication"};
  return names;
}

std::vector<SuiteReport> run_verify(const std::string& name, std::uint64_t seed) {
  std::vector<std::string> todo;
  if (name == "all") {
    todo = verify_suite_names();
  } else if (auto a = aliases().find(name); a != aliases().end()) {
    todo = {a->second};
  } else if (suites().count(name)) {
    todo = {name};
  } else {
    throw InvalidInput("unknown verification suite \"" + name + "\"");
  }
  std::vector<SuiteReport> out;
  for (const auto& s : todo) {
    Rng rng(seed);
    out.push_back(SuiteReport{s, suites().at(s)(rng)});
  }
  return out;
}

}  // namespace ridel
