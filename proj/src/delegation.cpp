#include "ridel/delegation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ridel/errors.hpp"
#include "ridel/implementability.hpp"
#include "ridel/simplex_grid.hpp"

namespace ridel {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be positive and finite");
}

// Shared by the optimal (w = sqrt(mu_p)) and aligned (w = mu) solutions:
// sort w descending, K = largest L with (L + delta) w_L > sum_{j<=L} w_j, then
// beta_i = max(0, ((K + delta) w_i / sum_C w - 1) / delta).
struct Truncation {
  std::vector<double> beta;
  std::size_t K;
};

Truncation truncated_weights(const std::vector<double>& w, double lambda) {
  check_lambda(lambda);
  const double d = delta(lambda);
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });

  std::size_t K = 1;
  double prefix = 0.0, prefix_at_K = w[order[0]];
  for (std::size_t L = 1; L <= w.size(); ++L) {
    prefix += w[order[L - 1]];
    if ((static_cast<double>(L) + d) * w[order[L - 1]] - prefix > 0.0) {
      K = L;
      prefix_at_K = prefix;
    }
  }
  std::vector<double> beta(w.size(), 0.0);
  for (std::size_t r = 0; r < K; ++r) {
    const std::size_t i = order[r];
    beta[i] = std::max(0.0, ((static_cast<double>(K) + d) * w[i] / prefix_at_K - 1.0) / d);
  }
  return {std::move(beta), K};
}

std::vector<double> sqrt_weights(const Belief& mu_p) {
  std::vector<double> w(mu_p.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::sqrt(mu_p[i]);
  return w;
}

}  // namespace

double delta(double lambda) {
  check_lambda(lambda);
  return std::expm1(1.0 / lambda);
}

ChoiceDistribution optimal_unconditional(const Belief& mu_p, double lambda) {
  return ChoiceDistribution(truncated_weights(sqrt_weights(mu_p), lambda).beta);
}

ChoiceDistribution aligned_unconditional(const Belief& mu, double lambda) {
  return ChoiceDistribution(truncated_weights(mu.values(), lambda).beta);
}

double principal_value_statematching(const Belief& mu_p, const ChoiceDistribution& beta, double lambda) {
  if (mu_p.size() != beta.size()) throw InvalidInput("belief and choice distribution dimensions differ");
  const double d = delta(lambda);
  const double e = d + 1.0;
  double v = 0.0;
  for (std::size_t j = 0; j < beta.size(); ++j) v += mu_p[j] * beta[j] * e / (1.0 + d * beta[j]);
  return v;
}

double aligned_value_identity(const Belief& mu_p, const ChoiceDistribution& beta, double lambda) {
  if (mu_p.size() != beta.size()) throw InvalidInput("belief and choice distribution dimensions differ");
  const double d = delta(lambda);
  double mass = 0.0;
  for (std::size_t i : beta.consideration_set()) mass += mu_p[i];
  return (1.0 + d) / (static_cast<double>(beta.consideration_size()) + d) * mass;
}

double optimal_belief_binary(double mu_p_r) {
  if (!(mu_p_r >= 0.0 && mu_p_r <= 1.0)) throw InvalidInput("mu_p must lie in [0, 1]");
  const double a = std::sqrt(mu_p_r);
  const double b = std::sqrt(1.0 - mu_p_r);
  return a / (a + b);
}

Belief optimal_belief_general(const Belief& mu_p) {
  auto w = sqrt_weights(mu_p);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return Belief(std::move(w));
}

ConsiderationSizes consideration_sizes(const Belief& mu_p, double lambda) {
  return {truncated_weights(mu_p.values(), lambda).K, truncated_weights(sqrt_weights(mu_p), lambda).K};
}

std::optional<Belief> invert_beta_to_belief(const ChoiceDistribution& beta, const PayoffMatrix& u, double lambda) {
  check_lambda(lambda);
  if (beta.size() != u.n_actions()) throw InvalidInput("choice distribution and payoff matrix disagree on actions");
  if (!u.is_state_matching()) {
    const auto cert = implementability_check(beta, u, lambda);
    if (!cert.feasible) return std::nullopt;
    return cert.mu;
  }
  const double d = delta(lambda);
  const auto C = beta.consideration_set();
  double mass = 0.0;
  for (std::size_t i : C) mass += beta[i];
  std::vector<double> mu(beta.size(), 0.0);
  for (std::size_t i : C) mu[i] = (1.0 + d * beta[i] / mass) / (static_cast<double>(C.size()) + d);
  Belief out(std::move(mu));

  const auto sol = solve_agent(RIInstance(out, u, lambda));
  double err = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    err = std::max(err, std::abs(sol.beta[i] - (beta.considered(i) ? beta[i] / mass : 0.0)));
  }
  if (err > 1e-8) throw NonConvergence("belief inversion failed its round trip", err, sol.iterations);
  return out;
}

DelegationReport delegation_report(const Belief& mu_p, double lambda, const SolverConfig& cfg) {
  check_lambda(lambda);
  const std::size_t n = mu_p.size();
  const PayoffMatrix u = PayoffMatrix::state_matching(n);
  Belief mu_star = optimal_belief_general(mu_p);
  ChoiceDistribution beta_star = optimal_unconditional(mu_p, lambda);
  const RIInstance at_star(mu_star, u, lambda);
  DecisionRule pi_star = conditional_from_unconditional(beta_star, at_star);

  const auto solved = solve_agent(at_star, cfg);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(solved.beta[i] - beta_star[i]));
  if (err > 1e-8) throw NonConvergence("optimal choice probabilities disagree with the agent's solution", err, solved.iterations);

  const auto aligned = solve_agent(RIInstance(mu_p, u, lambda), cfg);
  const auto sizes = consideration_sizes(mu_p, lambda);
  const double v_opt = principal_value(mu_p, pi_star, u);
  const double v_aligned = principal_value(mu_p, aligned.pi, u);
  const double v_none = *std::max_element(mu_p.values().begin(), mu_p.values().end());
  return DelegationReport{mu_p,      lambda,        std::move(mu_star), std::move(beta_star), std::move(pi_star),
                          sizes.optimal, sizes.aligned, v_opt,           v_aligned,            v_none,
                          err};
}

double principal_value_binary(double mu_agent, double mu_p_r, double lambda) {
  if (!(mu_p_r >= 0.0 && mu_p_r <= 1.0)) throw InvalidInput("mu_p must lie in [0, 1]");
  const auto p = binary_precisions(mu_agent, lambda);
  return mu_p_r * p.p_Rr + (1.0 - mu_p_r) * p.p_Ll;
}

double optimal_delegation_value_binary(double mu_p_r, double lambda) {
  return principal_value_binary(optimal_belief_binary(mu_p_r), mu_p_r, lambda);
}

PandoraDelegation pandora_optimal_agent(double mu_p_r, double c) {
  if (!(mu_p_r >= 0.0 && mu_p_r <= 1.0)) throw InvalidInput("mu_p must lie in [0, 1]");
  if (!(c >= 0.0 && c <= 0.5)) throw InvalidInput("cost must lie in [0, 0.5]");
  return {0.5, c, 1.0 - c};
}

ChoiceDistribution relaxed_grid_optimum(const Belief& mu_p, double lambda, double grid_step) {
  const double d = delta(lambda);
  std::vector<std::function<double(double)>> terms;
  for (std::size_t j = 0; j < mu_p.size(); ++j) {
    const double m = mu_p[j];
    terms.emplace_back([m, d](double b) { return m * b * (1.0 + d) / (1.0 + d * b); });
  }
  return ChoiceDistribution(maximize_separable_on_simplex(terms, grid_divisions(grid_step)));
}

}  // namespace ridel
