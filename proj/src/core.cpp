#include "ridel/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ridel/errors.hpp"

namespace ridel {

namespace {

// Entries in (-kNegativeSlack, 0) are treated as round-off and clipped.
constexpr double kNegativeSlack = 1e-12;

void normalize_distribution(std::span<double> p, const char* what) {
  if (p.empty()) throw InvalidInput(std::string(what) + ": empty probability vector");
  double sum = 0.0;
  for (double& x : p) {
    if (!std::isfinite(x)) throw InvalidInput(std::string(what) + ": non-finite probability");
    if (x < 0.0) {
      if (x < -kNegativeSlack) throw InvalidInput(std::string(what) + ": negative probability");
      x = 0.0;
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    throw InvalidInput(std::string(what) + ": probabilities sum to " + std::to_string(sum));
  }
  // Already normalized up to round-off: leave the entries untouched so that
  // serialized beliefs read back bit-for-bit.
  if (std::abs(sum - 1.0) <= 1e-14) return;
  for (double& x : p) x /= sum;
}

void check_dims(const Belief& mu, const DecisionRule& pi) {
  if (mu.size() != pi.n_states()) throw InvalidInput("decision rule and belief disagree on the number of states");
}

}  // namespace

Belief::Belief(std::vector<double> probs) : p_(std::move(probs)) {
  normalize_distribution(p_, "Belief");
}

Belief Belief::uniform(std::size_t n) {
  if (n == 0) throw InvalidInput("Belief: empty probability vector");
  return Belief(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Belief Belief::binary(double mu_r) {
  if (!(mu_r >= 0.0 && mu_r <= 1.0)) throw InvalidInput("binary belief outside [0, 1]");
  return Belief({mu_r, 1.0 - mu_r});
}

PayoffMatrix::PayoffMatrix(std::size_t n_actions, std::size_t n_states, std::vector<double> row_major)
    : n_actions_(n_actions), n_states_(n_states), u_(std::move(row_major)) {
  if (n_actions_ == 0 || n_states_ == 0) throw InvalidInput("PayoffMatrix: empty dimension");
  if (u_.size() != n_actions_ * n_states_) throw InvalidInput("PayoffMatrix: size does not match dimensions");
  for (double x : u_) {
    if (!std::isfinite(x)) throw InvalidInput("PayoffMatrix: non-finite utility");
  }
  state_matching_ = n_actions_ == n_states_;
  for (std::size_t i = 0; i < n_actions_ && state_matching_; ++i) {
    for (std::size_t j = 0; j < n_states_; ++j) {
      if ((*this)(i, j) != (i == j ? 1.0 : 0.0)) {
        state_matching_ = false;
        break;
      }
    }
  }
}

PayoffMatrix PayoffMatrix::state_matching(std::size_t n) {
  std::vector<double> u(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) u[i * n + i] = 1.0;
  return PayoffMatrix(n, n, std::move(u));
}

PayoffMatrix PayoffMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidInput("PayoffMatrix: no rows");
  std::vector<double> u;
  const std::size_t m = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != m) throw InvalidInput("PayoffMatrix: ragged rows");
    u.insert(u.end(), r.begin(), r.end());
  }
  return PayoffMatrix(rows.size(), m, std::move(u));
}

double PayoffMatrix::max_entry() const { return *std::max_element(u_.begin(), u_.end()); }

PayoffMatrix PayoffMatrix::with_action_bonus(std::span<const double> bonus) const {
  if (bonus.size() != n_actions_) throw InvalidInput("transfer schedule length differs from the number of actions");
  std::vector<double> u = u_;
  for (std::size_t i = 0; i < n_actions_; ++i) {
    if (!std::isfinite(bonus[i])) throw InvalidInput("non-finite transfer");
    for (std::size_t j = 0; j < n_states_; ++j) u[i * n_states_ + j] += bonus[i];
  }
  return PayoffMatrix(n_actions_, n_states_, std::move(u));
}

PayoffMatrix PayoffMatrix::restricted_to(std::span<const std::size_t> actions) const {
  if (actions.empty()) throw InvalidInput("restriction to an empty action set");
  std::vector<double> u;
  u.reserve(actions.size() * n_states_);
  for (std::size_t a : actions) {
    if (a >= n_actions_) throw InvalidInput("restriction names an unknown action");
    auto r = row(a);
    u.insert(u.end(), r.begin(), r.end());
  }
  return PayoffMatrix(actions.size(), n_states_, std::move(u));
}

RIInstance::RIInstance(Belief mu, PayoffMatrix u, double lambda)
    : mu_(std::move(mu)), u_(std::move(u)), lambda_(lambda) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw InvalidInput("lambda must be positive and finite");
  if (mu_.size() != u_.n_states()) throw InvalidInput("prior and payoff matrix disagree on the number of states");
}

DecisionRule::DecisionRule(std::size_t n_actions, std::size_t n_states, std::vector<double> row_major)
    : n_actions_(n_actions), n_states_(n_states), pi_(std::move(row_major)) {
  if (n_actions_ == 0 || n_states_ == 0) throw InvalidInput("DecisionRule: empty dimension");
  if (pi_.size() != n_actions_ * n_states_) throw InvalidInput("DecisionRule: size does not match dimensions");
  std::vector<double> col(n_actions_);
  for (std::size_t j = 0; j < n_states_; ++j) {
    for (std::size_t i = 0; i < n_actions_; ++i) col[i] = pi_[i * n_states_ + j];
    normalize_distribution(col, "DecisionRule column");
    for (std::size_t i = 0; i < n_actions_; ++i) pi_[i * n_states_ + j] = col[i];
  }
}

ChoiceDistribution::ChoiceDistribution(std::vector<double> beta, double support_threshold)
    : beta_(std::move(beta)), threshold_(support_threshold) {
  if (!(threshold_ > 0.0)) throw InvalidInput("support threshold must be positive");
  normalize_distribution(beta_, "ChoiceDistribution");
}

std::vector<std::size_t> ChoiceDistribution::consideration_set() const {
  std::vector<std::size_t> c;
  for (std::size_t i = 0; i < beta_.size(); ++i) {
    if (considered(i)) c.push_back(i);
  }
  return c;
}

std::size_t ChoiceDistribution::consideration_size() const { return consideration_set().size(); }

double entropy(const Belief& b) {
  double h = 0.0;
  for (double p : b.probs()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<double> unconditional_probabilities(const Belief& mu, const DecisionRule& pi) {
  check_dims(mu, pi);
  std::vector<double> beta(pi.n_actions(), 0.0);
  for (std::size_t i = 0; i < pi.n_actions(); ++i) {
    for (std::size_t j = 0; j < pi.n_states(); ++j) beta[i] += mu[j] * pi(i, j);
  }
  return beta;
}

double mutual_information(const Belief& mu, const DecisionRule& pi) {
  const auto beta = unconditional_probabilities(mu, pi);
  double mi = 0.0;
  for (std::size_t j = 0; j < pi.n_states(); ++j) {
    if (mu[j] == 0.0) continue;
    for (std::size_t i = 0; i < pi.n_actions(); ++i) {
      const double p = pi(i, j);
      if (p > 0.0) mi += mu[j] * p * std::log(p / beta[i]);
    }
  }
  return std::max(mi, 0.0);
}

double info_cost(const Belief& mu, const DecisionRule& pi, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  return lambda * mutual_information(mu, pi);
}

double expected_payoff(const Belief& mu, const DecisionRule& pi, const PayoffMatrix& u) {
  check_dims(mu, pi);
  if (u.n_actions() != pi.n_actions() || u.n_states() != pi.n_states()) {
    throw InvalidInput("decision rule and payoff matrix dimensions differ");
  }
  double v = 0.0;
  for (std::size_t j = 0; j < pi.n_states(); ++j) {
    for (std::size_t i = 0; i < pi.n_actions(); ++i) v += mu[j] * pi(i, j) * u(i, j);
  }
  return v;
}

double agent_value(const RIInstance& inst, const DecisionRule& pi) {
  return expected_payoff(inst.mu(), pi, inst.u()) - info_cost(inst.mu(), pi, inst.lambda());
}

double principal_value(const Belief& mu_p, const DecisionRule& pi, const PayoffMatrix& u) {
  return expected_payoff(mu_p, pi, u);
}

}  // namespace ridel
