#pragma once

// Domain types of the rational-inattention delegation model and the value
// functions evaluated by every other module. Logarithms are natural, so the
// cost parameter lambda is measured in utils per nat.

#include <cstddef>
#include <span>
#include <vector>

namespace ridel {

/// Entries below this unconditional probability are outside the consideration set.
inline constexpr double kDefaultSupportThreshold = 1e-9;

/// Probability vectors within this distance of summing to one are renormalized;
/// larger deviations are rejected.
inline constexpr double kRenormalizeTolerance = 1e-9;

/// A probability distribution over a finite set of states.
class Belief {
 public:
  explicit Belief(std::vector<double> probs);

  static Belief uniform(std::size_t n);
  /// Two-state belief (mu_r, 1 - mu_r); state 0 is "r", state 1 is "l".
  static Belief binary(double mu_r);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t j) const { return p_[j]; }
  std::span<const double> probs() const noexcept { return p_; }
  const std::vector<double>& values() const noexcept { return p_; }

  friend bool operator==(const Belief&, const Belief&) = default;

 private:
  std::vector<double> p_;
};

/// Terminal utilities u(a_i, w_j), stored with actions as rows.
class PayoffMatrix {
 public:
  PayoffMatrix(std::size_t n_actions, std::size_t n_states, std::vector<double> row_major);

  static PayoffMatrix state_matching(std::size_t n);
  static PayoffMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t n_actions() const noexcept { return n_actions_; }
  std::size_t n_states() const noexcept { return n_states_; }
  double operator()(std::size_t action, std::size_t state) const {
    return u_[action * n_states_ + state];
  }
  std::span<const double> row(std::size_t action) const {
    return std::span<const double>(u_).subspan(action * n_states_, n_states_);
  }
  /// True iff the matrix is square with unit diagonal and zero elsewhere.
  bool is_state_matching() const noexcept { return state_matching_; }
  double max_entry() const;

  /// u'(a_i, w) = u(a_i, w) + bonus_i.
  PayoffMatrix with_action_bonus(std::span<const double> bonus) const;
  /// Keeps only the listed action rows, in the given order.
  PayoffMatrix restricted_to(std::span<const std::size_t> actions) const;

  friend bool operator==(const PayoffMatrix&, const PayoffMatrix&) = default;

 private:
  std::size_t n_actions_;
  std::size_t n_states_;
  std::vector<double> u_;
  bool state_matching_;
};

/// Agent prior, payoffs and information-cost parameter.
class RIInstance {
 public:
  RIInstance(Belief mu, PayoffMatrix u, double lambda);

  const Belief& mu() const noexcept { return mu_; }
  const PayoffMatrix& u() const noexcept { return u_; }
  double lambda() const noexcept { return lambda_; }

 private:
  Belief mu_;
  PayoffMatrix u_;
  double lambda_;
};

/// Conditional choice probabilities pi(a_i | w_j); every state column is a
/// distribution over actions.
class DecisionRule {
 public:
  DecisionRule(std::size_t n_actions, std::size_t n_states, std::vector<double> row_major);

  std::size_t n_actions() const noexcept { return n_actions_; }
  std::size_t n_states() const noexcept { return n_states_; }
  double operator()(std::size_t action, std::size_t state) const {
    return pi_[action * n_states_ + state];
  }
  const std::vector<double>& values() const noexcept { return pi_; }

 private:
  std::size_t n_actions_;
  std::size_t n_states_;
  std::vector<double> pi_;
};

/// Unconditional choice probabilities beta(a_i) and the consideration set they induce.
class ChoiceDistribution {
 public:
  explicit ChoiceDistribution(std::vector<double> beta,
                              double support_threshold = kDefaultSupportThreshold);

  std::size_t size() const noexcept { return beta_.size(); }
  double operator[](std::size_t i) const { return beta_[i]; }
  std::span<const double> probs() const noexcept { return beta_; }
  const std::vector<double>& values() const noexcept { return beta_; }
  double support_threshold() const noexcept { return threshold_; }

  bool considered(std::size_t i) const { return beta_[i] > threshold_; }
  std::vector<std::size_t> consideration_set() const;
  std::size_t consideration_size() const;

 private:
  std::vector<double> beta_;
  double threshold_;
};

struct AgentSolution {
  ChoiceDistribution beta;
  DecisionRule pi;
  double gross_value;
  double info_cost;
  double net_value;
  double kkt_residual;
  long iterations = 0;
};

double entropy(const Belief& b);

/// beta(a_i) = sum_j mu_j pi(a_i | w_j).
std::vector<double> unconditional_probabilities(const Belief& mu, const DecisionRule& pi);

double mutual_information(const Belief& mu, const DecisionRule& pi);
double info_cost(const Belief& mu, const DecisionRule& pi, double lambda);

/// Expected payoff under the agent's prior net of the entropy cost.
double agent_value(const RIInstance& inst, const DecisionRule& pi);

/// Expected payoff under the principal's prior; the principal bears no cost.
double principal_value(const Belief& mu_p, const DecisionRule& pi, const PayoffMatrix& u);

/// sum_j mu_j sum_i pi_ij u_ij.
double expected_payoff(const Belief& mu, const DecisionRule& pi, const PayoffMatrix& u);

}  // namespace ridel
