#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ridel/agent_solver.hpp"
#include "ridel/core.hpp"
#include "ridel/errors.hpp"

using namespace ridel;

namespace {

const double kE = std::exp(1.0);

DecisionRule identity_rule(std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  return DecisionRule(n, n, v);
}

DecisionRule symmetric_binary_rule(double p) { return DecisionRule(2, 2, {p, 1 - p, 1 - p, p}); }

}  // namespace

TEST(Belief, RejectsInvalidProbabilities) {
  EXPECT_THROW(Belief({0.5, 0.6}), InvalidInput);
  EXPECT_THROW(Belief({1.2, -0.2}), InvalidInput);
  EXPECT_THROW(Belief({NAN, 1.0}), InvalidInput);
  EXPECT_THROW(Belief(std::vector<double>{}), InvalidInput);
}

TEST(Belief, RenormalizesRoundOff) {
  const Belief b({0.3 + 5e-10, 0.7});
  EXPECT_NEAR(b[0] + b[1], 1.0, 1e-15);
  const Belief c({1.0, -1e-13});
  EXPECT_EQ(c[1], 0.0);
}

TEST(PayoffMatrix, DetectsStateMatching) {
  EXPECT_TRUE(PayoffMatrix::state_matching(3).is_state_matching());
  EXPECT_TRUE(PayoffMatrix::from_rows({{1, 0}, {0, 1}}).is_state_matching());
  EXPECT_FALSE(PayoffMatrix::from_rows({{1, 0}, {0, 2}}).is_state_matching());
  EXPECT_FALSE(PayoffMatrix::from_rows({{1, 0, 0}, {0, 1, 0}}).is_state_matching());
  EXPECT_THROW(PayoffMatrix::from_rows({{1, INFINITY}, {0, 1}}), InvalidInput);
}

TEST(RIInstance, RequiresPositiveLambda) {
  EXPECT_THROW(RIInstance(Belief::uniform(2), PayoffMatrix::state_matching(2), 0.0), InvalidInput);
  EXPECT_THROW(RIInstance(Belief::uniform(3), PayoffMatrix::state_matching(2), 1.0), InvalidInput);
}

TEST(ChoiceDistribution, ConsiderationSet) {
  const ChoiceDistribution b({0.6, 0.4, 0.0});
  EXPECT_EQ(b.consideration_size(), 2u);
  EXPECT_EQ(b.consideration_set(), (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(ChoiceDistribution({0.0, 0.0}), InvalidInput);
}

TEST(Entropy, KnownValues) {
  EXPECT_DOUBLE_EQ(entropy(Belief({1.0, 0.0})), 0.0);
  EXPECT_NEAR(entropy(Belief({0.5, 0.5})), std::log(2.0), 1e-15);
  EXPECT_NEAR(entropy(Belief({0.7, 0.3})), 0.6108643020548935, 1e-12);
}

TEST(MutualInformation, FullyRevealingAndUninformative) {
  EXPECT_NEAR(mutual_information(Belief::uniform(2), identity_rule(2)), std::log(2.0), 1e-15);
  const DecisionRule flat(2, 3, {0.3, 0.3, 0.3, 0.7, 0.7, 0.7});
  EXPECT_NEAR(mutual_information(Belief({0.2, 0.5, 0.3}), flat), 0.0, 1e-15);
}

TEST(MutualInformation, SymmetricLogitRule) {
  // Value from the independent oracle script (direct evaluation).
  const double p = kE / (kE + 1.0);
  EXPECT_NEAR(mutual_information(Belief::uniform(2), symmetric_binary_rule(p)), 0.11094407167172735, 1e-12);
}

TEST(MutualInformation, DimensionMismatchThrows) {
  EXPECT_THROW(mutual_information(Belief::uniform(3), identity_rule(2)), InvalidInput);
}

TEST(InfoCost, LinearInLambda) {
  const auto mu = Belief({0.4, 0.6});
  const auto pi = symmetric_binary_rule(0.8);
  EXPECT_NEAR(info_cost(mu, pi, 2.0), 2.0 * info_cost(mu, pi, 1.0), 1e-15);
  EXPECT_NEAR(info_cost(Belief::uniform(2), identity_rule(2), 1.0), 0.693147180559945, 1e-12);
  EXPECT_THROW(info_cost(mu, pi, 0.0), InvalidInput);
}

TEST(AgentValue, UninformativeRuleOnFirstAction) {
  const RIInstance inst(Belief({0.5, 0.3, 0.2}), PayoffMatrix::state_matching(3), 1.0);
  const DecisionRule first(3, 3, {1, 1, 1, 0, 0, 0, 0, 0, 0});
  EXPECT_NEAR(agent_value(inst, first), 0.5, 1e-15);
}

TEST(AgentValue, SymmetricOptimum) {
  const RIInstance inst(Belief::uniform(2), PayoffMatrix::state_matching(2), 1.0);
  const double v = agent_value(inst, symmetric_binary_rule(kE / (kE + 1.0)));
  EXPECT_NEAR(v, 0.6201145069582774, 1e-12);
  EXPECT_NEAR(v, std::log((kE + 1.0) / 2.0), 1e-12);
}

TEST(AgentValue, LargeLambdaApproachesNoLearning) {
  const Belief mu({0.2, 0.5, 0.3});
  const RIInstance inst(mu, PayoffMatrix::state_matching(3), 1e4);
  EXPECT_NEAR(solve_agent(inst).net_value, 0.5, 1e-3);
}

TEST(PrincipalValue, Benchmarks) {
  const auto u = PayoffMatrix::state_matching(2);
  EXPECT_NEAR(principal_value(Belief({0.7, 0.3}), identity_rule(2), u), 1.0, 1e-15);
  const DecisionRule first(2, 2, {1, 1, 0, 0});
  EXPECT_NEAR(principal_value(Belief({0.7, 0.3}), first, u), 0.7, 1e-15);
}

TEST(CoreProperties, InformationBoundsOnRandomRules) {
  oracle::Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    const std::size_t na = oracle::pick(rng, 1, 5), ns = oracle::pick(rng, 1, 5);
    std::vector<double> v(na * ns);
    for (std::size_t j = 0; j < ns; ++j) {
      const auto col = oracle::dirichlet(rng, na);
      for (std::size_t i = 0; i < na; ++i) v[i * ns + j] = col[i];
    }
    const DecisionRule pi(na, ns, v);
    const auto mu_v = oracle::dirichlet(rng, ns);
    const Belief mu(mu_v);
    const double mi = mutual_information(mu, pi);
    EXPECT_GE(mi, 0.0);
    EXPECT_LE(mi, std::min(oracle::entropy(mu_v), std::log(static_cast<double>(na))) + 1e-12);
  }
}

TEST(CoreProperties, PrincipalValueBoundedByMaxPayoff) {
  oracle::Rng rng(12);
  for (int k = 0; k < 200; ++k) {
    const std::size_t na = oracle::pick(rng, 2, 4), ns = oracle::pick(rng, 2, 4);
    std::vector<double> u(na * ns), v(na * ns);
    for (double& x : u) x = oracle::uniform(rng, -2.0, 3.0);
    for (std::size_t j = 0; j < ns; ++j) {
      const auto col = oracle::dirichlet(rng, na);
      for (std::size_t i = 0; i < na; ++i) v[i * ns + j] = col[i];
    }
    const PayoffMatrix pm(na, ns, u);
    EXPECT_LE(principal_value(Belief(oracle::dirichlet(rng, ns)), DecisionRule(na, ns, v), pm),
              pm.max_entry() + 1e-12);
  }
}

TEST(CoreProperties, AgentValueInvariantUnderRelabeling) {
  oracle::Rng rng(13);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = oracle::pick(rng, 2, 4);
    std::vector<double> u(n * n), v(n * n);
    for (double& x : u) x = oracle::uniform(rng, 0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      const auto col = oracle::dirichlet(rng, n);
      for (std::size_t i = 0; i < n; ++i) v[i * n + j] = col[i];
    }
    const auto mu = oracle::dirichlet(rng, n);
    std::vector<std::size_t> s(n), a(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = a[i] = i;
    std::shuffle(s.begin(), s.end(), rng);
    std::shuffle(a.begin(), a.end(), rng);
    std::vector<double> u2(n * n), v2(n * n), mu2(n);
    for (std::size_t i = 0; i < n; ++i) {
      mu2[s[i]] = mu[i];
      for (std::size_t j = 0; j < n; ++j) {
        u2[a[i] * n + s[j]] = u[i * n + j];
        v2[a[i] * n + s[j]] = v[i * n + j];
      }
    }
    const double lambda = oracle::uniform(rng, 0.2, 5.0);
    const double v1 = agent_value(RIInstance(Belief(mu), PayoffMatrix(n, n, u), lambda), DecisionRule(n, n, v));
    const double vr = agent_value(RIInstance(Belief(mu2), PayoffMatrix(n, n, u2), lambda), DecisionRule(n, n, v2));
    EXPECT_NEAR(v1, vr, 1e-12);
  }
}
