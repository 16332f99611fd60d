#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ridel/agent_solver.hpp"
#include "ridel/errors.hpp"

using namespace ridel;

namespace {

const double kE = std::exp(1.0);

RIInstance binary(double mu, double lambda) {
  return RIInstance(Belief::binary(mu), PayoffMatrix::state_matching(2), lambda);
}

RIInstance random_instance(oracle::Rng& rng, std::size_t max_n) {
  const std::size_t ns = oracle::pick(rng, 2, max_n);
  const bool matching = oracle::pick(rng, 0, 1) == 0;
  const std::size_t na = matching ? ns : oracle::pick(rng, 2, max_n);
  const double lambda = oracle::uniform(rng, 0.2, 5.0);
  const Belief mu(oracle::dirichlet(rng, ns));
  if (matching) return RIInstance(mu, PayoffMatrix::state_matching(ns), lambda);
  std::vector<double> u(na * ns);
  for (double& x : u) x = oracle::uniform(rng, 0.0, 1.0);
  return RIInstance(mu, PayoffMatrix(na, ns, u), lambda);
}

}  // namespace

TEST(ConditionalFromUnconditional, UniformBinary) {
  const auto pi = conditional_from_unconditional(ChoiceDistribution({0.5, 0.5}), binary(0.5, 1.0));
  EXPECT_NEAR(pi(0, 0), 0.7310585786300049, 1e-12);
  EXPECT_NEAR(pi(1, 1), 0.7310585786300049, 1e-12);
}

TEST(ConditionalFromUnconditional, DegenerateBetaPicksFirstAction) {
  const RIInstance inst(Belief::uniform(3), PayoffMatrix::state_matching(3), 1.0);
  const auto pi = conditional_from_unconditional(ChoiceDistribution({1.0, 0.0, 0.0}), inst);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(pi(0, j), 1.0);
}

TEST(ConditionalFromUnconditional, LargeLambdaFlattens) {
  const RIInstance inst(Belief::uniform(3), PayoffMatrix::state_matching(3), 1e9);
  const auto pi = conditional_from_unconditional(ChoiceDistribution({0.2, 0.3, 0.5}), inst);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(pi(2, j), 0.5, 1e-8);
}

TEST(ConditionalFromUnconditional, SmallLambdaStaysFinite) {
  const auto pi = conditional_from_unconditional(ChoiceDistribution({0.5, 0.5}), binary(0.5, 1e-3));
  EXPECT_NEAR(pi(0, 0), 1.0, 1e-12);
}

TEST(SolveAgent, SymmetricBinary) {
  const auto s = solve_agent(binary(0.5, 1.0));
  EXPECT_NEAR(s.beta[0], 0.5, 1e-12);
  EXPECT_NEAR(s.pi(0, 0), 0.7310585786300049, 1e-10);
  EXPECT_NEAR(s.net_value, s.gross_value - s.info_cost, 1e-10);
}

TEST(SolveAgent, ConfidentAgentDoesNotLearn) {
  const auto s = solve_agent(binary(0.9, 1.0));
  EXPECT_NEAR(s.beta[0], 1.0, 1e-12);
  EXPECT_EQ(s.beta[1], 0.0);
  EXPECT_NEAR(s.info_cost, 0.0, 1e-14);
}

TEST(SolveAgent, UniformThreeStates) {
  const auto s = solve_agent(RIInstance(Belief::uniform(3), PayoffMatrix::state_matching(3), 1.0));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s.beta[i], 1.0 / 3.0, 1e-12);
}

TEST(SolveAgent, ZeroMassStatesAreDropped) {
  const RIInstance inst(Belief({0.6, 0.4, 0.0}), PayoffMatrix::state_matching(3), 1.0);
  const auto s = solve_agent(inst);
  EXPECT_EQ(s.beta[2], 0.0);
  EXPECT_LE(s.kkt_residual, 1e-10);
}

TEST(SolveAgent, ThrowsWhenIterationsRunOut) {
  SolverConfig cfg;
  cfg.max_iters = 1;
  try {
    solve_agent(binary(0.6, 1.0), cfg);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_GT(e.residual(), 0.0);
    EXPECT_EQ(e.iterations(), 1);
  }
}

TEST(SolveAgent, PlainFixedPointAlsoCertifies) {
  SolverConfig cfg;
  cfg.newton_polish = false;
  const RIInstance inst(Belief({0.5, 0.3, 0.2}), PayoffMatrix::state_matching(3), 1.0);
  const auto s = solve_agent(inst, cfg);
  EXPECT_LE(optimality_residual(s.beta, inst), cfg.fp_tolerance);
}

TEST(SolveAgent, BoundaryActionConverges) {
  // mu / (1 - mu) = e: the second action sits exactly on the edge of the consideration set.
  const double mu = kE / (1.0 + kE);
  const auto s = solve_agent(binary(mu, 1.0));
  EXPECT_LE(s.kkt_residual, 1e-10);
  EXPECT_NEAR(s.beta[0], 1.0, 1e-6);
}

TEST(OptimalityResidual, ZeroAtSymmetricPointPositiveAfterPerturbation) {
  const RIInstance inst(Belief::uniform(3), PayoffMatrix::state_matching(3), 1.0);
  EXPECT_NEAR(optimality_residual(ChoiceDistribution({1 / 3.0, 1 / 3.0, 1 / 3.0}), inst), 0.0, 1e-15);
  const RIInstance skew(Belief({0.5, 0.3, 0.2}), PayoffMatrix::state_matching(3), 1.0);
  auto b = solve_agent(skew).beta.values();
  b[0] += 0.01;
  for (double& x : b) x /= 1.01;
  EXPECT_GT(optimality_residual(ChoiceDistribution(b), skew), 1e-3);
}

TEST(BruteForce, SymmetricBinary) {
  const auto s = brute_force_agent(binary(0.5, 1.0), 0.001);
  EXPECT_GE(s.beta[0], 0.499);
  EXPECT_LE(s.beta[0], 0.501);
}

TEST(BruteForce, MatchesSolverBinary) {
  const auto inst = binary(0.6, 1.0);
  EXPECT_NEAR(brute_force_agent(inst, 0.001).net_value, solve_agent(inst).net_value, 1e-4);
}

TEST(BruteForce, MatchesSolverThreeStates) {
  const RIInstance inst(Belief::uniform(3), PayoffMatrix::state_matching(3), 1.0);
  EXPECT_NEAR(brute_force_agent(inst, 0.01).net_value, solve_agent(inst).net_value, 1e-3);
}

TEST(BruteForce, RejectsHugeGrids) {
  const RIInstance inst(Belief::uniform(5), PayoffMatrix::state_matching(5), 1.0);
  EXPECT_THROW(brute_force_agent(inst, 0.001, 1000), InvalidInput);
  EXPECT_THROW(brute_force_agent(inst, 0.7), InvalidInput);
}

TEST(BinaryPrecisions, KnownValues) {
  auto p = binary_precisions(0.5, 1.0);
  EXPECT_NEAR(p.p_Rr, 0.7310585786300049, 1e-12);
  EXPECT_NEAR(p.p_Ll, 0.7310585786300049, 1e-12);
  EXPECT_TRUE(p.interior);
  p = binary_precisions(0.6, 1.0);
  EXPECT_NEAR(p.p_Rr, 0.872878, 1e-6);
  EXPECT_NEAR(p.p_Ll, 0.518329, 1e-6);
  p = binary_precisions(0.9, 1.0);
  EXPECT_EQ(p.p_Rr, 1.0);
  EXPECT_EQ(p.p_Ll, 0.0);
  EXPECT_FALSE(p.interior);
}

TEST(BinaryPrecisions, DegenerateBeliefs) {
  const auto p = binary_precisions(0.0, 1.0);
  EXPECT_EQ(p.p_Rr, 0.0);
  EXPECT_EQ(p.p_Ll, 1.0);
  EXPECT_FALSE(p.interior);
  EXPECT_THROW(binary_precisions(1.1, 1.0), InvalidInput);
  EXPECT_THROW(binary_precisions(0.5, -1.0), InvalidInput);
}

TEST(BinaryPrecisions, SymmetryAndMonotonicity) {
  for (double lambda : {0.3, 1.0, 3.0}) {
    double prev_r = -1.0, prev_l = 2.0;
    for (int k = 1; k < 1000; ++k) {
      const double mu = k / 1000.0;
      const auto p = binary_precisions(mu, lambda);
      const auto q = binary_precisions(1.0 - mu, lambda);
      EXPECT_NEAR(p.p_Rr, q.p_Ll, 1e-12);
      EXPECT_GE(p.p_Rr, prev_r - 1e-15);
      EXPECT_LE(p.p_Ll, prev_l + 1e-15);
      prev_r = p.p_Rr;
      prev_l = p.p_Ll;
    }
  }
}

TEST(BinaryPrecisions, AgreeWithSolver) {
  oracle::Rng rng(21);
  for (int k = 0; k < 200; ++k) {
    const double mu = oracle::uniform(rng, 0.01, 0.99);
    const double lambda = oracle::uniform(rng, 0.2, 5.0);
    const auto p = binary_precisions(mu, lambda);
    if (!p.interior) continue;
    const auto s = solve_agent(binary(mu, lambda));
    EXPECT_NEAR(s.pi(0, 0), p.p_Rr, 1e-8);
    EXPECT_NEAR(s.pi(1, 1), p.p_Ll, 1e-8);
  }
}

TEST(PandoraWtp, Values) {
  EXPECT_NEAR(pandora_wtp(0.5, 0.2), 0.3, 1e-15);
  EXPECT_NEAR(pandora_wtp(1.0, 0.3), -0.3, 1e-15);
  EXPECT_NEAR(pandora_wtp(0.8, 0.1), 0.1, 1e-12);
  EXPECT_THROW(pandora_wtp(0.5, -0.1), InvalidInput);
}

TEST(SolverProperties, ResidualCertificateOnRandomInstances) {
  oracle::Rng rng(22);
  for (int k = 0; k < 300; ++k) {
    const auto inst = random_instance(rng, 5);
    const auto s = solve_agent(inst);
    EXPECT_LE(optimality_residual(s.beta, inst), 1e-10);
    EXPECT_GE(s.info_cost, 0.0);
    EXPECT_NEAR(s.net_value, s.gross_value - s.info_cost, 1e-10);
  }
}

TEST(SolverProperties, MatchesGridSearch) {
  oracle::Rng rng(23);
  const double step = 0.005;
  for (int k = 0; k < 40; ++k) {
    const auto inst = random_instance(rng, 3);
    const double gap = solve_agent(inst).net_value - brute_force_agent(inst, step).net_value;
    EXPECT_GE(gap, -1e-10);
    EXPECT_LE(gap, 5 * step);
  }
}

TEST(SolverProperties, InformationFallsWithLambda) {
  oracle::Rng rng(24);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = oracle::pick(rng, 2, 4);
    const Belief mu(oracle::dirichlet(rng, n, 0.1));
    double prev = INFINITY;
    for (double lambda = 0.1; lambda <= 5.0; lambda *= 1.25) {
      const RIInstance inst(mu, PayoffMatrix::state_matching(n), lambda);
      const auto s = solve_agent(inst);
      const double mi = mutual_information(mu, s.pi);
      EXPECT_LE(mi, prev + 1e-9);
      prev = mi;
    }
  }
}
