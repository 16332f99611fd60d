#include "ridel/agent_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "ridel/errors.hpp"
#include "ridel/simplex_grid.hpp"

namespace ridel {

namespace {

// The instance with zero-mass states removed and each state column of
// e^{u/lambda} divided by its largest entry. D_i is unchanged by either step.
struct Reduced {
  Eigen::VectorXd mu;
  Eigen::MatrixXd E;  // actions x kept states
};

Reduced reduce(const RIInstance& inst) {
  const auto& u = inst.u();
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < u.n_states(); ++j) {
    if (inst.mu()[j] > 0.0) kept.push_back(j);
  }
  Reduced r{Eigen::VectorXd(kept.size()), Eigen::MatrixXd(u.n_actions(), kept.size())};
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const std::size_t j = kept[c];
    r.mu[c] = inst.mu()[j];
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.n_actions(); ++i) m = std::max(m, u(i, j));
    for (std::size_t i = 0; i < u.n_actions(); ++i) r.E(i, c) = std::exp((u(i, j) - m) / inst.lambda());
  }
  return r;
}

// D_i = sum_j mu_j E_ij / Z_j with Z = E^T beta.
Eigen::VectorXd marginal_gains(const Reduced& r, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd z = r.E.transpose() * beta;
  Eigen::VectorXd w(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    w[j] = z[j] > 0.0 ? r.mu[j] / z[j] : std::numeric_limits<double>::infinity();
  }
  return r.E * w;
}

double residual_of(const Eigen::VectorXd& beta, const Eigen::VectorXd& d, double threshold) {
  double res = 0.0;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const double v = beta[i] > threshold ? std::abs(d[i] - 1.0) : std::max(0.0, d[i] - 1.0);
    if (std::isnan(v)) return std::numeric_limits<double>::infinity();
    res = std::max(res, v);
  }
  return res;
}

// Newton's method for max sum_j mu_j ln Z_j over the simplex face spanned by
// `support`. Returns the full-length beta on success.
std::optional<Eigen::VectorXd> newton_on_support(const Reduced& r, const Eigen::VectorXd& start,
                                                 const std::vector<Eigen::Index>& support,
                                                 const SolverConfig& cfg) {
  const Eigen::Index s = static_cast<Eigen::Index>(support.size());
  const Eigen::Index m = r.E.cols();
  Eigen::MatrixXd Es(s, m);
  Eigen::VectorXd b(s);
  for (Eigen::Index k = 0; k < s; ++k) {
    Es.row(k) = r.E.row(support[k]);
    b[k] = std::max(start[support[k]], 1e-12);
  }
  b /= b.sum();

  Eigen::MatrixXd kkt(s + 1, s + 1);
  Eigen::VectorXd rhs(s + 1);
  bool converged = false;
  for (int it = 0; it < 60; ++it) {
    const Eigen::VectorXd z = Es.transpose() * b;
    if ((z.array() <= 0.0).any()) return std::nullopt;
    const Eigen::VectorXd w = r.mu.cwiseQuotient(z);
    const Eigen::VectorXd g = Es * w;
    if ((g.array() - 1.0).abs().maxCoeff() <= 1e-14) {
      converged = true;
      break;
    }
    const Eigen::VectorXd root = (r.mu.array().sqrt() / z.array()).matrix();
    const Eigen::MatrixXd scaled = Es * root.asDiagonal();
    kkt.setZero();
    kkt.topLeftCorner(s, s) = -scaled * scaled.transpose();
    kkt.block(0, s, s, 1).setConstant(-1.0);
    kkt.block(s, 0, 1, s).setConstant(1.0);
    rhs.head(s) = -g;
    rhs[s] = 0.0;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    const Eigen::VectorXd d = sol.head(s);
    if (!d.allFinite()) return std::nullopt;
    double alpha = 1.0;
    for (Eigen::Index k = 0; k < s; ++k) {
      if (d[k] < 0.0) alpha = std::min(alpha, 0.99 * b[k] / -d[k]);
    }
    b += alpha * d;
    b /= b.sum();
    if (alpha * d.cwiseAbs().maxCoeff() <= 1e-16) {
      converged = true;
      break;
    }
  }
  if (!converged || b.minCoeff() <= cfg.prune_threshold) return std::nullopt;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(r.E.rows());
  for (Eigen::Index k = 0; k < s; ++k) full[support[k]] = b[k];
  return full;
}

Eigen::VectorXd pruned(const Eigen::VectorXd& beta, double threshold) {
  Eigen::VectorXd p = (beta.array() < threshold).select(0.0, beta);
  return p / p.sum();
}

AgentSolution package(const RIInstance& inst, const Eigen::VectorXd& beta, double residual, long iters,
                      double threshold) {
  ChoiceDistribution cd(std::vector<double>(beta.data(), beta.data() + beta.size()), threshold);
  DecisionRule pi = conditional_from_unconditional(cd, inst);
  const double gross = expected_payoff(inst.mu(), pi, inst.u());
  const double cost = info_cost(inst.mu(), pi, inst.lambda());
  return AgentSolution{std::move(cd), std::move(pi), gross, cost, gross - cost, residual, iters};
}

}  // namespace

DecisionRule conditional_from_unconditional(const ChoiceDistribution& beta, const RIInstance& inst) {
  const auto& u = inst.u();
  if (beta.size() != u.n_actions()) throw InvalidInput("choice distribution and payoff matrix disagree on actions");
  const std::size_t na = u.n_actions();
  const std::size_t ns = u.n_states();
  std::vector<double> pi(na * ns, 0.0);
  for (std::size_t j = 0; j < ns; ++j) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < na; ++i) {
      if (beta[i] > 0.0) m = std::max(m, u(i, j));
    }
    double z = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
      if (beta[i] > 0.0) {
        pi[i * ns + j] = beta[i] * std::exp((u(i, j) - m) / inst.lambda());
        z += pi[i * ns + j];
      }
    }
    for (std::size_t i = 0; i < na; ++i) pi[i * ns + j] /= z;
  }
  return DecisionRule(na, ns, std::move(pi));
}

double optimality_residual(const ChoiceDistribution& beta, const RIInstance& inst) {
  const auto& u = inst.u();
  if (beta.size() != u.n_actions()) throw InvalidInput("choice distribution and payoff matrix disagree on actions");
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(u.n_actions()));
  for (std::size_t j = 0; j < u.n_states(); ++j) {
    const double mu = inst.mu()[j];
    if (mu == 0.0) continue;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.n_actions(); ++i) {
      if (beta[i] > 0.0) m = std::max(m, u(i, j));
    }
    double z = 0.0;
    for (std::size_t i = 0; i < u.n_actions(); ++i) z += beta[i] * std::exp((u(i, j) - m) / inst.lambda());
    for (std::size_t i = 0; i < u.n_actions(); ++i) {
      d[static_cast<Eigen::Index>(i)] += mu * std::exp((u(i, j) - m) / inst.lambda()) / z;
    }
  }
  Eigen::Map<const Eigen::VectorXd> b(beta.values().data(), static_cast<Eigen::Index>(beta.size()));
  return residual_of(b, d, beta.support_threshold());
}

AgentSolution solve_agent(const RIInstance& inst, const SolverConfig& cfg) {
  if (cfg.max_iters < 1) throw InvalidInput("max_iters must be at least 1");
  if (!(cfg.fp_tolerance > 0.0)) throw InvalidInput("fp_tolerance must be positive");
  if (!(cfg.prune_threshold > 0.0)) throw InvalidInput("prune_threshold must be positive");

  const Reduced r = reduce(inst);
  const Eigen::Index n = r.E.rows();
  Eigen::VectorXd beta = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));

  // Accepts beta if it still certifies after pruning.
  auto accept = [&](const Eigen::VectorXd& candidate) -> std::optional<Eigen::VectorXd> {
    const Eigen::VectorXd p = pruned(candidate, cfg.prune_threshold);
    if (residual_of(p, marginal_gains(r, p), cfg.prune_threshold) <= cfg.fp_tolerance) return p;
    return std::nullopt;
  };

  long next_polish = 16;
  double res = std::numeric_limits<double>::infinity();
  for (long it = 0; it < cfg.max_iters; ++it) {
    const Eigen::VectorXd d = marginal_gains(r, beta);
    res = residual_of(beta, d, cfg.prune_threshold);
    if (res <= cfg.fp_tolerance) {
      if (auto p = accept(beta)) {
        return package(inst, *p, residual_of(*p, marginal_gains(r, *p), cfg.prune_threshold), it,
                       cfg.prune_threshold);
      }
    }
    if (cfg.newton_polish && it == next_polish) {
      next_polish *= 2;
      std::vector<std::vector<Eigen::Index>> candidates;
      auto add = [&](auto&& pred) {
        std::vector<Eigen::Index> s;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (pred(i)) s.push_back(i);
        }
        if (!s.empty() && std::find(candidates.begin(), candidates.end(), s) == candidates.end()) {
          candidates.push_back(std::move(s));
        }
      };
      add([&](Eigen::Index i) { return beta[i] > 1e-8; });
      for (double t : {1e-2, 1e-4, 1e-6}) add([&](Eigen::Index i) { return d[i] > 1.0 - t; });
      for (const auto& s : candidates) {
        auto polished = newton_on_support(r, beta, s, cfg);
        if (!polished) continue;
        if (auto p = accept(*polished)) {
          return package(inst, *p, residual_of(*p, marginal_gains(r, *p), cfg.prune_threshold), it,
                         cfg.prune_threshold);
        }
      }
    }
    beta = beta.cwiseProduct(d);
    beta /= beta.sum();
  }
  throw NonConvergence("agent fixed point did not converge: residual " + std::to_string(res) + " after " +
                           std::to_string(cfg.max_iters) + " iterations",
                       res, cfg.max_iters);
}

AgentSolution brute_force_agent(const RIInstance& inst, double grid_step, std::size_t max_grid_points) {
  if (!(grid_step > 0.0 && grid_step < 0.5)) throw InvalidInput("grid step must lie in (0, 0.5)");
  const std::size_t na = inst.u().n_actions();
  const std::size_t ns = inst.u().n_states();
  const std::size_t divisions = grid_divisions(grid_step);
  if (simplex_grid_size(na, divisions) > max_grid_points) throw InvalidInput("simplex grid too large");

  const double lambda = inst.lambda();
  std::vector<double> ex(na * ns);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < na; ++k) m = std::max(m, inst.u()(k, j));
      ex[i * ns + j] = std::exp((inst.u()(i, j) - m) / lambda);
    }
  }

  std::vector<double> pi(na * ns), marg(na);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_beta;
  for_each_simplex_point(na, divisions, [&](const std::vector<double>& b) {
    std::fill(marg.begin(), marg.end(), 0.0);
    double gross = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < na; ++i) z += b[i] * ex[i * ns + j];
      if (z <= 0.0) {
        // Every action with mass underflows in this state: fall back to the exact rule.
        const DecisionRule exact = conditional_from_unconditional(ChoiceDistribution(b), inst);
        for (std::size_t i = 0; i < na; ++i) pi[i * ns + j] = exact(i, j);
      } else {
        for (std::size_t i = 0; i < na; ++i) pi[i * ns + j] = b[i] * ex[i * ns + j] / z;
      }
      for (std::size_t i = 0; i < na; ++i) {
        marg[i] += inst.mu()[j] * pi[i * ns + j];
        gross += inst.mu()[j] * pi[i * ns + j] * inst.u()(i, j);
      }
    }
    double mi = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      for (std::size_t i = 0; i < na; ++i) {
        const double p = pi[i * ns + j];
        if (p > 0.0 && inst.mu()[j] > 0.0) mi += inst.mu()[j] * p * std::log(p / marg[i]);
      }
    }
    const double v = gross - lambda * std::max(mi, 0.0);
    if (v > best) {
      best = v;
      best_beta = b;
    }
  });
  ChoiceDistribution cd(best_beta);
  const double residual = optimality_residual(cd, inst);
  DecisionRule rule = conditional_from_unconditional(cd, inst);
  const double gross = expected_payoff(inst.mu(), rule, inst.u());
  const double cost = info_cost(inst.mu(), rule, lambda);
  return AgentSolution{std::move(cd), std::move(rule), gross, cost, gross - cost, residual, 0};
}

BinaryPrecisions binary_precisions(double mu_r, double lambda) {
  if (!(mu_r >= 0.0 && mu_r <= 1.0)) throw InvalidInput("mu_r must lie in [0, 1]");
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  if (mu_r == 0.0) return {0.0, 1.0, false};
  if (mu_r == 1.0) return {1.0, 0.0, false};
  // With x = e^{-1/lambda}: pi(R|r) = (1 - x (1-mu)/mu) / (1 - x^2), which stays
  // finite for small lambda.
  const double x = std::exp(-1.0 / lambda);
  const double odds = (1.0 - mu_r) / mu_r;
  const double denom = 1.0 - x * x;
  const double p_rr = std::clamp((1.0 - x * odds) / denom, 0.0, 1.0);
  const double p_ll = std::clamp((1.0 - x / odds) / denom, 0.0, 1.0);
  const bool interior = p_rr > 0.0 && p_rr < 1.0 && p_ll > 0.0 && p_ll < 1.0;
  return {p_rr, p_ll, interior};
}

double pandora_wtp(double mu_r, double c) {
  if (!(mu_r >= 0.0 && mu_r <= 1.0)) throw InvalidInput("mu_r must lie in [0, 1]");
  if (!(c >= 0.0)) throw InvalidInput("information cost must be non-negative");
  return (1.0 - c) - std::max(mu_r, 1.0 - mu_r);
}

}  // namespace ridel
