#include "ridel/implementability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ridel/errors.hpp"
#include "ridel/linear_feasibility.hpp"

namespace ridel {

namespace {

Eigen::MatrixXd column_scaled_exp(const PayoffMatrix& u, double lambda) {
  Eigen::MatrixXd E(u.n_actions(), u.n_states());
  for (std::size_t j = 0; j < u.n_states(); ++j) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.n_actions(); ++i) m = std::max(m, u(i, j));
    for (std::size_t i = 0; i < u.n_actions(); ++i) E(i, j) = std::exp((u(i, j) - m) / lambda);
  }
  return E;
}

void check_inputs(const ChoiceDistribution& beta, const PayoffMatrix& u, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  if (beta.size() != u.n_actions()) throw InvalidInput("choice distribution and payoff matrix disagree on actions");
}

}  // namespace

FeasibilityCertificate implementability_check(const ChoiceDistribution& beta, const PayoffMatrix& u,
                                              double lambda) {
  check_inputs(beta, u, lambda);
  const Eigen::Index na = static_cast<Eigen::Index>(u.n_actions());
  const Eigen::Index ns = static_cast<Eigen::Index>(u.n_states());
  const Eigen::MatrixXd E = column_scaled_exp(u, lambda);
  Eigen::VectorXd b_in(na);
  for (Eigen::Index i = 0; i < na; ++i) b_in[i] = beta.considered(static_cast<std::size_t>(i)) ? beta[i] : 0.0;
  b_in /= b_in.sum();
  const Eigen::VectorXd z = E.transpose() * b_in;

  std::vector<Eigen::Index> excluded;
  for (Eigen::Index i = 0; i < na; ++i) {
    if (!beta.considered(static_cast<std::size_t>(i))) excluded.push_back(i);
  }
  const Eigen::Index nx = static_cast<Eigen::Index>(excluded.size());

  // Unknowns (mu_1..mu_ns, one slack per excluded action).
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(na + 1, ns + nx);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(na + 1);
  A.block(0, 0, 1, ns).setOnes();
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < ns; ++j) A(1 + i, j) = E(i, j) / z[j];
  }
  for (Eigen::Index k = 0; k < nx; ++k) A(1 + excluded[k], ns + k) = 1.0;

  const LinearFeasibility lp = solve_linear_feasibility(A, rhs);
  FeasibilityCertificate cert{lp.feasible, std::nullopt, {}};
  if (lp.feasible) {
    std::vector<double> mu(lp.x.data(), lp.x.data() + ns);
    double s = 0.0;
    for (double v : mu) s += v;
    for (double& v : mu) v /= s;
    cert.mu = Belief(std::move(mu));
    return cert;
  }
  // y = (y_0, y_1..y_na); z_i = y_i + y_0 beta_i turns the row certificate into
  // one over actions: sum_i z_i E_ij = Z_j (A^T y)_j >= 0 and sum z = b^T y.
  std::vector<double> w(static_cast<std::size_t>(na));
  for (Eigen::Index i = 0; i < na; ++i) w[static_cast<std::size_t>(i)] = lp.y[1 + i] + lp.y[0] * b_in[i];
  double s = 0.0;
  for (double v : w) s += v;
  for (double& v : w) v /= -s;
  cert.dual_witness = std::move(w);
  return cert;
}

double implementation_error(const Belief& mu, const ChoiceDistribution& beta, const PayoffMatrix& u,
                            double lambda) {
  check_inputs(beta, u, lambda);
  if (mu.size() != u.n_states()) throw InvalidInput("prior and payoff matrix disagree on states");
  const Eigen::MatrixXd E = column_scaled_exp(u, lambda);
  Eigen::Map<const Eigen::VectorXd> b(beta.values().data(), static_cast<Eigen::Index>(beta.size()));
  Eigen::Map<const Eigen::VectorXd> m(mu.values().data(), static_cast<Eigen::Index>(mu.size()));
  const Eigen::VectorXd z = E.transpose() * b;
  const Eigen::VectorXd d = E * m.cwiseQuotient(z);
  double err = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    err = std::max(err, beta.considered(static_cast<std::size_t>(i)) ? std::abs(d[i] - 1.0)
                                                                      : std::max(0.0, d[i] - 1.0));
  }
  return err;
}

double witness_violation(const std::vector<double>& zw, const ChoiceDistribution& beta, const PayoffMatrix& u,
                         double lambda) {
  check_inputs(beta, u, lambda);
  if (zw.size() != u.n_actions()) throw InvalidInput("witness length differs from the number of actions");
  double sum = 0.0;
  for (double v : zw) sum += v;
  if (!(sum < 0.0)) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd E = column_scaled_exp(u, lambda);
  // Scale-free comparison: normalize to sum z = -1.
  Eigen::VectorXd z(static_cast<Eigen::Index>(zw.size()));
  for (std::size_t i = 0; i < zw.size(); ++i) z[static_cast<Eigen::Index>(i)] = zw[i] / -sum;
  double viol = 0.0;
  const Eigen::VectorXd col = E.transpose() * z;
  for (Eigen::Index j = 0; j < col.size(); ++j) viol = std::max(viol, -col[j]);
  for (std::size_t k = 0; k < zw.size(); ++k) {
    if (!beta.considered(k)) viol = std::max(viol, -z[static_cast<Eigen::Index>(k)]);
  }
  return viol;
}

PayoffMatrix nonimplementable_payoffs(double eps) {
  if (!(eps >= 0.0)) throw InvalidInput("eps must be non-negative");
  const double a = std::log(3.0);
  const double c = std::log(2.0 + eps);
  return PayoffMatrix::from_rows({{a, 0.0, 0.0}, {0.0, a, 0.0}, {c, c, c}});
}

}  // namespace ridel
