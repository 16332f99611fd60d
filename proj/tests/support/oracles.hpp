#pragma once

// Reference computations for the tests. Nothing here calls the library's
// closed forms or its simplex code.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Flat Dirichlet; `floor` keeps every coordinate away from zero.
inline std::vector<double> dirichlet(Rng& rng, std::size_t n, double floor = 0.0) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) {
    x = ex(rng) + floor;
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

// -sum p ln p written out directly.
inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

// Principal payoff sum_j mu_p_j * pi(a_j | w_j) with the RI-logit rule for beta,
// computed from the rule itself rather than the reduced formula.
inline double relaxed_value(const std::vector<double>& mu_p, const std::vector<double>& beta, double lambda) {
  const double e = std::exp(1.0 / lambda);
  double v = 0.0;
  for (std::size_t j = 0; j < mu_p.size(); ++j) {
    double z = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k) z += beta[k] * (k == j ? e : 1.0);
    v += mu_p[j] * beta[j] * e / z;
  }
  return v;
}

// Exhaustive search of the principal's relaxed problem over the grid
// {beta : beta_i = k_i / n}. Plain nested enumeration, up to four coordinates.
inline std::vector<double> relaxed_grid_bruteforce(const std::vector<double>& mu_p, double lambda, int n) {
  const std::size_t d = mu_p.size();
  const double e = std::exp(1.0 / lambda);
  // With sum beta = 1, pi(a_j | w_j) = beta_j e / (1 + (e - 1) beta_j) depends on beta_j only.
  std::vector<std::vector<double>> f(d, std::vector<double>(n + 1));
  for (std::size_t j = 0; j < d; ++j) {
    for (int k = 0; k <= n; ++k) {
      const double b = static_cast<double>(k) / n;
      f[j][k] = mu_p[j] * b * e / (1.0 + (e - 1.0) * b);
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> arg(d, 0);
  if (d == 2) {
    for (int a = 0; a <= n; ++a) {
      const double v = f[0][a] + f[1][n - a];
      if (v > best) best = v, arg = {a, n - a};
    }
  } else if (d == 3) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; a + b <= n; ++b) {
        const double v = f[0][a] + f[1][b] + f[2][n - a - b];
        if (v > best) best = v, arg = {a, b, n - a - b};
      }
    }
  } else if (d == 4) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; a + b <= n; ++b) {
        const double fab = f[0][a] + f[1][b];
        for (int c = 0; a + b + c <= n; ++c) {
          const double v = fab + f[2][c] + f[3][n - a - b - c];
          if (v > best) best = v, arg = {a, b, c, n - a - b - c};
        }
      }
    }
  }
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = static_cast<double>(arg[j]) / n;
  return out;
}

// Lawson-Hanson non-negative least squares: min |A x - b| subject to x >= 0.
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = 1e-12) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  for (int outer = 0; outer < 3 * static_cast<int>(n) + 30; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index t = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > wmax) wmax = w[j], t = j;
    }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;
    for (int inner = 0; inner < 3 * static_cast<int>(n) + 30; ++inner) {
      std::vector<Eigen::Index> P;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)]) P.push_back(j);
      }
      Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(P.size()));
      for (std::size_t k = 0; k < P.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(P[k]);
      const Eigen::VectorXd zp = Ap.completeOrthogonalDecomposition().solve(b);
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      for (std::size_t k = 0; k < P.size(); ++k) z[P[k]] = zp[static_cast<Eigen::Index>(k)];
      bool all_pos = true;
      for (Eigen::Index j : P) all_pos = all_pos && z[j] > 0.0;
      if (all_pos) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j : P) {
        if (z[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      }
      x += alpha * (z - x);
      for (Eigen::Index j : P) {
        if (x[j] <= tol) passive[static_cast<std::size_t>(j)] = false, x[j] = 0.0;
      }
    }
  }
  return x;
}

// e^{u_ij / lambda} with u given actions x states.
inline Eigen::MatrixXd exp_payoffs(const std::vector<std::vector<double>>& u, double lambda) {
  Eigen::MatrixXd E(u.size(), u.front().size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < u[i].size(); ++j) E(i, j) = std::exp(u[i][j] / lambda);
  }
  return E;
}

// Whether some prior makes beta optimal, decided by NNLS on
// {x >= 0 : (E x)_i = 1 on C, (E x)_k + s_k = 1 off C}.
struct NnlsVerdict {
  bool feasible;
  double residual;
};

inline NnlsVerdict implementable_by_nnls(const std::vector<double>& beta, const std::vector<std::vector<double>>& u,
                                         double lambda, double threshold = 1e-9) {
  const Eigen::MatrixXd E = exp_payoffs(u, lambda);
  const Eigen::Index na = E.rows(), ns = E.cols();
  std::vector<Eigen::Index> off;
  for (Eigen::Index i = 0; i < na; ++i) {
    if (!(beta[static_cast<std::size_t>(i)] > threshold)) off.push_back(i);
  }
  // Rows scaled to unit max to keep the least-squares residual meaningful.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(na, ns + static_cast<Eigen::Index>(off.size()));
  Eigen::VectorXd b = Eigen::VectorXd::Ones(na);
  const double s = E.maxCoeff();
  A.leftCols(ns) = E / s;
  b /= s;
  for (std::size_t k = 0; k < off.size(); ++k) A(off[k], ns + static_cast<Eigen::Index>(k)) = 1.0 / s;
  const Eigen::VectorXd x = nnls(A, b);
  const double res = (A * x - b).cwiseAbs().maxCoeff() * s;
  return {res <= 1e-8, res};
}

}  // namespace oracle
