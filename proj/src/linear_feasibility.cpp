#include "ridel/linear_feasibility.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "ridel/errors.hpp"

namespace ridel {

LinearFeasibility solve_linear_feasibility(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m) throw InvalidInput("right-hand side length differs from the number of rows");

  // Rows are flipped so the right-hand side is non-negative; one artificial per row.
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) sign[i] = -1.0;
  }
  const Eigen::Index cols = n + m;
  Eigen::MatrixXd T(m, cols + 1);
  T.leftCols(n) = sign.asDiagonal() * A;
  T.block(0, n, m, m).setIdentity();
  T.col(cols) = sign.cwiseProduct(b);

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  cost.tail(m).setOnes();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  auto reduced_costs = [&]() {
    Eigen::VectorXd cb(m);
    for (Eigen::Index i = 0; i < m; ++i) cb[i] = cost[basis[static_cast<std::size_t>(i)]];
    return Eigen::VectorXd(cost - T.leftCols(cols).transpose() * cb);
  };

  const long max_pivots = 50 * static_cast<long>(cols + m) + 1000;
  for (long pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw NonConvergence("simplex pivot limit reached", 0.0, pivots);
    const Eigen::VectorXd r = reduced_costs();
    Eigen::Index enter = -1;
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (r[k] < -tol) {
        enter = k;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (T(i, enter) > tol) {
        const double ratio = T(i, cols) / T(i, enter);
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) break;  // unbounded direction cannot occur in Phase I; stop defensively
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  double infeasibility = 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index k = basis[static_cast<std::size_t>(i)];
    const double v = std::max(T(i, cols), 0.0);
    if (k < n) {
      x[k] = v;
    } else {
      infeasibility += v;
    }
  }
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (infeasibility <= 1e-9 * scale) return {true, x, Eigen::VectorXd()};

  // Phase-I duals from the artificial columns: w_i = 1 - r_{n+i}. Then
  // (sign A)^T w <= 0 and (sign b)^T w > 0, so y = -sign * w is the certificate.
  const Eigen::VectorXd r = reduced_costs();
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) y[i] = -sign[i] * (1.0 - r[n + i]);
  const double by = b.dot(y);
  if (by < 0.0) y /= -by;
  return {false, Eigen::VectorXd(), y};
}

}  // namespace ridel
