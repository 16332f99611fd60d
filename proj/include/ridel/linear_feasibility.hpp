#pragma once

// Feasibility of {x >= 0 : A x = b} by a dense Phase-I simplex with Bland's
// rule. On infeasibility the Farkas alternative y (A^T y >= 0, b^T y < 0) is
// read off the final tableau.

#include <Eigen/Dense>

namespace ridel {

struct LinearFeasibility {
  bool feasible;
  Eigen::VectorXd x;  // primal point when feasible
  Eigen::VectorXd y;  // Farkas certificate when infeasible, scaled so b^T y = -1
};

LinearFeasibility solve_linear_feasibility(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                           double tol = 1e-11);

}  // namespace ridel
