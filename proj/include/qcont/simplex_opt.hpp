#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace qcont {

/// Value and one subgradient of a convex function on the probability simplex.
/// `value` may be +infinity (outside the effective domain); the subgradient is then ignored.
struct SimplexEval {
  double value;
  Eigen::VectorXd subgradient;  // with respect to the weights w_1..w_n
};

using SimplexObjective = std::function<SimplexEval(const Eigen::VectorXd&)>;

struct SimplexMinimum {
  Eigen::VectorXd weights;
  double value = 0.0;        // best value found (an upper bound on the minimum)
  double lower_bound = 0.0;  // certified lower bound on the minimum
  int evaluations = 0;
  bool converged = false;    // value - lower_bound <= tol
};

/// Minimises a convex function over {w >= 0, sum w = 1} with the central-cut ellipsoid
/// method in the first n - 1 coordinates (bisection when n = 2). Vertices and the
/// barycentre are evaluated first. Every objective cut supplies
/// f* >= f(x) - sqrt(g^T P g); the largest such bound is reported.
SimplexMinimum minimize_on_simplex(const SimplexObjective& f, int n, double tol,
                                   int max_iterations = 10'000);

struct SimplexFit {
  Eigen::VectorXd weights;
  double residual = 0.0;  // || sum_i w_i a_i - target ||_2
  int iterations = 0;
};

/// Least squares over the simplex by Frank-Wolfe with away steps and exact line search.
SimplexFit simplex_least_squares(const std::vector<Eigen::VectorXd>& atoms,
                                 const Eigen::VectorXd& target, double tol,
                                 int max_iterations = 10'000);

}  // namespace qcont
