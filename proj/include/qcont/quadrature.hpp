#pragma once

#include <functional>
#include <span>

namespace qcont {

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;  // sum of |K15 - G7| over the final partition
  long evaluations = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f on [a, b].
/// Interior breakpoints seed the initial partition; the interval with the largest
/// error estimate is bisected until the total error is <= tol or `max_evaluations`
/// would be exceeded. The returned state is the one with the smallest total error
/// seen, so `error` never grows when the budget does.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints, double tol,
                                  long max_evaluations);

}  // namespace qcont
