#include "qcont/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace qcont {

namespace {

// Kronrod abscissae on [0, 1] (symmetric half), Gauss nodes at odd positions.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Piece& x, const Piece& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;  // deterministic tie break
  }
};

Piece gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  std::span<const double> breakpoints, double tol,
                                  long max_evaluations) {
  AdaptiveResult out;
  if (!(b > a)) {
    out.converged = true;
    return out;
  }
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Piece, std::vector<Piece>, ByError> queue;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (out.evaluations + 15 > max_evaluations) break;
    Piece p = gauss_kronrod(f, cuts[i], cuts[i + 1]);
    out.evaluations += 15;
    value += p.value;
    error += p.error;
    queue.push(p);
  }
  if (queue.size() + 1 < cuts.size()) {
    out.value = value;
    out.error = std::numeric_limits<double>::infinity();
    return out;
  }

  out.value = value;
  out.error = error;
  while (error > tol && out.evaluations + 30 <= max_evaluations) {
    const Piece worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted at double precision
    queue.pop();
    const Piece left = gauss_kronrod(f, worst.a, mid);
    const Piece right = gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    queue.push(left);
    queue.push(right);
    // Re-sum occasionally to keep round-off out of the running totals.
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    if (queue.size() % 256 == 0) {
      auto copy = queue;
      value = 0.0;
      error = 0.0;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
    error = std::max(error, 0.0);
    if (error < out.error) {
      out.value = value;
      out.error = error;
    }
  }
  out.converged = out.error <= tol;
  return out;
}

}  // namespace qcont
