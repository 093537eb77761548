#include "qcont/simplex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcont/error.hpp"

namespace qcont {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd lift(const Eigen::VectorXd& x) {
  const Eigen::Index m = x.size();
  Eigen::VectorXd w(m + 1);
  w.head(m) = x;
  w(m) = 1.0 - x.sum();
  return w;
}

// Subgradient in the reduced coordinates x = w_1..w_{n-1}.
Eigen::VectorXd reduce(const Eigen::VectorXd& g) {
  const Eigen::Index m = g.size() - 1;
  return g.head(m).array() - g(m);
}

}  // namespace

SimplexMinimum minimize_on_simplex(const SimplexObjective& f, int n, double tol,
                                   int max_iterations) {
  if (n < 1) throw Error(ErrorKind::RangeError, "simplex needs at least one vertex");
  SimplexMinimum best;
  best.value = kInf;
  best.lower_bound = -kInf;
  auto consider = [&](const Eigen::VectorXd& w) {
    SimplexEval e = f(w);
    ++best.evaluations;
    if (e.value < best.value) {
      best.value = e.value;
      best.weights = w;
    }
    return e;
  };

  for (int i = 0; i < n; ++i) consider(Eigen::VectorXd::Unit(n, i));
  const Eigen::VectorXd bary = Eigen::VectorXd::Constant(n, 1.0 / n);
  const SimplexEval centre = consider(bary);
  if (best.weights.size() == 0) best.weights = bary;  // every probe was infinite
  if (n == 1) {
    best.lower_bound = best.value;
    best.converged = true;
    return best;
  }
  if (std::isinf(centre.value)) {
    // The barycentre has the largest support of any mixture: infinite here means everywhere.
    best.lower_bound = kInf;
    best.weights = bary;
    best.converged = true;
    return best;
  }

  const int m = n - 1;
  if (m == 1) {
    double a = 0.0;
    double b = 1.0;
    for (int it = 0; it < max_iterations; ++it) {
      const double x = 0.5 * (a + b);
      Eigen::VectorXd w(2);
      w << x, 1.0 - x;
      const SimplexEval e = consider(w);
      if (std::isinf(e.value)) {
        // Only possible at numerically vanishing weights; shrink toward the centre.
        if (x < 0.5) a = x; else b = x;
        continue;
      }
      const double g = e.subgradient(0) - e.subgradient(1);
      const double reach = g > 0.0 ? g * (x - a) : -g * (b - x);
      best.lower_bound = std::max(best.lower_bound, std::min(best.value, e.value - reach));
      if (best.value - best.lower_bound <= tol) break;
      if (g > 0.0) b = x;
      else if (g < 0.0) a = x;
      else {
        best.lower_bound = std::max(best.lower_bound, e.value);
        break;
      }
      if (b - a < 1e-15) break;
    }
    best.converged = best.value - best.lower_bound <= tol;
    return best;
  }

  Eigen::VectorXd x = bary.head(m);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m);  // radius 1 covers the simplex
  const double dm = m;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd cut(m);
    bool feasible = true;
    if (x.minCoeff() < 0.0) {
      Eigen::Index i;
      x.minCoeff(&i);
      cut = -Eigen::VectorXd::Unit(m, i);
      feasible = false;
    } else if (x.sum() > 1.0) {
      cut = Eigen::VectorXd::Ones(m);
      feasible = false;
    }
    if (feasible) {
      const SimplexEval e = consider(lift(x));
      if (std::isinf(e.value)) {
        cut = x - bary.head(m);
      } else {
        cut = reduce(e.subgradient);
        const double spread = std::sqrt(std::max(0.0, cut.dot(P * cut)));
        best.lower_bound = std::max(best.lower_bound, std::min(best.value, e.value - spread));
        if (best.value - best.lower_bound <= tol) break;
        if (spread == 0.0) {
          best.lower_bound = std::max(best.lower_bound, std::min(best.value, e.value));
          break;
        }
      }
    }
    const Eigen::VectorXd pg = P * cut;
    const double norm = std::sqrt(std::max(cut.dot(pg), 0.0));
    if (!(norm > 0.0)) break;
    const Eigen::VectorXd step = pg / norm;
    x -= step / (dm + 1.0);
    P = (dm * dm / (dm * dm - 1.0)) * (P - (2.0 / (dm + 1.0)) * step * step.transpose());
    P = 0.5 * (P + P.transpose());
  }
  best.converged = best.value - best.lower_bound <= tol;
  return best;
}

SimplexFit simplex_least_squares(const std::vector<Eigen::VectorXd>& atoms,
                                 const Eigen::VectorXd& target, double tol, int max_iterations) {
  const auto n = static_cast<Eigen::Index>(atoms.size());
  if (n == 0) throw Error(ErrorKind::RangeError, "no atoms");
  SimplexFit fit;
  // Start at the atom closest to the target.
  Eigen::Index start = 0;
  double closest = kInf;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = (atoms[static_cast<std::size_t>(i)] - target).norm();
    if (d < closest) {
      closest = d;
      start = i;
    }
  }
  Eigen::VectorXd w = Eigen::VectorXd::Unit(n, start);
  Eigen::VectorXd point = atoms[static_cast<std::size_t>(start)];
  int it = 0;
  for (; it < max_iterations; ++it) {
    const Eigen::VectorXd r = point - target;
    if (r.norm() <= tol) break;
    // Gradient of 0.5 ||point - target||^2 in w is <a_i, r>.
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = atoms[static_cast<std::size_t>(i)].dot(r);
    Eigen::Index fw = 0;
    g.minCoeff(&fw);
    Eigen::Index away = -1;
    double away_val = -kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w(i) > 0.0 && g(i) > away_val) {
        away_val = g(i);
        away = i;
      }
    }
    const double fw_gap = g.dot(w) - g(fw);
    const double away_gap = away_val - g.dot(w);
    if (fw_gap <= 1e-30 && away_gap <= 1e-30) break;
    Eigen::VectorXd dir_w;
    Eigen::VectorXd dir;
    double tmax;
    if (fw_gap >= away_gap) {
      dir_w = Eigen::VectorXd::Unit(n, fw) - w;
      dir = atoms[static_cast<std::size_t>(fw)] - point;
      tmax = 1.0;
    } else {
      dir_w = w - Eigen::VectorXd::Unit(n, away);
      dir = point - atoms[static_cast<std::size_t>(away)];
      const double wa = w(away);
      tmax = wa < 1.0 ? wa / (1.0 - wa) : kInf;
    }
    const double dd = dir.squaredNorm();
    if (dd == 0.0) break;
    const double t = std::clamp(-r.dot(dir) / dd, 0.0, tmax);
    if (t == 0.0) break;
    w += t * dir_w;
    w = w.cwiseMax(0.0);
    w /= w.sum();
    point.setZero(target.size());
    for (Eigen::Index i = 0; i < n; ++i) point += w(i) * atoms[static_cast<std::size_t>(i)];
  }
  fit.weights = w;
  fit.residual = (point - target).norm();
  fit.iterations = it;
  return fit;
}

}  // namespace qcont
