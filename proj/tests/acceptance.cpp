// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qcont/bounds.hpp"
#include "qcont/channels.hpp"
#include "qcont/integral.hpp"
#include "qcont/lab.hpp"

using namespace qcont;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double extra(const FuzzReport& r, const std::string& key, double fallback = 0.0) {
  for (const auto& [k, v] : r.extras)
    if (k == key) return v;
  return fallback;
}

bool identical(const FuzzReport& a, const FuzzReport& b) {
  if (a.samples != b.samples || a.applicable != b.applicable || a.violations != b.violations ||
      a.max_violation != b.max_violation || a.min_slack != b.min_slack ||
      a.near_saturations.size() != b.near_saturations.size() || a.extras != b.extras) {
    return false;
  }
  for (std::size_t i = 0; i < a.near_saturations.size(); ++i) {
    const Witness& x = a.near_saturations[i];
    const Witness& y = b.near_saturations[i];
    if (x.index != y.index || x.slack != y.slack || x.digest != y.digest || x.note != y.note) return false;
  }
  return true;
}

double binary(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double min_eig(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Outcome integral_agreement() {
  Rng rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int d = 2 + i % 3;
    const DensityMatrix rho = ginibre_state(d, d, rng);
    const DensityMatrix sigma = ginibre_state(d, d, rng);
    const double q = integral_rel_entropy(rho, sigma, 1e-8).value;
    worst = std::max(worst, std::abs(q - rel_entropy(rho, sigma).value));
  }
  return {worst <= 1e-6, fmt("1000 pairs, max |integral - spectral| = %.3g", worst)};
}

Outcome thm1_saturation() {
  const std::vector<BoundReport> reps = tightness_suite();
  double worst = 0.0;
  int rows = 0;
  int branch_rows = 0;
  bool ok = true;
  for (const BoundReport& r : reps) {
    if (r.equation_tag != "thm1") continue;
    ++rows;
    ok = ok && r.applicable && r.lhs.has_value();
    worst = std::max(worst, std::abs(r.slack));
    const double M = *r.detail("M");
    const double eps = *r.detail("eps");
    if (eps >= 1.0 - 1.0 / M) {
      ++branch_rows;
      ok = ok && std::abs(r.rhs - std::log2(M)) <= 1e-12;
    } else {
      ok = ok && std::abs(r.rhs - (eps > 0 ? eps * std::log2(M - 1.0) : 0.0) - binary(eps)) <= 1e-12;
    }
  }
  ok = ok && worst <= 1e-9 && branch_rows == 4;
  return {ok, fmt("%d grid points (%d on the log2 M branch), max |slack| = %.3g", rows, branch_rows, worst)};
}

Outcome thm1_fuzz() {
  FuzzParams p;
  p.dmin = 2;
  p.dmax = 6;
  const auto t0 = std::chrono::steady_clock::now();
  const FuzzReport r = fuzz("thm1", p, 100000, {20240601, 8});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const FuzzReport again = fuzz("thm1", p, 100000, {20240601, 3});
  const bool det = identical(r, again);
  return {r.violations == 0 && det && secs <= 900.0,
          fmt("100000 triples, %ld applicable, violations %ld, min slack %.3g, deterministic %s, %.1f s",
              r.applicable, r.violations, r.min_slack, det ? "yes" : "no", secs)};
}

Outcome eq14() {
  FuzzParams p;
  p.dA = 4;
  p.dB = 4;
  const FuzzReport r = fuzz("eq14", p, 100000, {777, 8});
  double worst = 0.0;
  int rows = 0;
  for (const BoundReport& b : tightness_suite()) {
    if (b.equation_tag != "eq14") continue;
    ++rows;
    worst = std::max(worst, std::abs(b.slack));
  }
  bool injected = false;
  for (const Witness& w : r.near_saturations) injected = injected || (w.note.rfind("isotropic", 0) == 0 && w.slack <= 1e-9);
  const bool ok = r.violations == 0 && worst <= 1e-9 && rows == 12 && injected;
  return {ok, fmt("100000 pairs, %ld applicable, violations %ld, min slack %.3g; isotropic grid max |slack| %.3g",
                  r.applicable, r.violations, r.min_slack, worst)};
}

Outcome improved_fa_dominance() {
  Rng rng(1005);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int used = 0;
  int strict_fail = 0;
  double min_slack = INFINITY;
  for (int i = 0; i < 10000; ++i) {
    const int d = 2 + i % 4;
    const DensityMatrix sigma = ginibre_state(d, d, rng);
    const DensityMatrix rho = mix(sigma, ginibre_state(d, 1 + i % d, rng), 0.6 * U(rng));
    const BoundReport r = check_improved_fa(rho, sigma);
    if (!r.applicable) continue;
    ++used;
    const double eps = *r.detail("eps");
    const double lmax = *r.detail("lambda_max");
    const double fa = *r.detail("fannes_audenaert");
    if (eps > 0.0 && lmax < 1.0 && !(r.rhs < fa)) ++strict_fail;
    min_slack = std::min(min_slack, r.slack);
  }
  return {used >= 5000 && strict_fail == 0 && min_slack >= -1e-8,
          fmt("%d admissible pairs of 10000, strict-gap failures %d, min slack %.3g", used, strict_fail, min_slack)};
}

Outcome g_identity() {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = i / 99.0;
    auto phi = [x](double q) { return -x * std::log2(q) - std::log2(1.0 - q); };
    double best_q = 0.5;
    for (int k = 1; k < 10000; ++k) {
      const double q = k / 10000.0;
      if (phi(q) < phi(best_q)) best_q = q;
    }
    double lo = std::max(1e-15, best_q - 1e-4);
    double hi = std::min(1.0 - 1e-15, best_q + 1e-4);
    for (int it = 0; it < 200; ++it) {
      const double a = lo + (hi - lo) / 3.0;
      const double b = hi - (hi - lo) / 3.0;
      if (phi(a) < phi(b)) hi = b; else lo = a;
    }
    const double inf = std::min(phi(best_q), phi(0.5 * (lo + hi)));
    worst = std::max(worst, std::abs(g_function(x) - inf));
  }
  return {worst <= 1e-6, fmt("100 grid points, max deviation %.3g", worst)};
}

Outcome channel_dmax() {
  Rng rng(1007);
  double worst = 0.0;
  int order_fail = 0;
  for (int i = 0; i < 100; ++i) {
    const int din = 2 + i % 2;
    const int dout = 2 + (i / 2) % 2;
    const QuantumChannel a = random_channel(din, dout, (din + dout - 1) / dout, rng);
    const QuantumChannel b = random_channel(din, dout, din * dout, rng);
    const DivergenceValue v = channel_dmax_stabilised(a, b);
    const Matrix& J1 = a.choi();
    const Matrix& J2 = b.choi();
    double lo = 0.0;
    double hi = 1.0;
    while (min_eig(hi * J2 - J1) < 0.0) hi *= 2.0;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (min_eig(mid * J2 - J1) >= 0.0) hi = mid; else lo = mid;
    }
    worst = std::max(worst, std::abs(v.value - std::log2(hi)));
    const UnstabilisedEstimate u = channel_dmax_unstabilised(a, b, 10, i);
    if (u.value.value > v.value + 1e-8) ++order_fail;
  }
  return {worst <= 1e-8 && order_fail == 0,
          fmt("100 pairs, max |eigen - bisection| = %.3g, unstabilised > stabilised on %d", worst, order_fail)};
}

Outcome degradability() {
  const double g = 0.25;
  const QuantumChannel ad = QuantumChannel::amplitude_damping(g);
  // AD_{(1-2g)/(1-g)} o AD_g = AD_{1-g}, the complementary channel up to an isometry.
  const QuantumChannel theta = QuantumChannel::amplitude_damping((1 - 2 * g) / (1 - g));
  const DegradabilityReport r = degradability_bounds(ad, theta);
  double scan = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double p = i / 100000.0;
    scan = std::max(scan, binary((1 - g) * p) - binary(g * p));
  }
  const bool ok = r.eps_lower <= 0.0 + 1e-12 && r.eps_upper <= 1e-8 &&
                  std::abs(r.u_theta - r.ic_lower) <= 2e-5 && r.q_upper_utheta.applicable &&
                  r.q_upper_ic.applicable && r.q_upper_utheta.value >= r.ic_lower &&
                  r.q_upper_ic.value >= r.ic_lower && std::abs(r.ic_lower - scan) <= 1e-4;
  return {ok, fmt("eps in [%.3g, %.3g], u_theta %.9f, ic_lower %.9f, scan %.9f, bounds %.9f / %.9f", r.eps_lower,
                  r.eps_upper, r.u_theta, r.ic_lower, scan, r.q_upper_utheta.value, r.q_upper_ic.value)};
}

Outcome filtered_fuzz() {
  FuzzParams p;
  p.dim = 3;
  p.generators = 3;
  p.channels = 2;
  const FuzzReport c = fuzz("prop9", p, 10000, {909, 8});
  FuzzParams q = p;
  q.q = 0.0;  // cycles 0.1, 0.3, 0.6
  const FuzzReport l = fuzz("lemma3", q, 10000, {910, 8});
  const double fails = extra(c, "optimizer_failures") + extra(l, "optimizer_failures");
  const double secondary = extra(c, "prop9.violations") + extra(c, "eq46.violations");
  const bool ok = c.violations == 0 && c.min_slack >= -1e-5 && l.violations == 0 && l.min_slack >= -1e-6 &&
                  fails == 0 && secondary == 0;
  return {ok, fmt("cor10: %ld applicable, min slack %.3g; lemma3: %ld applicable, min slack %.3g; "
                  "optimizer failures %.0f, prop9/eq46 violations %.0f",
                  c.applicable, c.min_slack, l.applicable, l.min_slack, fails, secondary)};
}

Outcome conjectures() {
  FuzzParams p;
  p.dA = 2;
  p.dB = 2;
  std::string detail;
  bool ok = true;
  for (const char* tag : {"wilde", "mi_conjecture"}) {
    const FuzzReport r = fuzz(tag, p, 100000, {42, 8});
    const FuzzReport again = fuzz(tag, p, 100000, {42, 2});
    const bool det = identical(r, again);
    const double afw = extra(r, "afw-vs-wilde.violations", -1.0);
    const double afw_app = extra(r, "afw-vs-wilde.applicable", 0.0);
    const double afw_thm = extra(r, "afw.violations", -1.0);
    ok = ok && r.conjecture && det && afw == 0.0 && afw_app > 0 && afw_thm == 0.0;
    detail += fmt("%s: violations %ld (recorded), deterministic %s, afw >= wilde on %.0f points; ", tag,
                  r.violations, det ? "yes" : "no", afw_app);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"integral vs spectral relative entropy", integral_agreement},
      {"thm1 saturation grid", thm1_saturation},
      {"thm1 fuzz", thm1_fuzz},
      {"equal-marginal fuzz and isotropic tightness", eq14},
      {"improved Fannes-Audenaert dominance", improved_fa_dominance},
      {"g infimum identity", g_identity},
      {"channel D_max consistency", channel_dmax},
      {"degradability self-consistency", degradability},
      {"filtered divergence fuzz", filtered_fuzz},
      {"conjecture campaigns", conjectures},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s (%s) [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
