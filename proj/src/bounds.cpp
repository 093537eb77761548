#include "qcont/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qcont {

namespace {

constexpr double kRangeSlack = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& condition) {
  if (!ok) throw Error(ErrorKind::RangeError, "requires " + condition);
}

void require_eps(double eps) {
  require(eps >= 0.0 && eps <= 1.0, "0 <= eps <= 1 (got " + brief(eps) + ")");
}

// eps log2(x) + h2(eps) for x >= 0, with 0 log 0 = 0.
double fudge(double eps, double x) {
  const double term = (eps > 0.0 && x > 0.0) ? eps * std::log2(x) : 0.0;
  return term + binary_entropy(eps);
}

double clamp_eps(double eps) { return std::clamp(eps, 0.0, 1.0); }

BoundReport inapplicable(std::string tag, std::string reason) {
  BoundReport r;
  r.equation_tag = std::move(tag);
  r.applicable = false;
  r.reason = std::move(reason);
  r.rhs = kInf;
  r.slack = kInf;
  return r;
}

void finish(BoundReport& r, double lhs, double rhs) {
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
}

void require_same_split(const BipartiteDensityMatrix& a, const BipartiteDensityMatrix& b) {
  if (a.dA() != b.dA() || a.dB() != b.dB()) {
    throw Error(ErrorKind::DimensionMismatch, "bipartite states with different subsystem dimensions");
  }
}

}  // namespace

std::optional<double> BoundReport::detail(const std::string& key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  return std::nullopt;
}

double thm1_bound(double M, double eps) {
  require(M >= 1.0 && !std::isinf(M), "finite M >= 1");
  require_eps(eps);
  if (M == 1.0) return 0.0;
  if (eps >= 1.0 - 1.0 / M) return std::log2(M);
  return fudge(eps, M - 1.0);
}

double thm1_simplified(double M, double eps) {
  require(M >= 1.0 && !std::isinf(M), "finite M >= 1");
  require_eps(eps);
  return fudge(eps, M);
}

double fannes_audenaert(int d, double eps) {
  require(d >= 2, "d >= 2");
  require_eps(eps);
  require(eps <= 1.0 - 1.0 / d + kRangeSlack, "eps <= 1 - 1/d");
  return fudge(eps, d - 1.0);
}

double improved_fa(int d, double lambda_max, double eps) {
  require(d >= 2, "d >= 2");
  require(lambda_max > 0.0 && lambda_max <= 1.0 + kRangeSlack, "0 < lambda_max <= 1");
  require_eps(eps);
  const double dl = d * lambda_max;
  require(dl >= 1.0 - kRangeSlack, "d * lambda_max >= 1");
  require(eps <= 1.0 - 1.0 / std::max(dl, 1.0) + kRangeSlack, "eps <= 1 - 1/(d lambda_max)");
  return fudge(eps, std::max(dl - 1.0, 0.0));
}

double equal_marginals_bound(int dA, int sn, double eps) {
  require(dA >= 1 && sn >= 1 && dA * sn >= 2, "dA >= 1, sn >= 1 and dA * sn >= 2");
  require_eps(eps);
  const double m = static_cast<double>(dA) * sn;
  require(eps <= 1.0 - 1.0 / m + kRangeSlack, "eps <= 1 - 1/(dA sn)");
  return fudge(eps, m - 1.0);
}

double alicki_fannes_winter(int dA, double eps) {
  require(dA >= 1, "dA >= 1");
  require_eps(eps);
  const double base = eps * std::log2(static_cast<double>(dA) * dA);
  return base + (1.0 + eps) * binary_entropy(eps / (1.0 + eps));
}

double wilde_rhs(int dA, double eps) {
  require(dA >= 2, "dA >= 2");
  require_eps(eps);
  const double m = static_cast<double>(dA) * dA;
  require(eps <= 1.0 - 1.0 / m + kRangeSlack, "eps <= 1 - 1/dA^2");
  return fudge(eps, m - 1.0);
}

double mi_conjecture_rhs(int dA, int dB, double eps) {
  const int d = std::min(dA, dB);
  require(d >= 2, "min(dA, dB) >= 2");
  require_eps(eps);
  return fudge(eps, static_cast<double>(d) * d - 1.0);
}

double lemma5_per_copy_rhs(int dB, double eps) {
  require(dB >= 2, "dB >= 2");
  require_eps(eps);
  const double m = static_cast<double>(dB) * dB;
  require(eps <= 1.0 - 1.0 / m + kRangeSlack, "eps <= 1 - 1/dB^2");
  return fudge(eps, m - 1.0);
}

double capacity_continuity_rhs(int dB, double eps) { return 2.0 * lemma5_per_copy_rhs(dB, eps); }

double ecost_bound(int d, double eps) {
  require(d >= 2, "d >= 2");
  require_eps(eps);
  const double m = static_cast<double>(d) * d;
  require(eps <= 1.0 - std::sqrt(2.0 * m - 1.0) / m + kRangeSlack,
          "eps <= 1 - sqrt(2 d^2 - 1)/d^2");
  const double delta = std::sqrt(eps * (2.0 - eps));
  if (delta > 1.0 - 1.0 / m + 1e-9) {
    throw Error(ErrorKind::NumericalFailure, "delta exceeds 1 - 1/d^2");
  }
  return fudge(std::min(delta, 1.0), m - 1.0);
}

double chain_rule_bound(int dA, double eps) {
  require(dA >= 2, "dA >= 2");
  require_eps(eps);
  const double m = static_cast<double>(dA) * dA;
  require(eps <= 1.0 - 1.0 / m + kRangeSlack, "eps <= 1 - 1/dA^2");
  return fudge(eps, m - 1.0);
}

double filtered_bound_rhs(double dmax_term, double eps) {
  require_eps(eps);
  require(dmax_term >= -kRangeSlack && !std::isnan(dmax_term), "dmax_term >= 0");
  const double lead = eps > 0.0 ? eps * std::max(dmax_term, 0.0) : 0.0;
  return lead + g_function(eps) + binary_entropy(eps);
}

double q_upper_utheta(double u_theta, int dE, double eps) {
  require(dE >= 2, "|E| >= 2");
  require_eps(eps);
  const double m = static_cast<double>(dE) * dE;
  require(eps <= 1.0 - 1.0 / m + kRangeSlack, "eps <= 1 - 1/|E|^2");
  return u_theta + fudge(eps, m - 1.0);
}

double q_upper_ic(double ic, int dE, double eps) {
  require(dE >= 2, "|E| >= 2");
  require_eps(eps);
  require(eps <= 1.0 - 1.0 / dE + kRangeSlack, "eps <= 1 - 1/|E|");
  const double e = dE;
  const double x = (e - 1.0) * (e - 1.0) * (e + 1.0);
  return ic + (eps > 0.0 ? eps * std::log2(x) : 0.0) + 2.0 * binary_entropy(eps);
}

double q_upper_utheta_refined(double u_theta, double ms, double eps) {
  require(ms >= 1.0 && !std::isinf(ms), "finite 2^{D_max} >= 1");
  require_eps(eps);
  require(eps <= 1.0 - 1.0 / ms + kRangeSlack, "eps <= 1 - 2^{-D_max(Theta o N || pi Tr)}");
  return u_theta + fudge(eps, std::max(ms - 1.0, 0.0));
}

double q_upper_ic_refined(double ic, double m, double ms, double eps) {
  require(ms >= 1.0 && !std::isinf(ms), "finite 2^{D_max} >= 1");
  require(m >= 1.0 && !std::isinf(m), "finite M >= 1");
  require_eps(eps);
  require(eps <= 1.0 - 1.0 / ms + kRangeSlack, "eps <= 1 - 2^{-D_max(Theta o N || pi Tr)}");
  require(eps <= 1.0 - 1.0 / m + kRangeSlack, "eps <= 1 - 1/M");
  const double x = std::max(m - 1.0, 0.0) * std::max(ms - 1.0, 0.0);
  const double term = (eps > 0.0 && x > 0.0) ? eps * std::log2(x) : 0.0;
  return ic + term + 2.0 * binary_entropy(eps);
}

BoundReport formula_report(std::string tag, double rhs) {
  BoundReport r;
  r.equation_tag = std::move(tag);
  r.rhs = rhs;
  r.slack = kInf;
  return r;
}

BoundReport check_thm1(const DensityMatrix& rho, const DensityMatrix& sigma,
                       const DensityMatrix& omega, std::optional<double> eps,
                       std::optional<double> M) {
  if (rho.dim() != sigma.dim() || rho.dim() != omega.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "check_thm1: states of different dimension");
  }
  const DivergenceValue d_ro = rel_entropy(rho, omega);
  if (!d_ro.finite) return inapplicable("thm1", "D(rho||omega) is infinite");
  const DivergenceValue d_so = rel_entropy(sigma, omega);
  const double dist = trace_distance(rho, sigma);
  const double m_exact = std::exp2(d_max(rho, omega).value);

  const double e = eps.value_or(clamp_eps(dist));
  const double m = M.value_or(m_exact);
  if (eps && *eps < dist - kRangeSlack) {
    return inapplicable("thm1", "supplied eps is below the trace distance");
  }
  if (M && *M < m_exact * (1.0 - 1e-10)) {
    return inapplicable("thm1", "supplied M is below 2^{D_max(rho||omega)}");
  }
  BoundReport r;
  r.equation_tag = "thm1";
  const double rhs = thm1_bound(std::max(m, 1.0), e);
  r.add("eps", e);
  r.add("M", m);
  r.add("D(rho||omega)", d_ro.value);
  r.add("D(sigma||omega)", d_so.value);
  if (!d_so.finite) {
    r.lhs = -kInf;
    r.rhs = rhs;
    r.slack = kInf;
    r.lhs_neg_infinite = true;
    return r;
  }
  finish(r, d_ro.value - d_so.value, rhs);
  return r;
}

BoundReport check_improved_fa(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::DimensionMismatch, "check_improved_fa");
  const int d = rho.dim();
  if (d < 2) return inapplicable("cor2", "dimension 1");
  const double lmax = std::min(lambda_max(sigma), 1.0);
  const double eps = clamp_eps(trace_distance(rho, sigma));
  const double dl = d * lmax;
  if (eps > 1.0 - 1.0 / dl + kRangeSlack) {
    return inapplicable("cor2", "eps > 1 - 1/(d lambda_max(sigma))");
  }
  BoundReport r;
  r.equation_tag = "cor2";
  r.add("eps", eps);
  r.add("lambda_max", lmax);
  r.add("fannes_audenaert", eps <= 1.0 - 1.0 / d + kRangeSlack ? fannes_audenaert(d, eps) : kInf);
  finish(r, vn_entropy(rho) - vn_entropy(sigma), improved_fa(d, lmax, eps));
  return r;
}

BoundReport check_equal_marginals(const BipartiteDensityMatrix& rho,
                                  const BipartiteDensityMatrix& sigma, std::optional<int> sn) {
  require_same_split(rho, sigma);
  const int dA = rho.dA();
  const int dB = rho.dB();
  const std::string tag = sn ? "thm2" : "eq14";
  if (sn) {
    require(*sn >= 1 && *sn <= std::min(dA, dB), "1 <= sn <= min(dA, dB)");
  }
  const int schmidt = sn.value_or(std::min(dA, dB));
  if (dA * schmidt < 2) return inapplicable(tag, "dA * sn < 2");
  const double marginal_gap =
      trace_distance(partial_trace(rho, Subsystem::B), partial_trace(sigma, Subsystem::B));
  if (marginal_gap > 1e-8) {
    BoundReport r = inapplicable(tag, "B marginals differ");
    r.add("marginal_distance", marginal_gap);
    return r;
  }
  const double eps = clamp_eps(trace_distance(rho.state(), sigma.state()));
  if (eps > 1.0 - 1.0 / (static_cast<double>(dA) * schmidt) + kRangeSlack) {
    BoundReport r = inapplicable(tag, "eps > 1 - 1/(dA sn)");
    r.add("eps", eps);
    return r;
  }
  const double h_rho = cond_entropy(rho);
  const double h_sigma = cond_entropy(sigma);
  BoundReport r;
  r.equation_tag = tag;
  r.add("eps", eps);
  r.add("sn", schmidt);
  r.add("H(A|B)_rho", h_rho);
  r.add("H(A|B)_sigma", h_sigma);
  r.add("marginal_distance", marginal_gap);
  const double lhs = sn ? h_sigma - h_rho : std::abs(h_rho - h_sigma);
  finish(r, lhs, equal_marginals_bound(dA, schmidt, eps));
  return r;
}

BoundReport general_marginal_correction(const BipartiteDensityMatrix& rho,
                                        const BipartiteDensityMatrix& sigma) {
  require_same_split(rho, sigma);
  const std::string tag = "marginal-correction";
  const int dA = rho.dA();
  const double m = static_cast<double>(dA) * std::min(dA, rho.dB());
  if (m < 2.0) return inapplicable(tag, "dA * min(dA, dB) < 2");
  const DivergenceValue correction =
      rel_entropy(partial_trace(sigma, Subsystem::B), partial_trace(rho, Subsystem::B));
  if (!correction.finite) return inapplicable(tag, "D(sigma_B||rho_B) is infinite");
  const double eps = clamp_eps(trace_distance(rho.state(), sigma.state()));
  if (eps > 1.0 - 1.0 / m + kRangeSlack) return inapplicable(tag, "eps > 1 - 1/(dA min(dA, dB))");
  BoundReport r;
  r.equation_tag = tag;
  r.add("eps", eps);
  r.add("D(sigma_B||rho_B)", correction.value);
  finish(r, cond_entropy(sigma) - cond_entropy(rho), fudge(eps, m - 1.0) + correction.value);
  return r;
}

BoundReport check_wilde(const BipartiteDensityMatrix& rho, const BipartiteDensityMatrix& sigma) {
  require_same_split(rho, sigma);
  const int dA = rho.dA();
  if (dA < 2) return inapplicable("wilde", "dA < 2");
  const double eps = clamp_eps(trace_distance(rho.state(), sigma.state()));
  if (eps > 1.0 - 1.0 / (static_cast<double>(dA) * dA) + kRangeSlack) {
    return inapplicable("wilde", "eps > 1 - 1/dA^2");
  }
  BoundReport r;
  r.equation_tag = "wilde";
  r.add("eps", eps);
  finish(r, std::abs(cond_entropy(rho) - cond_entropy(sigma)), wilde_rhs(dA, eps));
  return r;
}

BoundReport check_mi_conjecture(const BipartiteDensityMatrix& rho,
                                const BipartiteDensityMatrix& sigma) {
  require_same_split(rho, sigma);
  if (std::min(rho.dA(), rho.dB()) < 2) return inapplicable("mi", "min(dA, dB) < 2");
  const double eps = clamp_eps(trace_distance(rho.state(), sigma.state()));
  BoundReport r;
  r.equation_tag = "mi";
  r.add("eps", eps);
  finish(r, std::abs(mutual_info(rho) - mutual_info(sigma)),
         mi_conjecture_rhs(rho.dA(), rho.dB(), eps));
  return r;
}

BoundReport check_afw(const BipartiteDensityMatrix& rho, const BipartiteDensityMatrix& sigma) {
  require_same_split(rho, sigma);
  const double eps = clamp_eps(trace_distance(rho.state(), sigma.state()));
  BoundReport r;
  r.equation_tag = "afw";
  r.add("eps", eps);
  finish(r, std::abs(cond_entropy(rho) - cond_entropy(sigma)),
         alicki_fannes_winter(rho.dA(), eps));
  return r;
}

}  // namespace qcont
