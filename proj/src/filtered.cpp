#include "qcont/filtered.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcont/simplex_opt.hpp"

namespace qcont {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

Matrix hermitize(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

void require_input(const DensityMatrix& rho, const ChannelSet& L) {
  if (rho.dim() != L.din()) {
    throw Error(ErrorKind::DimensionMismatch, "state of dimension " + std::to_string(rho.dim()) +
                                                  " for channels with din = " + std::to_string(L.din()));
  }
}

double divided_log(double a, double b) {
  if (std::abs(a - b) <= 1e-12 * std::max(a, b)) return 2.0 / (a + b);
  return (std::log(a) - std::log(b)) / (a - b);
}

enum class Inner { RelativeEntropy, MaxRelativeEntropy };

// max over L of the inner divergence of (Lambda rho, Lambda omega(w)), with a subgradient in w.
class FilteredObjective {
 public:
  FilteredObjective(const DensityMatrix& rho, const std::vector<DensityMatrix>& generators,
                    const ChannelSet& L, Inner inner)
      : inner_(inner) {
    for (const QuantumChannel& ch : L.channels()) {
      targets_.push_back(hermitize(ch.apply_operator(rho.matrix())));
      std::vector<Matrix> images;
      for (const DensityMatrix& g : generators) images.push_back(hermitize(ch.apply_operator(g.matrix())));
      images_.push_back(std::move(images));
    }
  }

  SimplexEval operator()(const Eigen::VectorXd& w) const {
    const auto n = w.size();
    SimplexEval out{-kInf, Eigen::VectorXd::Zero(n)};
    std::size_t active = 0;
    for (std::size_t j = 0; j < targets_.size(); ++j) {
      const double v = value(j, mix(j, w));
      if (v > out.value) {
        out.value = v;
        active = j;
      }
      if (std::isinf(v)) return {kInf, Eigen::VectorXd::Zero(n)};
    }
    out.subgradient = gradient(active, mix(active, w));
    return out;
  }

 private:
  Matrix mix(std::size_t j, const Eigen::VectorXd& w) const {
    Matrix b = Matrix::Zero(targets_[j].rows(), targets_[j].cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w(i) != 0.0) b += w(i) * images_[j][static_cast<std::size_t>(i)];
    }
    return b;
  }

  double value(std::size_t j, const Matrix& b) const {
    if (inner_ == Inner::RelativeEntropy) {
      const DivergenceValue d = relative_entropy_psd(targets_[j], b);
      return d.finite ? d.value : kInf;
    }
    // 2^{D_max}, convex in the weights; its log is only quasi-convex.
    const GeneralizedTop top = max_generalized_eigen(targets_[j], b);
    return top.finite ? top.value : kInf;
  }

  Eigen::VectorXd gradient(std::size_t j, const Matrix& b) const {
    const auto& images = images_[j];
    Eigen::VectorXd g(static_cast<Eigen::Index>(images.size()));
    if (inner_ == Inner::MaxRelativeEntropy) {
      const GeneralizedTop top = max_generalized_eigen(targets_[j], b);
      const Vector& u = top.vector;
      const double norm = (u.adjoint() * b * u)(0, 0).real();
      for (std::size_t i = 0; i < images.size(); ++i) {
        g(static_cast<Eigen::Index>(i)) = -top.value * (u.adjoint() * images[i] * u)(0, 0).real() / norm;
      }
      return g;
    }
    // d/dw_i [-Tr A log2 B] = -Tr(A Dlog_B[B_i]) / ln 2 on supp(B).
    const SpectralDecomposition s = eigh_unchecked(b);
    Eigen::Index r = 0;
    while (r < s.eigenvalues.size() && s.eigenvalues(r) > kTol.support) ++r;
    const Matrix basis = s.eigenvectors.leftCols(r);
    const Matrix a = basis.adjoint() * targets_[j] * basis;
    Eigen::MatrixXd kernel(r, r);
    for (Eigen::Index k = 0; k < r; ++k)
      for (Eigen::Index l = 0; l < r; ++l) kernel(k, l) = divided_log(s.eigenvalues(k), s.eigenvalues(l));
    for (std::size_t i = 0; i < images.size(); ++i) {
      const Matrix bi = basis.adjoint() * images[i] * basis;
      double acc = 0.0;
      for (Eigen::Index k = 0; k < r; ++k)
        for (Eigen::Index l = 0; l < r; ++l) acc += (a(l, k) * bi(k, l)).real() * kernel(k, l);
      g(static_cast<Eigen::Index>(i)) = -acc / kLn2;
    }
    return g;
  }

  Inner inner_;
  std::vector<Matrix> targets_;
  std::vector<std::vector<Matrix>> images_;
};

FilteredResult minimise(const DensityMatrix& rho, const FreeSet& F, const ChannelSet& L, double tol,
                        Inner inner) {
  require_input(rho, L);
  if (F.dim() != rho.dim()) throw Error(ErrorKind::DimensionMismatch, "free set dimension");
  if (!(tol > 0.0)) throw Error(ErrorKind::RangeError, "tolerance must be positive");
  const FilteredObjective objective(rho, F.generators(), L, inner);
  const auto n = static_cast<int>(F.generators().size());
  // The D_max objective is minimised on the linear scale m = 2^{D_max} >= 1, where
  // m - lb <= tol ln 2 gives log2(m) - log2(max(lb, 1)) <= tol.
  const bool linear = inner == Inner::MaxRelativeEntropy;
  SimplexMinimum m = minimize_on_simplex(objective, n, linear ? tol * kLn2 : tol);
  if (linear && !std::isinf(m.value)) {
    m.value = std::log2(std::max(m.value, 1.0));
    m.lower_bound = std::log2(std::max(m.lower_bound, 1.0));
  }
  FilteredResult out;
  out.evaluations = m.evaluations;
  out.weights = m.weights;
  out.omega = F.mixture(m.weights);
  if (std::isinf(m.value)) {
    out.value = DivergenceValue::infinite();
    out.lower_bound = kInf;
    out.infinite_everywhere = true;
    return out;
  }
  if (!m.converged) {
    throw Error(ErrorKind::ToleranceNotReached,
                "certified gap " + brief(m.value - m.lower_bound) + " above " +
                    brief(tol));
  }
  out.value = DivergenceValue::of(std::max(0.0, m.value));
  out.lower_bound = m.lower_bound;
  return out;
}

BoundReport inapplicable(std::string tag, std::string reason) {
  BoundReport r;
  r.equation_tag = std::move(tag);
  r.applicable = false;
  r.reason = std::move(reason);
  r.rhs = kInf;
  r.slack = kInf;
  return r;
}

}  // namespace

ChannelSet::ChannelSet(std::vector<QuantumChannel> channels) : channels_(std::move(channels)) {
  if (channels_.empty()) throw Error(ErrorKind::InvalidChannel, "empty channel set");
  for (const QuantumChannel& c : channels_) {
    if (c.din() != channels_.front().din()) {
      throw Error(ErrorKind::DimensionMismatch, "channels in a set must share the input dimension");
    }
  }
}

FreeSet::FreeSet(std::vector<DensityMatrix> generators, int star_center_index)
    : generators_(std::move(generators)), center_(star_center_index) {
  if (generators_.empty()) throw Error(ErrorKind::InvalidState, "empty free set");
  for (const DensityMatrix& g : generators_) {
    if (g.dim() != generators_.front().dim()) {
      throw Error(ErrorKind::DimensionMismatch, "generators of different dimension");
    }
  }
  if (center_ < 0 || center_ >= static_cast<int>(generators_.size())) {
    throw Error(ErrorKind::RangeError, "star_center_index out of range");
  }
}

DensityMatrix FreeSet::mixture(const Eigen::VectorXd& weights) const {
  if (weights.size() != static_cast<Eigen::Index>(generators_.size())) {
    throw Error(ErrorKind::DimensionMismatch, "weights do not match the generators");
  }
  Matrix m = Matrix::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < weights.size(); ++i) m += weights(i) * generators_[static_cast<std::size_t>(i)].matrix();
  return DensityMatrix::assume_valid(HermitianOperator::from_matrix(hermitize(m)));
}

double filtered_norm(const HermitianOperator& x, const ChannelSet& L) {
  if (x.dim() != L.din()) throw Error(ErrorKind::DimensionMismatch, "filtered_norm input dimension");
  double best = 0.0;
  for (const QuantumChannel& ch : L.channels()) {
    best = std::max(best, trace_norm(hermitize(ch.apply_operator(x.matrix()))));
  }
  return best;
}

DivergenceValue filtered_rel_ent_to(const DensityMatrix& rho, const DensityMatrix& omega,
                                    const ChannelSet& L) {
  require_input(rho, L);
  require_input(omega, L);
  DivergenceValue best = DivergenceValue::of(0.0);
  for (const QuantumChannel& ch : L.channels()) {
    const DivergenceValue d = rel_entropy(ch.apply(rho), ch.apply(omega));
    if (!d.finite) return d;
    best.value = std::max(best.value, d.value);
  }
  return best;
}

DivergenceValue filtered_dmax_to(const DensityMatrix& rho, const DensityMatrix& omega,
                                 const ChannelSet& L) {
  require_input(rho, L);
  require_input(omega, L);
  DivergenceValue best = DivergenceValue::of(0.0);
  for (const QuantumChannel& ch : L.channels()) {
    const DivergenceValue d = d_max(ch.apply(rho), ch.apply(omega));
    if (!d.finite) return d;
    best.value = std::max(best.value, d.value);
  }
  return best;
}

FilteredResult filtered_rel_ent(const DensityMatrix& rho, const FreeSet& F, const ChannelSet& L,
                                double tol) {
  return minimise(rho, F, L, tol, Inner::RelativeEntropy);
}

FilteredResult filtered_dmax(const DensityMatrix& rho, const FreeSet& F, const ChannelSet& L,
                             double tol) {
  return minimise(rho, F, L, tol, Inner::MaxRelativeEntropy);
}

BoundReport lemma3_check(const DensityMatrix& rho, const FreeSet& F, const ChannelSet& L, double q,
                         double tol) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::RangeError, "q must lie in (0, 1)");
  std::vector<DensityMatrix> shifted;
  for (const DensityMatrix& g : F.generators()) shifted.push_back(mix(g, F.center(), q));
  const FreeSet restricted(std::move(shifted), F.star_center_index());
  const FilteredResult full = filtered_rel_ent(rho, F, L, tol);
  const FilteredResult part = filtered_rel_ent(rho, restricted, L, tol);
  if (!full.value.finite) return inapplicable("lemma3", "D^L(rho||F) is infinite");
  const double a = full.value.value;
  const double b = part.value.value;
  BoundReport r;
  r.equation_tag = "lemma3";
  r.add("q", q);
  r.add("restricted", b);
  const double upper_slack = b - a;
  const double lower_slack = a - (b + std::log2(1.0 - q));
  r.add("upper_slack", upper_slack);
  r.add("lower_slack", lower_slack);
  r.lhs = a;
  r.rhs = b;
  r.slack = std::min(upper_slack, lower_slack);
  return r;
}

BoundReport prop9_check(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSet& F,
                        const ChannelSet& L, bool use_free_set_dmax, double tol) {
  const std::string tag = use_free_set_dmax ? "eq46" : "prop9";
  require_input(rho, L);
  require_input(sigma, L);
  const DivergenceValue dmax_term = use_free_set_dmax ? filtered_dmax(rho, F, L, tol).value
                                                      : filtered_dmax_to(rho, F.center(), L);
  if (!dmax_term.finite) return inapplicable(tag, "D_max term is infinite");
  const double eps =
      std::clamp(0.5 * filtered_norm(rho.op() - sigma.op(), L), 0.0, 1.0);
  const FilteredResult a = filtered_rel_ent(rho, F, L, tol);
  const FilteredResult b = filtered_rel_ent(sigma, F, L, tol);
  BoundReport r;
  r.equation_tag = tag;
  r.add("eps", eps);
  r.add("dmax_term", dmax_term.value);
  r.add("D^L(rho||F)", a.value.value);
  r.add("D^L(sigma||F)", b.value.value);
  r.rhs = filtered_bound_rhs(dmax_term.value, eps);
  if (!b.value.finite) {
    r.lhs = -kInf;
    r.lhs_neg_infinite = true;
    r.slack = kInf;
    return r;
  }
  r.lhs = a.value.value - b.value.value;
  r.slack = r.rhs - *r.lhs;
  return r;
}

bool contains_maximally_mixed(const FreeSet& F, double* residual) {
  const int d = F.dim();
  auto flatten = [d](const Matrix& m) {
    Eigen::VectorXd v(2 * d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        v(2 * (i * d + j)) = m(i, j).real();
        v(2 * (i * d + j) + 1) = m(i, j).imag();
      }
    return v;
  };
  std::vector<Eigen::VectorXd> atoms;
  for (const DensityMatrix& g : F.generators()) atoms.push_back(flatten(g.matrix()));
  const Eigen::VectorXd target = flatten(Matrix::Identity(d, d) / static_cast<double>(d));
  const SimplexFit fit = simplex_least_squares(atoms, target, 1e-10);
  if (residual) *residual = fit.residual;
  return fit.residual <= 1e-8;
}

BoundReport cor10_check(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSet& F,
                        const ChannelSet& L, double tol) {
  double residual = 0.0;
  if (!contains_maximally_mixed(F, &residual)) {
    BoundReport r = inapplicable("cor10", "maximally mixed state is not in the free set");
    r.add("membership_residual", residual);
    return r;
  }
  require_input(rho, L);
  require_input(sigma, L);
  const double eps = std::clamp(0.5 * filtered_norm(rho.op() - sigma.op(), L), 0.0, 1.0);
  const FilteredResult a = filtered_rel_ent(rho, F, L, tol);
  const FilteredResult b = filtered_rel_ent(sigma, F, L, tol);
  BoundReport r;
  r.equation_tag = "cor10";
  r.add("eps", eps);
  r.add("membership_residual", residual);
  r.add("D^L(rho||F)", a.value.value);
  r.add("D^L(sigma||F)", b.value.value);
  r.rhs = filtered_bound_rhs(std::log2(static_cast<double>(rho.dim())), eps);
  r.lhs = std::abs(a.value.value - b.value.value);
  r.slack = r.rhs - *r.lhs;
  return r;
}

}  // namespace qcont
