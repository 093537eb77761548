#include "qcont/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcont/bounds.hpp"
#include "qcont/random.hpp"

namespace qcont {

namespace {

constexpr double kKrausCut = 1e-12;
constexpr double kLogFloor = 1e-14;

Matrix hermitize(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_io(const QuantumChannel& a, const QuantumChannel& b, const char* op) {
  if (a.din() != b.din() || a.dout() != b.dout()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(op) + ": channels act between different spaces");
  }
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus, int din, int dout)
    : kraus_(std::move(kraus)), din_(din), dout_(dout) {
  const int n = din_ * dout_;
  choi_ = Matrix::Zero(n, n);
  Vector v(n);
  for (const Matrix& k : kraus_) {
    for (int b = 0; b < dout_; ++b)
      for (int r = 0; r < din_; ++r) v(b * din_ + r) = k(b, r);
    choi_.noalias() += v * v.adjoint();
  }
  choi_ = hermitize(choi_) / static_cast<double>(din_);
}

QuantumChannel QuantumChannel::from_kraus(std::vector<Matrix> kraus, double tol) {
  if (kraus.empty()) throw Error(ErrorKind::InvalidChannel, "empty Kraus list");
  const auto dout = static_cast<int>(kraus.front().rows());
  const auto din = static_cast<int>(kraus.front().cols());
  check_factor_dim(din, "din");
  check_factor_dim(dout, "dout");
  Matrix completeness = Matrix::Zero(din, din);
  for (const Matrix& k : kraus) {
    if (k.rows() != dout || k.cols() != din) {
      throw Error(ErrorKind::DimensionMismatch, "Kraus operator of shape " + shape(k) +
                                                    " in a family of shape " + shape(kraus.front()));
    }
    completeness.noalias() += k.adjoint() * k;
  }
  const double residual = (completeness - Matrix::Identity(din, din)).cwiseAbs().maxCoeff();
  if (!(residual <= tol)) {
    throw Error(ErrorKind::InvalidChannel,
                "sum K^dagger K deviates from identity by " + brief(residual));
  }
  return QuantumChannel(std::move(kraus), din, dout);
}

QuantumChannel QuantumChannel::from_choi(const Matrix& choi, int din, int dout, double tol) {
  check_factor_dim(din, "din");
  check_factor_dim(dout, "dout");
  const int n = din * dout;
  if (choi.rows() != n || choi.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix of shape " + shape(choi) +
                                                  " for din*dout = " + std::to_string(n));
  }
  const HermitianOperator j = HermitianOperator::from_matrix(choi);
  const SpectralDecomposition s = eigh(j);
  if (s.eigenvalues(n - 1) < -tol) {
    throw Error(ErrorKind::InvalidChannel, "Choi matrix is not positive semidefinite");
  }
  const Matrix reduced = partial_trace(j.matrix(), dout, din, Subsystem::B);
  const double tp = (reduced - Matrix::Identity(din, din) / din).cwiseAbs().maxCoeff();
  if (tp > tol) {
    throw Error(ErrorKind::InvalidChannel, "Choi matrix does not describe a trace-preserving map");
  }
  std::vector<Matrix> kraus;
  for (int i = 0; i < n; ++i) {
    const double lambda = s.eigenvalues(i);
    if (lambda <= kLogFloor) break;
    Matrix k(dout, din);
    const double scale = std::sqrt(din * lambda);
    for (int b = 0; b < dout; ++b)
      for (int r = 0; r < din; ++r) k(b, r) = scale * s.eigenvectors(b * din + r, i);
    kraus.push_back(std::move(k));
  }
  return from_kraus(std::move(kraus), 10.0 * tol);
}

QuantumChannel QuantumChannel::identity(int d) {
  check_factor_dim(d, "d");
  return QuantumChannel({Matrix::Identity(d, d)}, d, d);
}

QuantumChannel QuantumChannel::completely_depolarizing(int din, int dout) {
  check_factor_dim(din, "din");
  check_factor_dim(dout, "dout");
  std::vector<Matrix> kraus;
  const double w = 1.0 / std::sqrt(static_cast<double>(dout));
  for (int b = 0; b < dout; ++b)
    for (int a = 0; a < din; ++a) {
      Matrix k = Matrix::Zero(dout, din);
      k(b, a) = w;
      kraus.push_back(std::move(k));
    }
  return QuantumChannel(std::move(kraus), din, dout);
}

QuantumChannel QuantumChannel::amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorKind::RangeError, "gamma outside [0,1]");
  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel({k0, k1}, 2, 2);
}

QuantumChannel QuantumChannel::classical(const Eigen::MatrixXd& transition) {
  const auto dout = static_cast<int>(transition.rows());
  const auto din = static_cast<int>(transition.cols());
  check_factor_dim(din, "din");
  check_factor_dim(dout, "dout");
  if (transition.minCoeff() < 0.0) throw Error(ErrorKind::InvalidChannel, "negative transition probability");
  std::vector<Matrix> kraus;
  for (int a = 0; a < din; ++a) {
    if (std::abs(transition.col(a).sum() - 1.0) > 1e-9) {
      throw Error(ErrorKind::InvalidChannel, "transition column " + std::to_string(a) + " does not sum to 1");
    }
    for (int b = 0; b < dout; ++b) {
      if (transition(b, a) == 0.0) continue;
      Matrix k = Matrix::Zero(dout, din);
      k(b, a) = std::sqrt(transition(b, a));
      kraus.push_back(std::move(k));
    }
  }
  return from_kraus(std::move(kraus));
}

DensityMatrix QuantumChannel::choi_state() const {
  return DensityMatrix::assume_valid(HermitianOperator::from_matrix(choi_));
}

Matrix QuantumChannel::apply_operator(const Matrix& x) const {
  if (x.rows() != din_ || x.cols() != din_) {
    throw Error(ErrorKind::DimensionMismatch,
                "input " + shape(x) + " for a channel with din = " + std::to_string(din_));
  }
  Matrix out = Matrix::Zero(dout_, dout_);
  for (const Matrix& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

DensityMatrix QuantumChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix::assume_valid(HermitianOperator::from_matrix(hermitize(apply_operator(rho.matrix()))));
}

Matrix QuantumChannel::adjoint(const Matrix& y) const {
  if (y.rows() != dout_ || y.cols() != dout_) {
    throw Error(ErrorKind::DimensionMismatch, "adjoint input " + shape(y));
  }
  Matrix out = Matrix::Zero(din_, din_);
  for (const Matrix& k : kraus_) out.noalias() += k.adjoint() * y * k;
  return out;
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.din() != first.dout()) {
    throw Error(ErrorKind::DimensionMismatch, "composition: output " + std::to_string(first.dout()) +
                                                  " feeds input " + std::to_string(second.din()));
  }
  std::vector<Matrix> kraus;
  for (const Matrix& s : second.kraus())
    for (const Matrix& f : first.kraus()) {
      Matrix k = s * f;
      if (k.norm() >= kKrausCut) kraus.push_back(std::move(k));
    }
  if (kraus.empty()) kraus.push_back(Matrix::Zero(second.dout(), first.din()));
  return QuantumChannel::from_kraus(std::move(kraus));
}

BipartiteDensityMatrix apply_extended(const QuantumChannel& channel,
                                      const BipartiteDensityMatrix& rho_ar) {
  if (rho_ar.dA() != channel.din()) {
    throw Error(ErrorKind::DimensionMismatch, "first factor has dimension " + std::to_string(rho_ar.dA()) +
                                                  ", channel expects " + std::to_string(channel.din()));
  }
  const int dr = rho_ar.dB();
  const int dout = channel.dout();
  if (static_cast<long>(dout) * dr > kMaxOperatorDim) {
    throw Error(ErrorKind::InvalidDimension, "extended output exceeds the operator cap");
  }
  const Matrix identity = Matrix::Identity(dr, dr);
  Matrix out = Matrix::Zero(dout * dr, dout * dr);
  for (const Matrix& k : channel.kraus()) {
    Matrix big = Matrix::Zero(dout * dr, channel.din() * dr);
    for (int i = 0; i < dout; ++i)
      for (int j = 0; j < channel.din(); ++j) big.block(i * dr, j * dr, dr, dr) = k(i, j) * identity;
    out.noalias() += big * rho_ar.state().matrix() * big.adjoint();
  }
  return BipartiteDensityMatrix(
      DensityMatrix::assume_valid(HermitianOperator::from_matrix(hermitize(out))), dout, dr);
}

int environment_dim(const QuantumChannel& channel) {
  int count = 0;
  for (const Matrix& k : channel.kraus()) {
    if (k.norm() >= kKrausCut) ++count;
  }
  return count;
}

QuantumChannel complementary(const QuantumChannel& channel) {
  std::vector<const Matrix*> kept;
  for (const Matrix& k : channel.kraus()) {
    if (k.norm() >= kKrausCut) kept.push_back(&k);
  }
  const auto de = static_cast<int>(kept.size());
  check_factor_dim(de, "environment dimension");
  std::vector<Matrix> kraus;
  for (int b = 0; b < channel.dout(); ++b) {
    Matrix f(de, channel.din());
    for (int i = 0; i < de; ++i) f.row(i) = kept[static_cast<std::size_t>(i)]->row(b);
    kraus.push_back(std::move(f));
  }
  return QuantumChannel::from_kraus(std::move(kraus));
}

DivergenceValue channel_dmax_stabilised(const QuantumChannel& a, const QuantumChannel& b) {
  require_same_io(a, b, "channel_dmax_stabilised");
  return d_max(a.choi_state(), b.choi_state());
}

namespace {

// One restart of the alternating ascent; returns the generalised eigenvalue ratio.
std::pair<double, Vector> dmax_ascent(const QuantumChannel& a, const QuantumChannel& b,
                                      const Matrix& start) {
  Matrix rho = start;
  double best = 0.0;
  Vector best_input;
  for (int it = 0; it < 500; ++it) {
    const GeneralizedTop outer = max_generalized_eigen(hermitize(a.apply_operator(rho)),
                                                       hermitize(b.apply_operator(rho)));
    if (!outer.finite) return {std::numeric_limits<double>::infinity(), best_input};
    if (it > 0 && outer.value <= best * (1.0 + 1e-13)) {
      best = std::max(best, outer.value);
      break;
    }
    best = outer.value;
    const Matrix proj = outer.vector * outer.vector.adjoint();
    const GeneralizedTop inner =
        max_generalized_eigen(hermitize(a.adjoint(proj)), hermitize(b.adjoint(proj)));
    if (!inner.finite) return {std::numeric_limits<double>::infinity(), inner.vector};
    if (inner.vector.norm() == 0.0) break;
    best_input = inner.vector.normalized();
    rho = best_input * best_input.adjoint();
  }
  return {best, best_input};
}

}  // namespace

UnstabilisedEstimate channel_dmax_unstabilised(const QuantumChannel& a, const QuantumChannel& b,
                                               int restarts, std::uint64_t seed) {
  require_same_io(a, b, "channel_dmax_unstabilised");
  const int d = a.din();
  UnstabilisedEstimate out;
  out.value = DivergenceValue::of(0.0);
  double best = 0.0;
  const int total = std::max(restarts, 0) + 1;
  for (int r = 0; r < total; ++r) {
    Matrix start;
    if (r == 0) {
      start = Matrix::Identity(d, d) / static_cast<double>(d);
    } else {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      start = (r % 2 == 1) ? haar_pure(d, rng).matrix() : ginibre_state(d, d, rng).matrix();
    }
    auto [value, input] = dmax_ascent(a, b, start);
    if (std::isinf(value)) {
      out.value = DivergenceValue::infinite();
      out.best_input = input;
      out.restarts = r + 1;
      return out;
    }
    if (value > best || r == 0) {
      best = value;
      out.best_input = input;
    }
  }
  out.restarts = total;
  out.value = DivergenceValue::of(std::max(0.0, std::log2(std::max(best, 1e-300))));
  return out;
}

DiamondBracket diamond_bracket(const QuantumChannel& a, const QuantumChannel& b) {
  require_same_io(a, b, "diamond_bracket");
  const double lower = trace_norm(Matrix(a.choi() - b.choi()));
  return {lower, a.din() * lower};
}

namespace {

struct EntropyAndLog {
  double entropy;
  Matrix log2m;
};

EntropyAndLog entropy_and_log(const Matrix& x) {
  const SpectralDecomposition s = eigh_unchecked(hermitize(x));
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) entropy += entropy_term(s.eigenvalues(i));
  Matrix log2m = spectral_map(s, [](double v) { return std::log2(std::max(v, kLogFloor)); });
  return {entropy, std::move(log2m)};
}

double entropy_of(const Matrix& x) {
  const RealVector ev = eigvalsh_unchecked(hermitize(x));
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += entropy_term(ev(i));
  return s;
}

// f(rho) = S(a(rho)) - S(b(rho)) for channels a, b with a common input.
struct EntropyGap {
  const QuantumChannel& a;
  const QuantumChannel& b;

  double value(const Matrix& rho) const {
    return entropy_of(a.apply_operator(rho)) - entropy_of(b.apply_operator(rho));
  }

  // Trace preservation makes the log2(e) I terms of both gradients cancel.
  std::pair<double, Matrix> value_and_gradient(const Matrix& rho) const {
    const EntropyAndLog ea = entropy_and_log(a.apply_operator(rho));
    const EntropyAndLog eb = entropy_and_log(b.apply_operator(rho));
    Matrix g = hermitize(-a.adjoint(ea.log2m) + b.adjoint(eb.log2m));
    return {ea.entropy - eb.entropy, std::move(g)};
  }
};

struct AscentOutcome {
  AscentResult result;
  bool converged;
};

// Exact line search of phi on [0, tmax]: golden section on the values, then bisection on
// the sign of the directional derivative once the ascent drops below value resolution.
double line_search(const EntropyGap& f, const Matrix& rho, const Matrix& dir, double tmax,
                   double value) {
  constexpr double kInvPhi = 0.6180339887498949;
  auto phi = [&](double t) { return f.value(rho + t * dir); };
  double lo = 0.0;
  double hi = tmax;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (hi - lo > 1e-12 * tmax) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = phi(x2);
    }
  }
  double t = 0.5 * (lo + hi);
  double ft = phi(t);
  const double f_end = phi(tmax);
  if (f_end > ft) {
    t = tmax;
    ft = f_end;
  }
  if (ft > value) return t;
  auto slope = [&](double u) {
    return (f.value_and_gradient(rho + u * dir).second * dir).trace().real();
  };
  double a = 0.0;
  double b = tmax;
  if (slope(b) >= 0.0) return tmax;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (a + b);
    if (slope(mid) > 0.0) a = mid; else b = mid;
  }
  if (!(a > 0.0) || phi(a) < value - 1e-14 * std::max(1.0, std::abs(value))) return 0.0;
  return a;
}

// Conditional gradient over density matrices; the linear maximiser is the top
// eigenvector of the gradient.
AscentOutcome frank_wolfe(const EntropyGap& f, Matrix rho, double tol, int max_iterations) {
  AscentOutcome out{};
  out.converged = false;
  auto [value, grad] = f.value_and_gradient(rho);
  double gap = 0.0;
  int it = 0;
  for (;; ++it) {
    const SpectralDecomposition s = eigh_unchecked(grad);
    gap = s.eigenvalues(0) - (grad * rho).trace().real();
    if (gap <= tol) {
      out.converged = true;
      break;
    }
    if (it >= max_iterations) break;
    const Vector top = s.eigenvectors.col(0);
    const Matrix dir = top * top.adjoint() - rho;
    const double t = line_search(f, rho, dir, 1.0, value);
    if (!(t > 0.0)) break;  // no numerically resolvable ascent left
    rho = hermitize(rho + t * dir);
    std::tie(value, grad) = f.value_and_gradient(rho);
    out.result.trajectory.push_back(value);
  }
  out.result.value = value;
  out.result.gap = std::max(gap, 0.0);
  out.result.iterations = it;
  out.result.argmax = DensityMatrix::assume_valid(HermitianOperator::from_matrix(rho));
  return out;
}

}  // namespace

AscentResult u_theta(const QuantumChannel& channel, const QuantumChannel& theta, double tol,
                     int max_iterations) {
  if (theta.din() != channel.dout()) {
    throw Error(ErrorKind::DimensionMismatch, "degrading map input must match the channel output");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::RangeError, "tolerance must be positive");
  const QuantumChannel degraded = compose(theta, channel);
  const EntropyGap f{channel, degraded};
  const int d = channel.din();
  AscentOutcome run =
      frank_wolfe(f, Matrix::Identity(d, d) / static_cast<double>(d), tol, max_iterations);
  if (!run.converged) {
    throw Error(ErrorKind::ToleranceNotReached,
                "duality gap " + brief(run.result.gap) + " after " +
                    std::to_string(run.result.iterations) + " iterations");
  }
  return run.result;
}

AscentResult coherent_info_lower(const QuantumChannel& channel, int restarts, double tol,
                                 std::uint64_t seed) {
  const QuantumChannel env = complementary(channel);
  const EntropyGap f{channel, env};
  const int d = channel.din();
  AscentResult best;
  bool have = false;
  const int total = std::max(restarts, 0) + 1;
  for (int r = 0; r < total; ++r) {
    Matrix start;
    if (r == 0) {
      start = Matrix::Identity(d, d) / static_cast<double>(d);
    } else {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
      start = (r % 2 == 1) ? ginibre_state(d, d, rng).matrix() : haar_pure(d, rng).matrix();
    }
    AscentOutcome run = frank_wolfe(f, start, tol, 2000);
    if (!have || run.result.value > best.value) {
      best = std::move(run.result);
      have = true;
    }
  }
  return best;
}

DegradabilityReport degradability_bounds(const QuantumChannel& channel,
                                         const QuantumChannel& theta, std::optional<double> eps,
                                         const DegradabilityOptions& options) {
  const QuantumChannel env = complementary(channel);
  if (theta.din() != channel.dout() || theta.dout() != env.dout()) {
    throw Error(ErrorKind::DimensionMismatch,
                "degrading map must act " + std::to_string(channel.dout()) + " -> " +
                    std::to_string(env.dout()));
  }
  const QuantumChannel degraded = compose(theta, channel);
  DegradabilityReport rep;
  rep.env_dim = env.dout();
  const DiamondBracket bracket = diamond_bracket(env, degraded);
  rep.eps_lower = std::min(1.0, 0.5 * bracket.lower);
  rep.eps_upper = std::min(1.0, 0.5 * bracket.upper);
  std::string blocked;
  if (eps) {
    if (!(*eps >= 0.0 && *eps <= 1.0)) throw Error(ErrorKind::RangeError, "eps outside [0,1]");
    if (*eps < rep.eps_lower - 1e-12) blocked = "eps is below the certified lower end of the bracket";
  }
  rep.eps = eps.value_or(rep.eps_upper);

  const AscentResult u = u_theta(channel, theta, options.tol);
  rep.u_theta = u.value;
  rep.u_theta_gap = u.gap;
  rep.ic_lower = coherent_info_lower(channel, options.restarts, options.tol, options.seed).value;

  const QuantumChannel flat = QuantumChannel::completely_depolarizing(channel.din(), env.dout());
  const double stab = channel_dmax_stabilised(degraded, flat).value;
  const double unstab =
      channel_dmax_unstabilised(degraded, flat, options.dmax_restarts, options.seed).value.value;
  const double ms = std::exp2(stab);
  rep.dmax_channel_terms.stabilised = stab;
  rep.dmax_channel_terms.unstabilised = unstab;
  rep.dmax_channel_terms.m_used = std::min(static_cast<double>(rep.env_dim), ms);

  // U_Theta enters through value + gap so that the upper bounds stay sound.
  const double u_sound = rep.u_theta + rep.u_theta_gap;
  auto fill = [&](DegradabilityReport::Bound& bound, auto compute) {
    if (!blocked.empty()) {
      bound.reason = blocked;
      return;
    }
    try {
      bound.value = compute();
      bound.applicable = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RangeError) throw;
      bound.reason = e.what();
    }
  };
  fill(rep.q_upper_utheta, [&] { return q_upper_utheta(u_sound, rep.env_dim, rep.eps); });
  fill(rep.q_upper_ic, [&] { return q_upper_ic(rep.ic_lower, rep.env_dim, rep.eps); });
  fill(rep.q_upper_utheta_refined, [&] { return q_upper_utheta_refined(u_sound, ms, rep.eps); });
  fill(rep.q_upper_ic_refined,
       [&] { return q_upper_ic_refined(rep.ic_lower, rep.dmax_channel_terms.m_used, ms, rep.eps); });
  return rep;
}

}  // namespace qcont
