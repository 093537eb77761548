#include "helpers.hpp"

#include "qcont/channels.hpp"

using namespace qt;

namespace {

// Lambda(rho)_{bb'} = din sum_{rr'} J[(b,r),(b',r')] rho_{rr'}, J output-first.
Matrix choi_contract(const Matrix& J, int din, int dout, const Matrix& rho) {
  Matrix out = Matrix::Zero(dout, dout);
  for (int b = 0; b < dout; ++b)
    for (int bp = 0; bp < dout; ++bp)
      for (int r = 0; r < din; ++r)
        for (int rp = 0; rp < din; ++rp)
          out(b, bp) += static_cast<double>(din) * J(b * din + r, bp * din + rp) * rho(r, rp);
  return out;
}

// log2 of the smallest m with m J2 - J1 >= 0, by bisection (J2 full rank).
double dmax_bisection(const Matrix& J1, const Matrix& J2) {
  double lo = 0.0;
  double hi = 1.0;
  while (min_eig(hi * J2 - J1) < 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (min_eig(mid * J2 - J1) >= 0.0) hi = mid; else lo = mid;
  }
  return std::log2(hi);
}

double ad_capacity_scan(double gamma) {
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double p = i / 100000.0;
    best = std::max(best, h2((1 - gamma) * p) - h2(gamma * p));
  }
  return best;
}

ErrorKind kind_of(auto f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::NumericalFailure;  // sentinel; the callers never expect this
}

}  // namespace

TEST_CASE("channel construction rejects bad input") {
  Matrix k = Matrix::Identity(2, 2) * 0.5;
  CHECK(kind_of([&] { QuantumChannel::from_kraus({k}); }) == ErrorKind::InvalidChannel);
  CHECK(kind_of([&] { QuantumChannel::from_kraus({}); }) == ErrorKind::InvalidChannel);
  CHECK(kind_of([&] { QuantumChannel::from_kraus({Matrix::Identity(2, 2), Matrix::Identity(3, 2)}); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { QuantumChannel::amplitude_damping(1.5); }) == ErrorKind::RangeError);
  Eigen::MatrixXd t(2, 2);
  t << 0.5, 0.2, 0.4, 0.8;
  CHECK(kind_of([&] { QuantumChannel::classical(t); }) == ErrorKind::InvalidChannel);
  CHECK(kind_of([] {
          QuantumChannel::from_choi(Matrix::Identity(4, 4) * 0.5, 2, 2);
        }) == ErrorKind::InvalidChannel);
}

TEST_CASE("Choi state is output-first and matches the Kraus action") {
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    const int din = 1 + t % 3;
    const int dout = 1 + (t / 3) % 3;
    const QuantumChannel ch = random_channel(din, dout, (din + dout - 1) / dout + t % 3, rng);
    const Matrix& J = ch.choi();
    CHECK(J.trace().real() == doctest::Approx(1.0));
    CHECK(min_eig(J) >= -1e-12);
    const DensityMatrix rho = ginibre_state(din, din, rng);
    CHECK(max_abs(choi_contract(J, din, dout, rho.matrix()) - ch.apply(rho).matrix()) <= 1e-12);
    const QuantumChannel back = QuantumChannel::from_choi(J, din, dout);
    CHECK(max_abs(back.apply(rho).matrix() - ch.apply(rho).matrix()) <= 1e-10);
    CHECK(max_abs(back.choi() - J) <= 1e-10);
  }
  // identity: J = Phi, so J(b*d+r, b'*d+r') = [b==r][b'==r']/d
  const Matrix J = QuantumChannel::identity(2).choi();
  CHECK(std::abs(J(0, 3) - 0.5) <= 1e-15);
  CHECK(std::abs(J(1, 1)) <= 1e-15);
}

TEST_CASE("adjoint, composition and extension") {
  Rng rng(12);
  const QuantumChannel a = random_channel(2, 3, 2, rng);
  const QuantumChannel b = random_channel(3, 2, 3, rng);
  const DensityMatrix rho = ginibre_state(2, 2, rng);
  const Matrix y = random_hermitian(3, rng);
  const std::complex<double> lhs = (y * a.apply(rho).matrix()).trace();
  const std::complex<double> rhs = (a.adjoint(y) * rho.matrix()).trace();
  CHECK(std::abs(lhs - rhs) <= 1e-12);
  CHECK(max_abs(compose(b, a).apply(rho).matrix() - b.apply(a.apply(rho)).matrix()) <= 1e-12);
  CHECK(kind_of([&] { compose(a, a); }) == ErrorKind::DimensionMismatch);
  // (Lambda (x) id) on a product state is Lambda(x) (x) y
  const DensityMatrix r2 = ginibre_state(2, 2, rng);
  const BipartiteDensityMatrix out = apply_extended(a, product_state(rho, r2));
  CHECK(max_abs(out.state().matrix() - tensor(a.apply(rho), r2).matrix()) <= 1e-12);
  // applied to Phi it gives the Choi state
  CHECK(max_abs(apply_extended(a, max_entangled(2)).state().matrix() - a.choi()) <= 1e-12);
}

TEST_CASE("classical and depolarizing channels") {
  Eigen::MatrixXd t(2, 2);
  t << 0.9, 0.3, 0.1, 0.7;
  const DensityMatrix out = QuantumChannel::classical(t).apply(diag2(0.5, 0.5));
  CHECK(out.matrix()(0, 0).real() == doctest::Approx(0.6));
  CHECK(std::abs(out.matrix()(0, 1)) <= 1e-15);
  const DensityMatrix dep = QuantumChannel::completely_depolarizing(2, 3).apply(diag2(1, 0));
  CHECK(max_abs(dep.matrix() - DensityMatrix::maximally_mixed(3).matrix()) <= 1e-15);
}

TEST_CASE("complementary channel") {
  Rng rng(13);
  for (int t = 0; t < 30; ++t) {
    const QuantumChannel ch = random_channel(2 + t % 2, 2, 2 + t % 2, rng);
    const QuantumChannel c = complementary(ch);
    CHECK(c.dout() == environment_dim(ch));
    const DensityMatrix psi = haar_pure(ch.din(), rng);
    CHECK(vn_entropy(ch.apply(psi)) == doctest::Approx(vn_entropy(c.apply(psi))).epsilon(1e-9));
    // double complement preserves output entropy on pure inputs as well
    CHECK(vn_entropy(complementary(c).apply(psi)) == doctest::Approx(vn_entropy(c.apply(psi))).epsilon(1e-9));
  }
  const double g = 0.3;
  const QuantumChannel c = complementary(QuantumChannel::amplitude_damping(g));
  const QuantumChannel flip = QuantumChannel::amplitude_damping(1 - g);
  for (int t = 0; t < 10; ++t) {
    const DensityMatrix rho = ginibre_state(2, 2, rng);
    CHECK(max_abs(c.apply(rho).matrix() - flip.apply(rho).matrix()) <= 1e-12);
  }
  CHECK(environment_dim(QuantumChannel::amplitude_damping(0.0)) == 1);
}

TEST_CASE("stabilised channel D_max") {
  const QuantumChannel id = QuantumChannel::identity(2);
  const QuantumChannel dep = QuantumChannel::completely_depolarizing(2, 2);
  CHECK(channel_dmax_stabilised(id, dep).value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(channel_dmax_stabilised(dep, id).finite == false);
  CHECK(channel_dmax_stabilised(id, id).value == doctest::Approx(0.0).epsilon(1e-12));
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const QuantumChannel a = random_channel(2, 2, 2, rng);
    const QuantumChannel b = random_channel(2, 2, 4, rng);
    const DivergenceValue v = channel_dmax_stabilised(a, b);
    REQUIRE(v.finite);
    CHECK(std::abs(v.value - dmax_bisection(a.choi(), b.choi())) <= 1e-8);
    const UnstabilisedEstimate u = channel_dmax_unstabilised(a, b, 5, t);
    CHECK(u.value.value <= v.value + 1e-9);
    const DensityMatrix psi = DensityMatrix::pure(u.best_input);
    CHECK(std::abs(d_max(a.apply(psi), b.apply(psi)).value - u.value.value) <= 1e-8);
  }
  const UnstabilisedEstimate u = channel_dmax_unstabilised(id, dep, 10, 1);
  CHECK(u.value.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("diamond bracket") {
  const DiamondBracket b = diamond_bracket(QuantumChannel::identity(2),
                                           QuantumChannel::completely_depolarizing(2, 2));
  CHECK(b.lower == doctest::Approx(1.5));
  CHECK(b.upper == doctest::Approx(3.0));
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const QuantumChannel a = random_channel(2, 3, 2, rng);
    const QuantumChannel c = random_channel(2, 3, 2, rng);
    const DiamondBracket br = diamond_bracket(a, c);
    CHECK(br.lower <= br.upper);
    // any input gives a lower bound on the diamond norm; it must not exceed the upper end
    const DensityMatrix psi = haar_pure(2, rng);
    CHECK(trace_norm(HermitianOperator::from_matrix(a.apply(psi).matrix() - c.apply(psi).matrix())) <=
          br.upper + 1e-12);
  }
}

TEST_CASE("u_theta and coherent information") {
  const QuantumChannel ad = QuantumChannel::amplitude_damping(0.25);
  const AscentResult zero = u_theta(ad, QuantumChannel::identity(2), 1e-9);
  CHECK(std::abs(zero.value) <= 1e-12);
  const QuantumChannel theta = QuantumChannel::amplitude_damping(2.0 / 3.0);
  const AscentResult u = u_theta(ad, theta, 1e-9);
  const double scan = ad_capacity_scan(0.25);
  CHECK(std::abs(u.value - scan) <= 1e-4);
  CHECK(u.gap >= 0.0);
  CHECK(u.gap <= 1e-9);
  for (std::size_t i = 1; i < u.trajectory.size(); ++i) CHECK(u.trajectory[i] >= u.trajectory[i - 1] - 1e-12);
  const AscentResult ic = coherent_info_lower(ad, 4, 1e-9, 3);
  CHECK(std::abs(ic.value - u.value) <= 2e-5);
  CHECK(ic.value <= u.value + u.gap + 1e-9);
  CHECK(kind_of([&] { u_theta(ad, QuantumChannel::identity(3), 1e-9); }) == ErrorKind::DimensionMismatch);
  Rng rng(16);
  const QuantumChannel generic = random_channel(3, 3, 2, rng);
  const QuantumChannel other = random_channel(3, 2, 2, rng);
  CHECK(kind_of([&] { u_theta(generic, other, 1e-14, 1); }) == ErrorKind::ToleranceNotReached);
  const AscentResult loose = u_theta(generic, other, 1e-3);
  CHECK(loose.gap <= 1e-3);
  for (std::size_t i = 1; i < loose.trajectory.size(); ++i)
    CHECK(loose.trajectory[i] >= loose.trajectory[i - 1] - 1e-10);
}

TEST_CASE("degradability report") {
  const QuantumChannel ad = QuantumChannel::amplitude_damping(0.25);
  const QuantumChannel theta = QuantumChannel::amplitude_damping(2.0 / 3.0);
  const DegradabilityReport exact = degradability_bounds(ad, theta);
  CHECK(exact.eps_upper <= 1e-10);
  CHECK(exact.env_dim == 2);
  REQUIRE(exact.q_upper_utheta.applicable);
  REQUIRE(exact.q_upper_ic.applicable);
  CHECK(exact.q_upper_utheta.value == doctest::Approx(exact.u_theta + exact.u_theta_gap).epsilon(1e-8));
  CHECK(exact.q_upper_ic.value == doctest::Approx(exact.ic_lower).epsilon(1e-8));

  // a noisier degrading map: eps grows and every bound stays above the lower estimate
  const QuantumChannel noisy = QuantumChannel::amplitude_damping(0.5);
  const DegradabilityReport r = degradability_bounds(ad, noisy);
  CHECK(r.eps_lower > 0.0);
  CHECK(r.eps_lower <= r.eps_upper);
  CHECK(r.eps == doctest::Approx(std::min(1.0, r.eps_upper)));
  for (const auto* b : {&r.q_upper_utheta, &r.q_upper_ic, &r.q_upper_utheta_refined, &r.q_upper_ic_refined}) {
    if (b->applicable) CHECK(b->value >= r.ic_lower - 1e-9);
    else CHECK_FALSE(b->reason.empty());
  }
  CHECK(r.dmax_channel_terms.unstabilised <= r.dmax_channel_terms.stabilised + 1e-9);
  CHECK(kind_of([&] { degradability_bounds(ad, noisy, 1.5); }) == ErrorKind::RangeError);
  const DegradabilityReport blocked = degradability_bounds(ad, noisy, 0.0);
  CHECK_FALSE(blocked.q_upper_ic.applicable);
}
