#include "helpers.hpp"

#include "qcont/divergences.hpp"

using namespace qt;

TEST_CASE("eigh returns descending eigenvalues") {
  auto id = eigh(HermitianOperator::identity(2));
  CHECK(id.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(id.eigenvalues(1) == doctest::Approx(1.0));

  const double d[2] = {3.0, -1.0};
  auto s = eigh(HermitianOperator::diagonal(d));
  CHECK(s.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(-1.0));

  auto x = eigh(HermitianOperator::from_matrix(pauli_x()));
  CHECK(x.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(x.eigenvalues(1) == doctest::Approx(-1.0));
}

TEST_CASE("eigh reconstructs and has orthonormal columns") {
  Rng rng(7);
  for (int d = 1; d <= 8; ++d) {
    const Matrix x = random_hermitian(d, rng);
    const auto s = eigh(HermitianOperator::from_matrix(x));
    const Matrix back = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint();
    CHECK(max_abs(back - x) <= 1e-9 * (1.0 + max_abs(x)));
    CHECK(max_abs(s.eigenvectors.adjoint() * s.eigenvectors - Matrix::Identity(d, d)) <= 1e-9);
    for (int i = 1; i < d; ++i) CHECK(s.eigenvalues(i - 1) >= s.eigenvalues(i));
  }
}

TEST_CASE("hermiticity and dimension validation") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianOperator::from_matrix(m), Error);
  try {
    HermitianOperator::from_matrix(m);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitian);
  }
  CHECK_THROWS_AS(HermitianOperator::from_matrix(Matrix::Zero(2, 3)), Error);
  CHECK_THROWS_AS(check_factor_dim(65, "d"), Error);
  CHECK_NOTHROW(check_factor_dim(64, "d"));

  const double bad[2] = {1.2, -0.2};
  CHECK_THROWS_AS(DensityMatrix::diagonal(bad), Error);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(2.0 * Matrix::Identity(2, 2)), Error);
}

TEST_CASE("positive part examples") {
  const double d[2] = {1.0, -1.0};
  const Matrix p = positive_part(HermitianOperator::diagonal(d)).matrix();
  CHECK(max_abs(p - diag2(1.0, 0.0).matrix()) < 1e-12);
  CHECK(max_abs(positive_part(HermitianOperator::zero(3)).matrix()) == 0.0);
  const Matrix px = positive_part(HermitianOperator::from_matrix(pauli_x())).matrix();
  CHECK(max_abs(px - 0.5 * (Matrix::Identity(2, 2) + pauli_x())) < 1e-12);
}

TEST_CASE("positive part invariants on random operators") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 6;
    const HermitianOperator x = HermitianOperator::from_matrix(random_hermitian(d, rng));
    const Matrix pos = positive_part(x).matrix();
    const Matrix neg = positive_part(-x).matrix();
    CHECK(min_eig(pos - x.matrix()) >= -1e-9);
    CHECK(min_eig(pos) >= -1e-9);
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.matrix(), Eigen::EigenvaluesOnly);
    const double abs_sum = es.eigenvalues().cwiseAbs().sum();
    CHECK(pos.trace().real() + neg.trace().real() == doctest::Approx(abs_sum).epsilon(1e-9));
    CHECK(trace_norm(x) == doctest::Approx(abs_sum).epsilon(1e-9));
    CHECK(positive_part_trace(x.matrix()) == doctest::Approx(pos.trace().real()).epsilon(1e-9));
  }
}

TEST_CASE("partial trace examples") {
  Rng rng(3);
  const DensityMatrix sB = ginibre_state(3, 3, rng);
  const auto prod = product_state(DensityMatrix::maximally_mixed(2), sB);
  CHECK(max_abs(partial_trace(prod, Subsystem::B).matrix() - sB.matrix()) < 1e-12);
  for (int d : {2, 3, 4}) {
    const auto phi = max_entangled(d);
    const Matrix id = Matrix::Identity(d, d) / d;
    CHECK(max_abs(partial_trace(phi, Subsystem::A).matrix() - id) < 1e-12);
    CHECK(max_abs(partial_trace(phi, Subsystem::B).matrix() - id) < 1e-12);
  }
}

TEST_CASE("partial trace matches a four-index loop") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int dA = 2 + trial % 3;
    const int dB = 2 + (trial / 3) % 3;
    const BipartiteDensityMatrix rho(ginibre_state(dA * dB, 1 + trial % (dA * dB), rng), dA, dB);
    const Matrix& m = rho.state().matrix();
    Matrix a = Matrix::Zero(dA, dA);
    Matrix b = Matrix::Zero(dB, dB);
    for (int i = 0; i < dA; ++i)
      for (int j = 0; j < dA; ++j)
        for (int k = 0; k < dB; ++k)
          for (int l = 0; l < dB; ++l) {
            if (k == l) a(i, j) += m(i * dB + k, j * dB + l);
            if (i == j) b(k, l) += m(i * dB + k, j * dB + l);
          }
    CHECK(max_abs(partial_trace(rho, Subsystem::A).matrix() - a) < 1e-12);
    CHECK(max_abs(partial_trace(rho, Subsystem::B).matrix() - b) < 1e-12);
    CHECK(partial_trace(rho, Subsystem::B).op().trace() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("tensor examples and factor recovery") {
  const auto i4 = tensor(HermitianOperator::identity(2), HermitianOperator::identity(2));
  CHECK(max_abs(i4.matrix() - Matrix::Identity(4, 4)) == 0.0);
  const Matrix e = tensor(diag2(1, 0).op(), diag2(0, 1).op()).matrix();
  const double want[4] = {0, 1, 0, 0};
  CHECK(max_abs(e - HermitianOperator::diagonal(want).matrix()) == 0.0);
  const Matrix zz = tensor(HermitianOperator::from_matrix(pauli_z()), HermitianOperator::from_matrix(pauli_z())).matrix();
  const double zwant[4] = {1, -1, -1, 1};
  CHECK(max_abs(zz - HermitianOperator::diagonal(zwant).matrix()) == 0.0);

  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix a = ginibre_state(2 + trial % 3, 2, rng);
    const DensityMatrix b = ginibre_state(3, 3, rng);
    const auto ab = product_state(a, b);
    CHECK(max_abs(partial_trace(ab, Subsystem::A).matrix() - a.matrix()) <= 1e-10);
    CHECK(tensor(a.op(), b.op()).trace() == doctest::Approx(1.0));
  }
}

TEST_CASE("maximally entangled and isotropic states") {
  const auto phi3 = max_entangled(3);
  const Matrix& p = phi3.state().matrix();
  CHECK((p * p).trace().real() == doctest::Approx(1.0));
  CHECK(cond_entropy(max_entangled(2)) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(max_entangled(1), Error);

  for (int d : {2, 3, 4}) {
    CHECK(max_abs(isotropic_mix(d, 0.0).state().matrix() - max_entangled(d).state().matrix()) < 1e-14);
    const double top = 1.0 - 1.0 / (d * d);
    CHECK(max_abs(isotropic_mix(d, top).state().matrix() - Matrix::Identity(d * d, d * d) / (d * d)) < 1e-14);
    const double eps = 0.2;
    const RealVector ev = eigvalsh_unchecked(isotropic_mix(d, eps).state().matrix());
    CHECK(ev(0) == doctest::Approx(1.0 - eps));
    for (int i = 1; i < d * d; ++i) CHECK(ev(i) == doctest::Approx(eps / (d * d - 1.0)));
  }
  CHECK(trace_distance(max_entangled(2).state(), isotropic_mix(2, 0.3).state()) == doctest::Approx(0.3));
  CHECK_THROWS_AS(isotropic_mix(2, 1.5), Error);
}

TEST_CASE("mixtures validate their weight") {
  const DensityMatrix a = diag2(1, 0);
  const DensityMatrix b = diag2(0, 1);
  CHECK(max_abs(mix(a, b, 0.25).matrix() - diag2(0.75, 0.25).matrix()) < 1e-15);
  CHECK_THROWS_AS(mix(a, b, 1.5), Error);
  CHECK_THROWS_AS(mix(a, DensityMatrix::maximally_mixed(3), 0.5), Error);
}
