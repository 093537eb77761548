#include "qcont/random.hpp"

#include <cmath>
#include <string>

namespace qcont {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  // Column-major fill with real part drawn first; fixed order keeps streams reproducible.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

DensityMatrix haar_pure(int d, Rng& rng) {
  check_factor_dim(d, "d");
  return DensityMatrix::pure(gaussian_matrix(d, 1, rng).col(0));
}

DensityMatrix ginibre_state(int d, int rank, Rng& rng) {
  if (d < 1 || d > kMaxOperatorDim) throw Error(ErrorKind::RangeError, "dimension out of range");
  if (rank < 1 || rank > d) throw Error(ErrorKind::RangeError, "rank must lie in [1, d]");
  const Matrix g = gaussian_matrix(d, rank, rng);
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix::assume_valid(HermitianOperator::from_matrix(0.5 * (w + w.adjoint())));
}

QuantumChannel random_channel(int din, int dout, int kraus_count, Rng& rng) {
  check_factor_dim(din, "din");
  check_factor_dim(dout, "dout");
  if (kraus_count < 1) throw Error(ErrorKind::RangeError, "kraus_count must be >= 1");
  const int rows = dout * kraus_count;
  if (rows < din) {
    throw Error(ErrorKind::RangeError, "dout * kraus_count must be >= din for an isometry");
  }
  const Matrix g = gaussian_matrix(rows, din, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, din);
  // Phase fix from diag(R) makes the isometry Haar distributed.
  const Matrix r = qr.matrixQR().topRows(din).triangularView<Eigen::Upper>();
  for (int j = 0; j < din; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(kraus_count));
  for (int k = 0; k < kraus_count; ++k) kraus.push_back(q.middleRows(k * dout, dout));
  return QuantumChannel::from_kraus(std::move(kraus));
}

}  // namespace qcont
