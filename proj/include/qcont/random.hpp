#pragma once

#include <cstdint>
#include <random>

#include "qcont/channels.hpp"

namespace qcont {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
/// Seed for sample `index` of a stream; independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Entries i.i.d. complex standard Gaussian.
Matrix gaussian_matrix(int rows, int cols, Rng& rng);

DensityMatrix haar_pure(int d, Rng& rng);
/// G G^dagger / Tr(G G^dagger), G a d x rank complex Gaussian matrix.
DensityMatrix ginibre_state(int d, int rank, Rng& rng);
/// Kraus blocks of a Haar-random isometry C^din -> C^(dout * kraus_count).
QuantumChannel random_channel(int din, int dout, int kraus_count, Rng& rng);

}  // namespace qcont
