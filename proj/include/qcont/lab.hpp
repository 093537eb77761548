#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcont/bounds.hpp"
#include "qcont/channels.hpp"
#include "qcont/random.hpp"

namespace qcont {

struct RngConfig {
  std::uint64_t master_seed = 0;
  int workers = 1;
};

/// rho_AB full-rank Ginibre, sigma_AB = (Phi (x) id)(rho_AB) for a random channel Phi on A.
/// With identity_weight t the local channel is (1 - t) Phi + t id, which keeps sigma close.
std::pair<BipartiteDensityMatrix, BipartiteDensityMatrix> random_equal_marginal_pair(
    int dA, int dB, Rng& rng, double identity_weight = 0.0);

struct FuzzParams {
  int dA = 2;             // eq14 / wilde / mi_conjecture: largest subsystem dimensions
  int dB = 2;
  int dmin = 2;           // thm1: dimension range
  int dmax = 4;
  int dim = 2;            // prop9 / lemma3: system dimension D
  int generators = 3;     // prop9 / lemma3: size of the free set (including I/D)
  int channels = 2;       // prop9 / lemma3: size of L
  double q = 0.0;         // lemma3: 0 cycles through {0.1, 0.3, 0.6}
  bool entanglement_biased = false;  // wilde / mi_conjecture
  int injection_period = 1000;       // eq14: isotropic witness every N samples (0 disables)
  double saturation_threshold = 1e-9;
  double opt_tol = 1e-9;             // prop9 / lemma3 optimiser tolerance
};

struct Witness {
  std::uint64_t index;
  double slack;
  std::uint64_t digest;  // FNV-1a of the sampled states, reproducible from (seed, index)
  std::string note;
};

struct FuzzReport {
  std::string campaign_tag;
  std::string equation_tag;
  bool conjecture = false;  // conjecture campaigns record violations instead of failing
  long samples = 0;
  long applicable = 0;
  long violations = 0;
  double tolerance = 0.0;
  double max_violation = 0.0;
  double min_slack = 0.0;
  std::vector<Witness> near_saturations;  // slack <= saturation_threshold, first 32 by index
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> extras;
};

inline constexpr std::size_t kMaxWitnesses = 32;

/// Tags: thm1, eq14, wilde, mi_conjecture, prop9, lemma3.
FuzzReport fuzz(const std::string& tag, const FuzzParams& params, long samples,
                const RngConfig& rng);

struct SampleInstance {
  std::vector<DensityMatrix> states;  // the sampled states, in campaign order
  std::vector<int> dims;              // subsystem dimensions where relevant
  std::vector<BoundReport> reports;   // per-sample checks; the first is the campaign check
  std::uint64_t digest = 0;
  std::string note;
};

/// Regenerates sample `index` of a campaign exactly.
SampleInstance reconstruct_sample(const std::string& tag, const FuzzParams& params,
                                  std::uint64_t master_seed, std::uint64_t index);

bool is_campaign(const std::string& tag);

/// Saturating families on fixed grids; throws SaturationFailure naming the grid point
/// when |slack| exceeds 1e-9.
std::vector<BoundReport> tightness_suite();

}  // namespace qcont
