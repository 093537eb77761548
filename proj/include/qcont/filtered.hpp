#pragma once

#include <optional>
#include <vector>

#include "qcont/bounds.hpp"
#include "qcont/channels.hpp"

namespace qcont {

/// Finite family L of channels with a common input dimension.
class ChannelSet {
 public:
  explicit ChannelSet(std::vector<QuantumChannel> channels);
  const std::vector<QuantumChannel>& channels() const { return channels_; }
  int din() const { return channels_.front().din(); }

 private:
  std::vector<QuantumChannel> channels_;
};

/// Convex hull of finitely many states, star-shaped around generators[star_center_index].
class FreeSet {
 public:
  FreeSet(std::vector<DensityMatrix> generators, int star_center_index);
  const std::vector<DensityMatrix>& generators() const { return generators_; }
  int star_center_index() const { return center_; }
  const DensityMatrix& center() const { return generators_[static_cast<std::size_t>(center_)]; }
  int dim() const { return generators_.front().dim(); }
  DensityMatrix mixture(const Eigen::VectorXd& weights) const;

 private:
  std::vector<DensityMatrix> generators_;
  int center_;
};

/// sup over L of || Lambda(X) ||_1.
double filtered_norm(const HermitianOperator& x, const ChannelSet& L);

struct FilteredResult {
  DivergenceValue value;       // best value found
  double lower_bound = 0.0;    // certified lower bound on the infimum
  Eigen::VectorXd weights;     // minimising mixture of the generators
  DensityMatrix omega = DensityMatrix::maximally_mixed(1);
  int evaluations = 0;
  bool infinite_everywhere = false;
};

/// Filtered divergences of rho to a single state: max over L.
DivergenceValue filtered_rel_ent_to(const DensityMatrix& rho, const DensityMatrix& omega,
                                    const ChannelSet& L);
DivergenceValue filtered_dmax_to(const DensityMatrix& rho, const DensityMatrix& omega,
                                 const ChannelSet& L);

/// inf over omega in F of max over L of D(Lambda rho || Lambda omega).
/// Throws ToleranceNotReached if the certified gap stays above tol.
FilteredResult filtered_rel_ent(const DensityMatrix& rho, const FreeSet& F, const ChannelSet& L,
                                double tol);
/// Same with D_max as the inner divergence.
FilteredResult filtered_dmax(const DensityMatrix& rho, const FreeSet& F, const ChannelSet& L,
                             double tol);

/// Sandwich inf_{w'} D^L(rho||w') + log2(1-q) <= D^L(rho||F) <= inf_{w'} D^L(rho||w'),
/// w' ranging over (1 - q) omega + q tau. slack is the smaller of the two slacks.
BoundReport lemma3_check(const DensityMatrix& rho, const FreeSet& F, const ChannelSet& L,
                         double q, double tol = 1e-9);

/// D^L(rho||F) - D^L(sigma||F) <= eps D^L_max(rho||tau) + g(eps) + h2(eps), with
/// eps = filtered_norm(rho - sigma)/2. With `use_free_set_dmax` the D_max term is
/// taken over all of F instead of the centre (valid for convex F).
BoundReport prop9_check(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSet& F,
                        const ChannelSet& L, bool use_free_set_dmax = false, double tol = 1e-9);

/// Two-sided |D^L(rho||F) - D^L(sigma||F)| <= eps log2 D + h2(eps) + g(eps), which needs
/// the maximally mixed state in F.
BoundReport cor10_check(const DensityMatrix& rho, const DensityMatrix& sigma, const FreeSet& F,
                        const ChannelSet& L, double tol = 1e-9);

/// Whether I/D lies in conv(generators), by least squares on the simplex (residual <= 1e-8).
bool contains_maximally_mixed(const FreeSet& F, double* residual = nullptr);

}  // namespace qcont
