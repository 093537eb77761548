#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcont/divergences.hpp"

namespace qcont {

/// CPTP map stored as Kraus operators (dout x din) with its normalised Choi state
/// J = (Lambda (x) id)(Phi_din). J is indexed output-first: row b * din + r.
class QuantumChannel {
 public:
  /// Validates shapes and sum_i K_i^dagger K_i = I within `tol`.
  static QuantumChannel from_kraus(std::vector<Matrix> kraus, double tol = 1e-9);
  /// Rebuilds Kraus operators from the eigendecomposition of a normalised Choi state.
  static QuantumChannel from_choi(const Matrix& choi, int din, int dout, double tol = 1e-9);

  static QuantumChannel identity(int d);
  /// rho -> Tr(rho) I/dout.
  static QuantumChannel completely_depolarizing(int din, int dout);
  static QuantumChannel amplitude_damping(double gamma);
  /// Classical channel for a column-stochastic matrix P(b|a) (rows b, columns a).
  static QuantumChannel classical(const Eigen::MatrixXd& transition);

  int din() const { return din_; }
  int dout() const { return dout_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  const Matrix& choi() const { return choi_; }
  DensityMatrix choi_state() const;

  DensityMatrix apply(const DensityMatrix& rho) const;
  /// Linear action on an arbitrary din x din matrix.
  Matrix apply_operator(const Matrix& x) const;
  /// Heisenberg-picture map Y -> sum_i K_i^dagger Y K_i.
  Matrix adjoint(const Matrix& y) const;

 private:
  QuantumChannel(std::vector<Matrix> kraus, int din, int dout);
  std::vector<Matrix> kraus_;
  int din_;
  int dout_;
  Matrix choi_;
};

/// second o first.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

/// (Lambda (x) id_R) on a state of A (x) R, A the first factor.
BipartiteDensityMatrix apply_extended(const QuantumChannel& channel,
                                      const BipartiteDensityMatrix& rho_ar);

/// Complementary channel to the environment of the Kraus dilation, after dropping
/// Kraus operators of Frobenius norm below 1e-12; (N^c(rho))_ij = Tr K_i rho K_j^dagger.
QuantumChannel complementary(const QuantumChannel& channel);
/// Kraus operators that survive the 1e-12 Frobenius-norm cut.
int environment_dim(const QuantumChannel& channel);

/// log2 lambda_max(J2^{-1/2} J1 J2^{-1/2}) on supp(J2), checked against 2^v J2 >= J1.
DivergenceValue channel_dmax_stabilised(const QuantumChannel& a, const QuantumChannel& b);

struct UnstabilisedEstimate {
  DivergenceValue value;  // lower estimate of sup_rho D_max(a(rho)||b(rho))
  Vector best_input;
  int restarts = 0;
};

/// Alternating ascent over pure inputs with random restarts (derived from `seed`).
UnstabilisedEstimate channel_dmax_unstabilised(const QuantumChannel& a, const QuantumChannel& b,
                                               int restarts, std::uint64_t seed = 0);

struct DiamondBracket {
  double lower;  // || J1 - J2 ||_1
  double upper;  // din * || J1 - J2 ||_1
};

/// Two-sided bracket on || a - b ||_diamond from normalised Choi states.
DiamondBracket diamond_bracket(const QuantumChannel& a, const QuantumChannel& b);

struct AscentResult {
  double value = 0.0;
  double gap = 0.0;  // Frank-Wolfe duality gap at the returned point
  int iterations = 0;
  DensityMatrix argmax = DensityMatrix::maximally_mixed(1);
  std::vector<double> trajectory;  // objective after each iteration
};

/// sup_rho S(N(rho)) - S(Theta(N(rho))) by conditional gradient with exact line
/// search; the objective is concave, so value + gap bounds the supremum.
/// Throws ToleranceNotReached after `max_iterations`.
AscentResult u_theta(const QuantumChannel& channel, const QuantumChannel& theta, double tol,
                     int max_iterations = 10'000);

/// Best local maximum of S(N(rho)) - S(N^c(rho)) over the maximally mixed start and
/// `restarts` random starts. A lower bound on the coherent information.
AscentResult coherent_info_lower(const QuantumChannel& channel, int restarts, double tol,
                                 std::uint64_t seed = 0);

struct DegradabilityReport {
  double eps_lower = 0.0;  // bracket on (1/2) || N^c - Theta o N ||_diamond
  double eps_upper = 0.0;
  double eps = 0.0;        // value used in the bounds
  int env_dim = 0;
  double u_theta = 0.0;
  double u_theta_gap = 0.0;
  double ic_lower = 0.0;

  struct Bound {
    double value = 0.0;
    bool applicable = false;
    std::string reason;
  };
  Bound q_upper_utheta;
  Bound q_upper_ic;
  Bound q_upper_utheta_refined;
  Bound q_upper_ic_refined;

  struct DmaxTerms {
    double stabilised = 0.0;      // D_max(Theta o N || pi Tr), bits
    double unstabilised = 0.0;    // lower estimate, bits
    double m_used = 0.0;          // M in the refined coherent-information bound
  } dmax_channel_terms;
};

struct DegradabilityOptions {
  double tol = 1e-7;
  int restarts = 8;
  int dmax_restarts = 20;
  std::uint64_t seed = 0;
};

/// Capacity bracket for N from an approximate degrading map Theta. When eps is
/// absent the upper end of the diamond bracket is used.
DegradabilityReport degradability_bounds(const QuantumChannel& channel,
                                         const QuantumChannel& theta,
                                         std::optional<double> eps = std::nullopt,
                                         const DegradabilityOptions& options = {});

}  // namespace qcont
