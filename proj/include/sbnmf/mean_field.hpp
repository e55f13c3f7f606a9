#ifndef SBNMF_MEAN_FIELD_HPP
#define SBNMF_MEAN_FIELD_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sbnmf/golden_section.hpp"
#include "sbnmf/network.hpp"

namespace sbn {

/// Variational parameters: a mean mu_i per node (free for hidden nodes,
/// pinned to the evidence bit for clamped ones) and a bound parameter
/// xi_i in [0, 1] per node.
struct MeanFieldState {
  std::vector<double> mu;
  std::vector<double> xi;

  /// Hidden means set to init_mu, clamped means to their bits, every xi to init_xi.
  static MeanFieldState initial(const SigmoidBeliefNetwork& net, const Evidence& evidence, double init_mu = 0.5,
                                double init_xi = 0.5);

  /// Throws InvalidArgument on wrong sizes, values outside [0, 1], or a
  /// clamped mean that differs from its evidence bit.
  void validate(const SigmoidBeliefNetwork& net, const Evidence& evidence) const;
};

/// The lower bound L_V on ln P(V) split into its parts:
///   total = quadratic + bias - xi_linear - log_moment + entropy.
struct BoundBreakdown {
  double quadratic = 0.0;   // sum J_ij mu_i mu_j
  double bias = 0.0;        // sum h_i mu_i
  double xi_linear = 0.0;   // sum xi_i (sum_j J_ij mu_j + h_i)
  double log_moment = 0.0;  // sum ln <e^{-xi_i z_i} + e^{(1 - xi_i) z_i}>
  double entropy = 0.0;     // hidden-node Bernoulli entropies
  double total = 0.0;
};

/// Means are clamped to [kMuFloor, 1 - kMuFloor] before entropies are taken.
inline constexpr double kMuFloor = 1e-12;

/// ln(1 - mu + mu e^x), stable for any mu in [0, 1] and any finite x.
double log_bernoulli_mgf(double mu, double x) noexcept;

/// ln <e^{-xi_i z_i}> = -xi_i h_i + sum_j ln(1 - mu_j + mu_j e^{-xi_i J_ij}).
double log_moment_neg(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i);

/// ln <e^{(1 - xi_i) z_i}>.
double log_moment_pos(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i);

/// <e^{(1-xi) z}> / (<e^{-xi z}> + <e^{(1-xi) z}>), as a sigmoid of the
/// log-moment difference.
double phi(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i);

/// K_ij = -d/d mu_j ln <e^{-xi_i z_i} + e^{(1 - xi_i) z_i}>. Zero unless j
/// is a parent of i.
double kappa(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i, NodeIndex j);

/// Upper bound on <softplus(z_i)> for a given xi:
///   xi (sum_j J_ij mu_j + h_i) + ln <e^{-xi z_i} + e^{(1 - xi) z_i}>.
double softplus_bound(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i, double xi);

BoundBreakdown bound(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state);

/// Argument of the sigmoid in the mean field equation for node i at the
/// current state: h_i + sum_j [J_ij mu_j + J_ji (mu_j - xi_j) + K_ji].
double mean_field_input(const SigmoidBeliefNetwork& net, const MeanFieldState& state, NodeIndex i);

/// Sets every xi_i to the minimiser of softplus_bound over [0, 1]. A node
/// keeps its old xi if the search does not improve on it.
MeanFieldState update_xi(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state,
                         double xi_tol = 1e-10);

/// New mean for hidden node i with everything else held fixed. Solves
/// mu_i = sigmoid(mean_field_input) self-consistently (K_ji depends on
/// mu_i) by safeguarded Newton iteration in logit space, so dL_V/dmu_i = 0
/// at the result. Never returns a value with a lower bound than the
/// current mean. Throws InvalidArgument if i is clamped.
double update_mu(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state,
                 NodeIndex i);

/// Reported to SolveOptions::observer after every xi pass and every
/// single-mean update. Only computed when an observer is installed.
struct UpdateEvent {
  enum class Kind { XiPass, MuUpdate };
  Kind kind;
  std::size_t sweep;
  NodeIndex node;  // meaningful for MuUpdate
  double bound_before;
  double bound_after;
};

struct SolveOptions {
  double init_mu = 0.5;
  double tol_mu = 1e-8;
  double tol_bound = 1e-10;
  std::size_t max_sweeps = 1000;
  double xi_tol = 1e-10;
  std::function<void(const UpdateEvent&)> observer;
};

struct SolveResult {
  MeanFieldState state;
  BoundBreakdown bound;
  bool converged = false;
  std::size_t sweeps = 0;
};

/// Alternates a full xi pass with one asynchronous sweep of the hidden means
/// in ascending order until max |d mu| < tol_mu and |d L_V| < tol_bound, or
/// max_sweeps is reached. Non-convergence is reported via the flag.
SolveResult solve(const SigmoidBeliefNetwork& net, const Evidence& evidence, const SolveOptions& options = {});

}  // namespace sbn

#endif  // SBNMF_MEAN_FIELD_HPP
