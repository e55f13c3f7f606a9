#ifndef SBNMF_EXACT_HPP
#define SBNMF_EXACT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "sbnmf/network.hpp"

namespace sbn {

// Brute-force reference computations. Every routine enumerates hidden or
// parent states and refuses (GuardError) beyond a fixed size.

inline constexpr std::size_t kMaxHiddenForLikelihood = 25;
inline constexpr std::size_t kMaxHiddenForTables = 20;
inline constexpr std::size_t kMaxParentsForExpectation = 20;

/// ln P(V): log-sum-exp of log_joint over every hidden completion.
double log_likelihood_exact(const SigmoidBeliefNetwork& net, const Evidence& evidence);

/// P(H | V) over all hidden configurations. Entry k assigns hidden[b] the
/// value of bit b of k.
struct PosteriorTable {
  std::vector<NodeIndex> hidden;
  std::vector<double> probabilities;
  double log_likelihood = 0.0;

  /// P(S_hidden[b] = 1 | V).
  double marginal(std::size_t b) const;
};

PosteriorTable posterior_table(const SigmoidBeliefNetwork& net, const Evidence& evidence);

/// KL(Q || P(H|V)) for the product-Bernoulli Q with means mu. mu is indexed
/// by node; entries for clamped nodes are ignored. Returns +inf when Q puts
/// mass on a configuration the posterior excludes.
double kl_divergence(const SigmoidBeliefNetwork& net, const Evidence& evidence, std::span<const double> mu);

/// <softplus(z_i)> with each parent an independent Bernoulli(mu_j).
double expected_softplus_exact(const SigmoidBeliefNetwork& net, std::span<const double> mu, NodeIndex i);

/// The mean field lower bound with the softplus expectations done exactly:
///   sum J_ij mu_i mu_j + sum h_i mu_i - sum <softplus(z_i)> + entropy(mu).
/// Clamped entries of mu are replaced by their evidence bits.
double bound_exact_expectation(const SigmoidBeliefNetwork& net, const Evidence& evidence,
                               std::span<const double> mu);

/// Bernoulli entropy -mu ln mu - (1 - mu) ln(1 - mu) with 0 ln 0 = 0.
double bernoulli_entropy(double mu) noexcept;

}  // namespace sbn

#endif  // SBNMF_EXACT_HPP
