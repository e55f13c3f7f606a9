#ifndef SBNMF_LEARNING_HPP
#define SBNMF_LEARNING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sbnmf/dataset.hpp"
#include "sbnmf/mean_field.hpp"
#include "sbnmf/network.hpp"

namespace sbn {

/// dL_V/dJ_ij at fixed (mu, xi). Throws InvalidArgument if (i, j) is not an edge.
double grad_weight(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state,
                   NodeIndex i, NodeIndex j);

/// dL_V/dh_i = mu_i - phi_i at fixed (mu, xi).
double grad_bias(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state,
                 NodeIndex i);

/// Nodes that carry the pixels of a bitmap: by default the last
/// `width` indices, in row-major pixel order.
std::vector<NodeIndex> default_visible_map(const SigmoidBeliefNetwork& net, std::size_t width);

/// Evidence clamping visible_map[p] to pattern[p].
Evidence pattern_evidence(std::span<const NodeIndex> visible_map, std::span<const Bit> pattern);

struct TrainOptions {
  double rate = 0.05;
  std::size_t sweeps = 5;
  std::uint64_t seed = 0;
  bool shuffle = true;
  SolveOptions solver;
};

struct TrainResult {
  SigmoidBeliefNetwork net;
  /// Mean of L_V over the patterns of each epoch, measured before each
  /// pattern's parameter update.
  std::vector<double> epoch_mean_bound;
  std::size_t nonconverged_solves = 0;
};

/// Stochastic gradient ascent on L_V: for every pattern (order reshuffled
/// each epoch from `seed` when shuffle is set) clamp it, solve from a fresh
/// state, then step every weight and bias by rate times its gradient.
TrainResult train(const SigmoidBeliefNetwork& net, const BitmapDataset& data, std::span<const NodeIndex> visible_map,
                  const TrainOptions& options);

/// L_V of one pattern under a model.
double pattern_bound(const SigmoidBeliefNetwork& net, std::span<const NodeIndex> visible_map,
                     std::span<const Bit> pattern, const SolveOptions& options = {});

/// Index of the model with the largest L_V for the pattern; ties go to the
/// lowest index. Requires at least two models.
std::size_t classify(std::span<const SigmoidBeliefNetwork> models, std::span<const Bit> pattern,
                     std::span<const NodeIndex> visible_map, const SolveOptions& options = {});

/// total / (patterns * visible * ln 2): -1 for a model that makes every
/// pattern equally likely.
double normalized_score(double total_bound, std::size_t n_patterns, std::size_t n_visible);

}  // namespace sbn

#endif  // SBNMF_LEARNING_HPP
