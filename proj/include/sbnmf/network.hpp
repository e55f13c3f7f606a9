#ifndef SBNMF_NETWORK_HPP
#define SBNMF_NETWORK_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sbnmf/random.hpp"

namespace sbn {

using NodeIndex = std::size_t;
using Bit = std::uint8_t;

/// Directed edge parent -> child. Nodes are numbered in topological order,
/// so every edge has parent < child.
struct Edge {
  NodeIndex child;
  NodeIndex parent;
  double weight;
};

struct ParentLink {
  NodeIndex parent;
  double weight;
};

struct ChildLink {
  NodeIndex child;
  double weight;
};

/// DAG of binary units with logistic conditionals
///   P(S_i = 1 | parents) = sigmoid(sum_j J_ij S_j + h_i).
///
/// Structure is fixed at construction. Edges are held sorted by
/// (child, parent); parent and child views iterate in ascending node order.
/// Parameters may be adjusted in place (training); structure never changes.
class SigmoidBeliefNetwork {
public:
  SigmoidBeliefNetwork() = default;

  /// Throws InvalidArgument on parent >= child, out-of-range nodes,
  /// duplicate edges or non-finite numbers. Edges may arrive in any order.
  SigmoidBeliefNetwork(std::vector<double> biases, std::vector<Edge> edges);

  std::size_t size() const noexcept { return biases_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  double bias(NodeIndex i) const { return biases_.at(i); }
  std::span<const double> biases() const noexcept { return biases_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const ParentLink> parents(NodeIndex i) const;
  std::span<const ChildLink> children(NodeIndex i) const;

  /// Position of edge (child, parent) in edges(), or -1 when absent.
  std::ptrdiff_t edge_index(NodeIndex child, NodeIndex parent) const;
  bool has_edge(NodeIndex child, NodeIndex parent) const { return edge_index(child, parent) >= 0; }

  /// J_ij, zero when j is not a parent of i.
  double weight(NodeIndex child, NodeIndex parent) const;

  void set_bias(NodeIndex i, double value);
  void set_weight(std::size_t edge, double value);

  /// Adds the deltas to every bias and to every weight (edges() order).
  void adjust(std::span<const double> bias_delta, std::span<const double> weight_delta);

private:
  void index_adjacency();

  std::vector<double> biases_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> parent_offsets_;
  std::vector<ParentLink> parent_links_;
  std::vector<std::size_t> child_offsets_;
  std::vector<ChildLink> child_links_;
  // Position in edges_ for each entry of child_links_.
  std::vector<std::size_t> child_edge_;
};

/// A complete 0/1 assignment to every node.
class FullConfiguration {
public:
  explicit FullConfiguration(std::size_t n) : bits_(n, 0) {}
  explicit FullConfiguration(std::vector<Bit> bits);

  std::size_t size() const noexcept { return bits_.size(); }
  Bit operator[](NodeIndex i) const { return bits_[i]; }
  void set(NodeIndex i, Bit b);
  std::span<const Bit> bits() const noexcept { return bits_; }

private:
  std::vector<Bit> bits_;
};

/// Observed values for a subset of nodes; the rest are hidden.
class Evidence {
public:
  Evidence() = default;
  explicit Evidence(std::map<NodeIndex, Bit> clamped);

  void clamp(NodeIndex i, Bit b);
  bool is_clamped(NodeIndex i) const { return clamped_.count(i) != 0; }
  Bit value(NodeIndex i) const { return clamped_.at(i); }
  const std::map<NodeIndex, Bit>& clamped() const noexcept { return clamped_; }
  std::size_t size() const noexcept { return clamped_.size(); }

  /// Throws InvalidArgument if any clamped index is >= n.
  void validate(std::size_t n) const;

  /// Ascending hidden node indices for an n-node network.
  std::vector<NodeIndex> hidden_nodes(std::size_t n) const;

  /// Per-node vector: 0/1 for clamped nodes, -1 for hidden ones.
  std::vector<std::int8_t> dense(std::size_t n) const;

private:
  std::map<NodeIndex, Bit> clamped_;
};

// Numerics ------------------------------------------------------------------

double sigmoid(double z) noexcept;

/// ln(1 + e^z); exact branches beyond |z| = 30.
double softplus(double z) noexcept;

/// ln sigmoid(z) = -softplus(-z).
inline double log_sigmoid(double z) noexcept { return -softplus(-z); }

/// ln(e^a + e^b) without overflow.
double log_add_exp(double a, double b) noexcept;

// Model ---------------------------------------------------------------------

/// z_i = h_i + sum over parents of J_ij S_j.
double local_field(const SigmoidBeliefNetwork& net, const FullConfiguration& config, NodeIndex i);

/// P(S_i = config[i] | parents of i as set in config).
double conditional(const SigmoidBeliefNetwork& net, NodeIndex i, const FullConfiguration& config);

/// ln P(S) = sum_i ln P(S_i | pa(S_i)), evaluated in log space.
double log_joint(const SigmoidBeliefNetwork& net, const FullConfiguration& config);

/// -sum J_ij S_i S_j - sum h_i S_i + sum softplus(z_i). Equals -log_joint.
double energy(const SigmoidBeliefNetwork& net, const FullConfiguration& config);

/// Noisy-OR activation 1 - prod_j (1 - p_j)^{S_j}, evaluated as
/// rho(sum theta_j S_j) with theta_j = -ln(1 - p_j) and rho(x) = 1 - e^{-x}.
/// Each p_j must lie in [0, 1).
double noisy_or_conditional(std::span<const double> cause_probabilities, std::span<const Bit> parent_bits);

/// Draws every node in index order from its conditional given the
/// already-drawn parents.
FullConfiguration ancestral_sample(const SigmoidBeliefNetwork& net, Rng& rng);

}  // namespace sbn

#endif  // SBNMF_NETWORK_HPP
