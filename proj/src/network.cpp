#include "sbnmf/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbnmf/errors.hpp"

namespace sbn {

namespace {

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) {
    throw InvalidArgument(what + " is not finite");
  }
}

}  // namespace

SigmoidBeliefNetwork::SigmoidBeliefNetwork(std::vector<double> biases, std::vector<Edge> edges)
    : biases_(std::move(biases)), edges_(std::move(edges)) {
  const std::size_t n = biases_.size();
  for (std::size_t i = 0; i < n; ++i) {
    require_finite(biases_[i], "bias of node " + std::to_string(i));
  }
  for (const Edge& e : edges_) {
    const std::string name = "edge (" + std::to_string(e.child) + ", " + std::to_string(e.parent) + ")";
    if (e.child >= n || e.parent >= n) {
      throw InvalidArgument(name + " references a node outside the network");
    }
    if (e.parent >= e.child) {
      throw InvalidArgument(name + " does not point from a lower to a higher index");
    }
    require_finite(e.weight, "weight of " + name);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.child != b.child ? a.child < b.child : a.parent < b.parent;
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].child == edges_[k - 1].child && edges_[k].parent == edges_[k - 1].parent) {
      throw InvalidArgument("duplicate edge (" + std::to_string(edges_[k].child) + ", " +
                            std::to_string(edges_[k].parent) + ")");
    }
  }
  index_adjacency();
}

void SigmoidBeliefNetwork::index_adjacency() {
  const std::size_t n = biases_.size();
  parent_offsets_.assign(n + 1, 0);
  child_offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++parent_offsets_[e.child + 1];
    ++child_offsets_[e.parent + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    parent_offsets_[i + 1] += parent_offsets_[i];
    child_offsets_[i + 1] += child_offsets_[i];
  }

  // edges_ is sorted by (child, parent), so it is already the parent CSR.
  parent_links_.clear();
  parent_links_.reserve(edges_.size());
  for (const Edge& e : edges_) {
    parent_links_.push_back({e.parent, e.weight});
  }

  // Scanning edges in (child, parent) order fills each child list ascending.
  child_links_.assign(edges_.size(), {});
  child_edge_.assign(edges_.size(), 0);
  std::vector<std::size_t> cursor(child_offsets_.begin(), child_offsets_.end() - 1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = edges_[k];
    const std::size_t slot = cursor[e.parent]++;
    child_links_[slot] = {e.child, e.weight};
    child_edge_[slot] = k;
  }
}

std::span<const ParentLink> SigmoidBeliefNetwork::parents(NodeIndex i) const {
  if (i >= size()) {
    throw InvalidArgument("node index " + std::to_string(i) + " out of range");
  }
  return std::span<const ParentLink>(parent_links_).subspan(parent_offsets_[i],
                                                           parent_offsets_[i + 1] - parent_offsets_[i]);
}

std::span<const ChildLink> SigmoidBeliefNetwork::children(NodeIndex i) const {
  if (i >= size()) {
    throw InvalidArgument("node index " + std::to_string(i) + " out of range");
  }
  return std::span<const ChildLink>(child_links_).subspan(child_offsets_[i],
                                                         child_offsets_[i + 1] - child_offsets_[i]);
}

std::ptrdiff_t SigmoidBeliefNetwork::edge_index(NodeIndex child, NodeIndex parent) const {
  if (child >= size()) {
    return -1;
  }
  const auto first = edges_.begin() + static_cast<std::ptrdiff_t>(parent_offsets_[child]);
  const auto last = edges_.begin() + static_cast<std::ptrdiff_t>(parent_offsets_[child + 1]);
  const auto it = std::lower_bound(first, last, parent, [](const Edge& e, NodeIndex p) { return e.parent < p; });
  if (it == last || it->parent != parent) {
    return -1;
  }
  return it - edges_.begin();
}

double SigmoidBeliefNetwork::weight(NodeIndex child, NodeIndex parent) const {
  const std::ptrdiff_t k = edge_index(child, parent);
  return k < 0 ? 0.0 : edges_[static_cast<std::size_t>(k)].weight;
}

void SigmoidBeliefNetwork::set_bias(NodeIndex i, double value) {
  require_finite(value, "bias");
  biases_.at(i) = value;
}

void SigmoidBeliefNetwork::set_weight(std::size_t edge, double value) {
  require_finite(value, "weight");
  edges_.at(edge).weight = value;
  parent_links_[edge].weight = value;
  // child_edge_ is a permutation; find the slot pointing at this edge.
  const NodeIndex parent = edges_[edge].parent;
  for (std::size_t slot = child_offsets_[parent]; slot < child_offsets_[parent + 1]; ++slot) {
    if (child_edge_[slot] == edge) {
      child_links_[slot].weight = value;
      break;
    }
  }
}

void SigmoidBeliefNetwork::adjust(std::span<const double> bias_delta, std::span<const double> weight_delta) {
  if (bias_delta.size() != biases_.size() || weight_delta.size() != edges_.size()) {
    throw InvalidArgument("parameter delta has the wrong dimension");
  }
  for (std::size_t i = 0; i < biases_.size(); ++i) {
    biases_[i] += bias_delta[i];
    require_finite(biases_[i], "bias");
  }
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    edges_[k].weight += weight_delta[k];
    require_finite(edges_[k].weight, "weight");
    parent_links_[k].weight = edges_[k].weight;
  }
  for (std::size_t slot = 0; slot < child_links_.size(); ++slot) {
    child_links_[slot].weight = edges_[child_edge_[slot]].weight;
  }
}

FullConfiguration::FullConfiguration(std::vector<Bit> bits) : bits_(std::move(bits)) {
  for (Bit b : bits_) {
    if (b > 1) {
      throw InvalidArgument("configuration entries must be 0 or 1");
    }
  }
}

void FullConfiguration::set(NodeIndex i, Bit b) {
  if (b > 1) {
    throw InvalidArgument("configuration entries must be 0 or 1");
  }
  bits_.at(i) = b;
}

Evidence::Evidence(std::map<NodeIndex, Bit> clamped) : clamped_(std::move(clamped)) {
  for (const auto& [i, b] : clamped_) {
    if (b > 1) {
      throw InvalidArgument("evidence value for node " + std::to_string(i) + " must be 0 or 1");
    }
  }
}

void Evidence::clamp(NodeIndex i, Bit b) {
  if (b > 1) {
    throw InvalidArgument("evidence value for node " + std::to_string(i) + " must be 0 or 1");
  }
  clamped_[i] = b;
}

void Evidence::validate(std::size_t n) const {
  if (!clamped_.empty() && clamped_.rbegin()->first >= n) {
    throw InvalidArgument("evidence clamps node " + std::to_string(clamped_.rbegin()->first) +
                          " but the network has " + std::to_string(n) + " nodes");
  }
}

std::vector<NodeIndex> Evidence::hidden_nodes(std::size_t n) const {
  std::vector<NodeIndex> hidden;
  for (NodeIndex i = 0; i < n; ++i) {
    if (!is_clamped(i)) {
      hidden.push_back(i);
    }
  }
  return hidden;
}

std::vector<std::int8_t> Evidence::dense(std::size_t n) const {
  validate(n);
  std::vector<std::int8_t> out(n, -1);
  for (const auto& [i, b] : clamped_) {
    out[i] = static_cast<std::int8_t>(b);
  }
  return out;
}

double sigmoid(double z) noexcept {
  if (z >= 0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) noexcept {
  if (z > 30) {
    return z + std::exp(-z);
  }
  if (z < -30) {
    return std::exp(z);
  }
  return std::log1p(std::exp(z));
}

double log_add_exp(double a, double b) noexcept {
  if (a == -INFINITY) {
    return b;
  }
  if (b == -INFINITY) {
    return a;
  }
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

double local_field(const SigmoidBeliefNetwork& net, const FullConfiguration& config, NodeIndex i) {
  if (config.size() != net.size()) {
    throw InvalidArgument("configuration size does not match the network");
  }
  double z = net.bias(i);
  for (const ParentLink& p : net.parents(i)) {
    if (config[p.parent]) {
      z += p.weight;
    }
  }
  return z;
}

double conditional(const SigmoidBeliefNetwork& net, NodeIndex i, const FullConfiguration& config) {
  const double z = local_field(net, config, i);
  return config[i] ? sigmoid(z) : sigmoid(-z);
}

double log_joint(const SigmoidBeliefNetwork& net, const FullConfiguration& config) {
  double total = 0.0;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    const double z = local_field(net, config, i);
    total += config[i] ? log_sigmoid(z) : log_sigmoid(-z);
  }
  return total;
}

double energy(const SigmoidBeliefNetwork& net, const FullConfiguration& config) {
  if (config.size() != net.size()) {
    throw InvalidArgument("configuration size does not match the network");
  }
  double pairwise = 0.0;
  for (const Edge& e : net.edges()) {
    pairwise += e.weight * config[e.child] * config[e.parent];
  }
  double linear = 0.0;
  double normalizer = 0.0;
  for (NodeIndex i = 0; i < net.size(); ++i) {
    linear += net.bias(i) * config[i];
    normalizer += softplus(local_field(net, config, i));
  }
  return -pairwise - linear + normalizer;
}

double noisy_or_conditional(std::span<const double> cause_probabilities, std::span<const Bit> parent_bits) {
  if (cause_probabilities.size() != parent_bits.size()) {
    throw InvalidArgument("noisy-OR needs one probability per parent");
  }
  double drive = 0.0;
  for (std::size_t j = 0; j < cause_probabilities.size(); ++j) {
    const double p = cause_probabilities[j];
    if (!(p >= 0.0 && p < 1.0)) {
      throw InvalidArgument("noisy-OR cause probabilities must lie in [0, 1)");
    }
    if (parent_bits[j] > 1) {
      throw InvalidArgument("parent bits must be 0 or 1");
    }
    if (parent_bits[j]) {
      drive += -std::log1p(-p);
    }
  }
  return -std::expm1(-drive);
}

FullConfiguration ancestral_sample(const SigmoidBeliefNetwork& net, Rng& rng) {
  FullConfiguration config(net.size());
  for (NodeIndex i = 0; i < net.size(); ++i) {
    // Parents have lower indices and are already drawn.
    const double p = sigmoid(local_field(net, config, i));
    config.set(i, rng.bernoulli(p) ? 1 : 0);
  }
  return config;
}

}  // namespace sbn
