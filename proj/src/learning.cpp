#include "sbnmf/learning.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sbnmf/errors.hpp"

namespace sbn {

namespace {

// mu e^x / (1 - mu + mu e^x)
double tilted_mean(double mu, double x) noexcept {
  if (mu <= 0.0) {
    return 0.0;
  }
  return std::exp(std::log(mu) + x - log_bernoulli_mgf(mu, x));
}

void check_visible_map(const SigmoidBeliefNetwork& net, std::span<const NodeIndex> visible_map) {
  for (NodeIndex v : visible_map) {
    if (v >= net.size()) {
      throw InvalidArgument("visible map references node " + std::to_string(v) + " outside the network");
    }
  }
}

}  // namespace

double grad_weight(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state,
                   NodeIndex i, NodeIndex j) {
  state.validate(net, evidence);
  const std::ptrdiff_t edge = net.edge_index(i, j);
  if (edge < 0) {
    throw InvalidArgument("(" + std::to_string(i) + ", " + std::to_string(j) + ") is not an edge");
  }
  const double w = net.edges()[static_cast<std::size_t>(edge)].weight;
  const double xi = state.xi[i];
  const double ph = phi(net, state, i);
  const double mu_i = state.mu[i];
  const double mu_j = state.mu[j];
  return -(xi - mu_i) * mu_j + (1.0 - ph) * xi * tilted_mean(mu_j, -xi * w) -
         ph * (1.0 - xi) * tilted_mean(mu_j, (1.0 - xi) * w);
}

double grad_bias(const SigmoidBeliefNetwork& net, const Evidence& evidence, const MeanFieldState& state,
                 NodeIndex i) {
  state.validate(net, evidence);
  return state.mu.at(i) - phi(net, state, i);
}

std::vector<NodeIndex> default_visible_map(const SigmoidBeliefNetwork& net, std::size_t width) {
  if (width > net.size()) {
    throw InvalidArgument("bitmap has " + std::to_string(width) + " pixels but the network only " +
                          std::to_string(net.size()) + " nodes");
  }
  std::vector<NodeIndex> map(width);
  std::iota(map.begin(), map.end(), net.size() - width);
  return map;
}

Evidence pattern_evidence(std::span<const NodeIndex> visible_map, std::span<const Bit> pattern) {
  if (visible_map.size() != pattern.size()) {
    throw InvalidArgument("pattern has " + std::to_string(pattern.size()) + " pixels, visible map " +
                          std::to_string(visible_map.size()));
  }
  Evidence evidence;
  for (std::size_t p = 0; p < pattern.size(); ++p) {
    if (evidence.is_clamped(visible_map[p])) {
      throw InvalidArgument("visible map lists node " + std::to_string(visible_map[p]) + " twice");
    }
    evidence.clamp(visible_map[p], pattern[p]);
  }
  return evidence;
}

TrainResult train(const SigmoidBeliefNetwork& net, const BitmapDataset& data, std::span<const NodeIndex> visible_map,
                  const TrainOptions& options) {
  if (data.width() != visible_map.size()) {
    throw InvalidArgument("dataset patterns have " + std::to_string(data.width()) + " pixels, visible map " +
                          std::to_string(visible_map.size()));
  }
  if (!(options.rate >= 0.0) || !std::isfinite(options.rate)) {
    throw InvalidArgument("learning rate must be finite and non-negative");
  }
  check_visible_map(net, visible_map);

  TrainResult result{net, {}, 0};
  SigmoidBeliefNetwork& model = result.net;
  Rng rng(options.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> bias_step(model.size());
  std::vector<double> weight_step(model.edge_count());

  for (std::size_t epoch = 0; epoch < options.sweeps; ++epoch) {
    if (options.shuffle) {
      for (std::size_t k = order.size(); k > 1; --k) {
        std::swap(order[k - 1], order[rng.below(k)]);
      }
    }
    double bound_sum = 0.0;
    for (std::size_t idx : order) {
      const Evidence evidence = pattern_evidence(visible_map, data.pattern(idx));
      const SolveResult solved = solve(model, evidence, options.solver);
      if (!solved.converged) {
        ++result.nonconverged_solves;
      }
      bound_sum += solved.bound.total;
      if (options.rate == 0.0) {
        continue;
      }
      const MeanFieldState& s = solved.state;
      for (NodeIndex i = 0; i < model.size(); ++i) {
        bias_step[i] = options.rate * grad_bias(model, evidence, s, i);
      }
      const auto edges = model.edges();
      for (std::size_t k = 0; k < edges.size(); ++k) {
        weight_step[k] = options.rate * grad_weight(model, evidence, s, edges[k].child, edges[k].parent);
      }
      model.adjust(bias_step, weight_step);
    }
    result.epoch_mean_bound.push_back(data.size() ? bound_sum / static_cast<double>(data.size()) : 0.0);
  }
  return result;
}

double pattern_bound(const SigmoidBeliefNetwork& net, std::span<const NodeIndex> visible_map,
                     std::span<const Bit> pattern, const SolveOptions& options) {
  check_visible_map(net, visible_map);
  return solve(net, pattern_evidence(visible_map, pattern), options).bound.total;
}

std::size_t classify(std::span<const SigmoidBeliefNetwork> models, std::span<const Bit> pattern,
                     std::span<const NodeIndex> visible_map, const SolveOptions& options) {
  if (models.size() < 2) {
    throw InvalidArgument("classification needs at least two models");
  }
  std::size_t best = 0;
  double best_bound = -INFINITY;
  for (std::size_t c = 0; c < models.size(); ++c) {
    const double b = pattern_bound(models[c], visible_map, pattern, options);
    if (b > best_bound) {
      best = c;
      best_bound = b;
    }
  }
  return best;
}

double normalized_score(double total_bound, std::size_t n_patterns, std::size_t n_visible) {
  if (n_patterns == 0 || n_visible == 0) {
    throw InvalidArgument("normalized score needs positive pattern and visible counts");
  }
  return total_bound / (static_cast<double>(n_patterns) * static_cast<double>(n_visible) * std::numbers::ln2);
}

}  // namespace sbn
