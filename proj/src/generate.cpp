#include "sbnmf/generate.hpp"

#include <cmath>
#include <vector>

#include "sbnmf/errors.hpp"

namespace sbn {

namespace {

template <class Draw>
SigmoidBeliefNetwork build_layered(std::span<const std::size_t> layers, Draw&& draw) {
  if (layers.empty()) {
    throw InvalidArgument("layer list is empty");
  }
  std::size_t n = 0;
  for (std::size_t width : layers) {
    if (width == 0) {
      throw InvalidArgument("layer sizes must be positive");
    }
    n += width;
  }

  std::vector<double> biases(n);
  std::vector<Edge> edges;
  std::size_t prev_start = 0;
  std::size_t start = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (std::size_t i = start; i < start + layers[l]; ++i) {
      biases[i] = draw();
      if (l > 0) {
        for (std::size_t j = prev_start; j < start; ++j) {
          edges.push_back({i, j, draw()});
        }
      }
    }
    prev_start = start;
    start += layers[l];
  }
  return SigmoidBeliefNetwork(std::move(biases), std::move(edges));
}

void check_range(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw InvalidArgument("weight range must be finite with lo <= hi");
  }
}

}  // namespace

SigmoidBeliefNetwork gen_random_layered(std::span<const std::size_t> layers, double lo, double hi,
                                        std::uint64_t seed) {
  check_range(lo, hi);
  Rng rng(seed);
  return build_layered(layers, [&] { return rng.uniform(lo, hi); });
}

SigmoidBeliefNetwork zero_layered(std::span<const std::size_t> layers) {
  return build_layered(layers, [] { return 0.0; });
}

SigmoidBeliefNetwork gen_random_dag(std::size_t n, double edge_probability, double lo, double hi, Rng& rng) {
  check_range(lo, hi);
  std::vector<double> biases(n);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    biases[i] = rng.uniform(lo, hi);
    for (std::size_t j = 0; j < i; ++j) {
      if (rng.bernoulli(edge_probability)) {
        edges.push_back({i, j, rng.uniform(lo, hi)});
      }
    }
  }
  return SigmoidBeliefNetwork(std::move(biases), std::move(edges));
}

}  // namespace sbn
