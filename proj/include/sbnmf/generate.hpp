#ifndef SBNMF_GENERATE_HPP
#define SBNMF_GENERATE_HPP

#include <cstddef>
#include <cstdint>
#include <span>

#include "sbnmf/network.hpp"

namespace sbn {

/// Layered network with full bipartite edges from each layer to the next.
/// Nodes are numbered top layer first. Every bias and weight is drawn
/// i.i.d. uniform on [lo, hi]: node by node in index order, the bias first
/// and then the weights from its parents in ascending parent order.
SigmoidBeliefNetwork gen_random_layered(std::span<const std::size_t> layers, double lo, double hi,
                                        std::uint64_t seed);

/// Same structure with every weight and bias zero.
SigmoidBeliefNetwork zero_layered(std::span<const std::size_t> layers);

/// Random DAG on n nodes: each pair j < i is an edge with probability
/// edge_probability; parameters uniform on [lo, hi].
SigmoidBeliefNetwork gen_random_dag(std::size_t n, double edge_probability, double lo, double hi, Rng& rng);

}  // namespace sbn

#endif  // SBNMF_GENERATE_HPP
