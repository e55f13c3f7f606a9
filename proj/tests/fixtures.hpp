// Random problem instances shared by the unit and acceptance tests.
#ifndef SBNMF_TESTS_FIXTURES_HPP
#define SBNMF_TESTS_FIXTURES_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "sbnmf/generate.hpp"
#include "sbnmf/mean_field.hpp"
#include "sbnmf/network.hpp"
#include "sbnmf/random.hpp"

namespace fixture {

inline constexpr std::array<std::size_t, 3> kSmallLayers{2, 4, 6};

inline sbn::SigmoidBeliefNetwork layered_2_4_6(sbn::Rng& rng) {
  return sbn::gen_random_layered(kSmallLayers, -1.0, 1.0, rng.next());
}

// Even draws: 2x4x6 layered. Odd draws: sparse random DAG on 3..14 nodes
// with stronger weights.
inline sbn::SigmoidBeliefNetwork mixed_net(sbn::Rng& rng, std::size_t k) {
  if (k % 2 == 0) {
    return layered_2_4_6(rng);
  }
  const std::size_t n = 3 + rng.below(12);
  return sbn::gen_random_dag(n, 0.3, -2.0, 2.0, rng);
}

// Clamps each node with probability 1/2 to a random bit, then clamps more
// until at most max_hidden remain hidden.
inline sbn::Evidence random_evidence(const sbn::SigmoidBeliefNetwork& net, sbn::Rng& rng,
                                     std::size_t max_hidden = 12) {
  sbn::Evidence ev;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (rng.bernoulli(0.5)) {
      ev.clamp(i, rng.bernoulli(0.5) ? 1 : 0);
    }
  }
  while (net.size() - ev.size() > max_hidden) {
    const std::size_t i = rng.below(net.size());
    if (!ev.is_clamped(i)) {
      ev.clamp(i, rng.bernoulli(0.5) ? 1 : 0);
    }
  }
  return ev;
}

// Hidden means uniform on [0.05, 0.95], every xi uniform on [0, 1].
inline sbn::MeanFieldState random_state(const sbn::SigmoidBeliefNetwork& net, const sbn::Evidence& ev,
                                        sbn::Rng& rng) {
  sbn::MeanFieldState s = sbn::MeanFieldState::initial(net, ev);
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (!ev.is_clamped(i)) {
      s.mu[i] = rng.uniform(0.05, 0.95);
    }
    s.xi[i] = rng.uniform();
  }
  return s;
}

inline sbn::Evidence bottom_off(std::size_t first, std::size_t last) {
  sbn::Evidence ev;
  for (std::size_t i = first; i < last; ++i) {
    ev.clamp(i, 0);
  }
  return ev;
}

}  // namespace fixture

#endif  // SBNMF_TESTS_FIXTURES_HPP
