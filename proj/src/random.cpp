#include "sbnmf/random.hpp"

namespace sbn {

namespace {
__extension__ typedef unsigned __int128 uint128;
}

std::size_t Rng::below(std::size_t n) {
  const uint128 wide = static_cast<uint128>(engine_()) * n;
  return static_cast<std::size_t>(wide >> 64);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) {
  std::mt19937_64 step(seed ^ task);
  return step();
}

}  // namespace sbn
