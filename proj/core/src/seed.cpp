#include "lerl/seed.hpp"

namespace lerl {
namespace {

// splitmix64 finalizer
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t agent_id,
                          std::uint64_t generation, SlotTag tag) noexcept {
  std::uint64_t h = mix(master_seed);
  h = mix(h ^ agent_id);
  h = mix(h ^ generation);
  h = mix(h ^ static_cast<std::uint64_t>(tag));
  return h;
}

}  // namespace lerl
