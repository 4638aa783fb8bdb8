#pragma once

#include <cstddef>
#include <cstdint>

#include "lerl/env.hpp"
#include "lerl/layered_net.hpp"

namespace lerl {

/// Mean undiscounted return of `episodes` greedy (argmax-Q, no exploration)
/// episodes on `env`. Episodes are capped by the environment.
double evaluate_deterministic(Environment& env, const LayeredNet& net, std::size_t episodes);

/// Same, on a fresh environment whose noise stream is seeded with
/// `eval_seed`, so scoring never touches any training stream.
double evaluate_deterministic(const EnvConfig& config, const LayeredNet& net, std::size_t episodes,
                              std::uint64_t eval_seed);

}  // namespace lerl
