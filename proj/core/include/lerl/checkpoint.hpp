#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lerl/dqn.hpp"

namespace lerl {

inline constexpr char kCheckpointMagic[4] = {'L', 'E', 'R', 'L'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// What a checkpoint persists for one agent. Replay buffers and counters are not stored.
struct AgentSnapshot {
  LayeredNet net;
  double lineage = 0.5;
  std::uint64_t seed = 0;
};

/// Record layout, all little-endian:
///   "LERL" | version u32 | layer count u32 | (rows u32, cols u32) per layer
///   | per layer: weights row-major f64, then bias f64 | lineage f64 | seed u64
void write_agent(std::vector<std::uint8_t>& out, const AgentSnapshot& snapshot);
std::vector<std::uint8_t> encode_agent(const AgentSnapshot& snapshot);

/// Decodes one record starting at `offset` and advances it. The partition index
/// is not part of the format and must come from the run configuration.
/// Throws FormatError / UnsupportedVersionError with the failing byte offset.
AgentSnapshot read_agent(std::span<const std::uint8_t> bytes, std::size_t& offset,
                         std::size_t partition_index);

/// A population file is agent records back to back, in slot order.
void checkpoint_population(const std::vector<QAgent>& population, const std::filesystem::path& path);
/// All-or-nothing: either every record decodes or an exception is thrown.
std::vector<AgentSnapshot> read_population(const std::filesystem::path& path,
                                           std::size_t partition_index);
/// Rebuilds agents with empty buffers and fresh counters.
std::vector<QAgent> restore_population(const std::filesystem::path& path, const DqnConfig& config);

}  // namespace lerl
