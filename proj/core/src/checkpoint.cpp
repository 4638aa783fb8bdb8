#include "lerl/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "lerl/errors.hpp"

namespace lerl {
namespace {

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  static_assert(std::is_trivially_copyable_v<T> && (sizeof(T) == 4 || sizeof(T) == 8));
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  auto bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(bits & 0xffu));
    bits >>= 8;
  }
}

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t& offset) : bytes_(bytes), offset_(offset) {}

  template <typename T>
  T get(const char* what) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    if (offset_ > bytes_.size() || bytes_.size() - offset_ < sizeof(T)) {
      throw FormatError(std::string("truncated checkpoint while reading ") + what, offset_);
    }
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      bits |= static_cast<U>(bytes_[offset_ + i]) << (8 * i);
    }
    offset_ += sizeof(T);
    return std::bit_cast<T>(bits);
  }

  void expect_magic() {
    if (offset_ > bytes_.size() || bytes_.size() - offset_ < 4) throw FormatError("truncated checkpoint magic", offset_);
    if (std::memcmp(bytes_.data() + offset_, kCheckpointMagic, 4) != 0) {
      throw FormatError("bad checkpoint magic", offset_);
    }
    offset_ += 4;
  }

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t& offset_;
};

}  // namespace

void write_agent(std::vector<std::uint8_t>& out, const AgentSnapshot& snapshot) {
  out.insert(out.end(), std::begin(kCheckpointMagic), std::end(kCheckpointMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  const auto& layers = snapshot.net.layers();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(layers.size()));
  for (const auto& layer : layers) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(layer.rows()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(layer.cols()));
  }
  for (const auto& layer : layers) {
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) put<double>(out, layer.weights(r, c));
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) put<double>(out, layer.bias(r));
  }
  put<double>(out, snapshot.lineage);
  put<std::uint64_t>(out, snapshot.seed);
}

std::vector<std::uint8_t> encode_agent(const AgentSnapshot& snapshot) {
  std::vector<std::uint8_t> out;
  write_agent(out, snapshot);
  return out;
}

AgentSnapshot read_agent(std::span<const std::uint8_t> bytes, std::size_t& offset,
                         std::size_t partition_index) {
  Reader in(bytes, offset);
  in.expect_magic();
  const std::size_t version_offset = in.offset();
  const auto version = in.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) throw UnsupportedVersionError(version, version_offset);

  const std::size_t count_offset = in.offset();
  const auto layer_count = in.get<std::uint32_t>("layer count");
  if (layer_count < 2 || layer_count > 64) {
    throw FormatError("implausible layer count " + std::to_string(layer_count), count_offset);
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shapes(layer_count);
  for (auto& [rows, cols] : shapes) {
    const std::size_t shape_offset = in.offset();
    rows = in.get<std::uint32_t>("layer rows");
    cols = in.get<std::uint32_t>("layer cols");
    if (rows == 0 || cols == 0 ||
        static_cast<std::uint64_t>(rows) * cols > (bytes.size() - in.offset()) / 8) {
      throw FormatError("layer shape inconsistent with file size", shape_offset);
    }
  }

  std::vector<DenseLayer> layers;
  layers.reserve(layer_count);
  for (const auto& [rows, cols] : shapes) {
    DenseLayer layer{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) layer.weights(r, c) = in.get<double>("weights");
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = in.get<double>("bias");
    layers.push_back(std::move(layer));
  }
  AgentSnapshot snapshot;
  snapshot.lineage = in.get<double>("lineage");
  snapshot.seed = in.get<std::uint64_t>("seed");
  try {
    snapshot.net = LayeredNet(std::move(layers), partition_index);
  } catch (const UsageError& e) {
    throw FormatError(std::string("invalid network in checkpoint: ") + e.what(), count_offset);
  }
  return snapshot;
}

void checkpoint_population(const std::vector<QAgent>& population, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  for (const auto& agent : population) {
    write_agent(bytes, AgentSnapshot{agent.online(), agent.lineage(), agent.seed()});
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path.string());
}

std::vector<AgentSnapshot> read_population(const std::filesystem::path& path,
                                           std::size_t partition_index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.empty()) throw FormatError("empty checkpoint file", 0);
  std::vector<AgentSnapshot> snapshots;
  std::size_t offset = 0;
  while (offset < bytes.size()) snapshots.push_back(read_agent(bytes, offset, partition_index));
  return snapshots;
}

std::vector<QAgent> restore_population(const std::filesystem::path& path, const DqnConfig& config) {
  auto snapshots = read_population(path, config.partition_index);
  std::vector<QAgent> population;
  population.reserve(snapshots.size());
  for (auto& s : snapshots) population.emplace_back(std::move(s.net), config, s.seed, s.lineage);
  return population;
}

}  // namespace lerl
