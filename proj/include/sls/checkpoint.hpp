// Copyright 2026 The sls-rl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binary Q-network checkpoints.
//
// Layout (all integers uint32, all values little-endian):
//
//   offset  field
//   0       magic "SLSQ" (4 bytes)
//   4       format version (= 1)
//   8       architecture tag (0 = standard, 1 = dueling)
//   12      obs_size (network input width)
//   16      hidden width
//   20      action count
//   24      parameter arrays as raw float32, in layer order; per layer the
//           weight matrix (out x in, row-major) followed by the bias vector.
//           Standard layers: hidden1, hidden2, output.
//           Dueling layers:  hidden1, hidden2, value, advantage.
//
// Nothing follows the last array; trailing bytes are rejected.

#ifndef SLS_CHECKPOINT_HPP_
#define SLS_CHECKPOINT_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "sls/neural.hpp"

namespace sls {

inline constexpr std::array<char, 4> kCheckpointMagic = {'S', 'L', 'S', 'Q'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io {

template <typename T>
T ToLittle(T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  } else {
    return v;
  }
}

template <typename T>
void WritePod(std::ostream& os, T v) {
  v = ToLittle(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw CheckpointError("unexpected end of file");
  }
  return ToLittle(v);
}

inline void WriteFloats(std::ostream& os, std::span<const float> xs) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(xs.data()),
             static_cast<std::streamsize>(xs.size_bytes()));
  } else {
    for (float x : xs) WritePod(os, x);
  }
}

inline void ReadFloats(std::istream& is, std::span<float> xs) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!is.read(reinterpret_cast<char*>(xs.data()),
                 static_cast<std::streamsize>(xs.size_bytes()))) {
      throw CheckpointError("unexpected end of file in parameter data");
    }
  } else {
    for (float& x : xs) x = ReadPod<float>(is);
  }
}

}  // namespace io

inline void WriteNetwork(std::ostream& os, const Network<float>& net) {
  os.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  io::WritePod<std::uint32_t>(os, kCheckpointVersion);
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(net.arch));
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(net.input_size));
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(net.hidden));
  io::WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(net.n_actions));
  net.ForEachParameterArray(
      [&](std::span<const float> xs) { io::WriteFloats(os, xs); });
}

// Reads one network; leaves the stream positioned after it.
inline Network<float> ReadNetwork(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kCheckpointMagic) {
    throw CheckpointError("not a checkpoint (bad magic)");
  }
  const auto version = io::ReadPod<std::uint32_t>(is);
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " +
                          std::to_string(version));
  }
  const auto arch = io::ReadPod<std::uint32_t>(is);
  if (arch > 1) throw CheckpointError("unknown architecture tag");
  const auto input = io::ReadPod<std::uint32_t>(is);
  const auto hidden = io::ReadPod<std::uint32_t>(is);
  const auto actions = io::ReadPod<std::uint32_t>(is);
  constexpr std::uint32_t kLimit = 1u << 20;
  if (input == 0 || hidden == 0 || actions == 0 || input > kLimit ||
      hidden > kLimit || actions > kLimit) {
    throw CheckpointError("implausible network dimensions");
  }
  auto net = MakeNetwork<float>(static_cast<Architecture>(arch),
                                static_cast<int>(input),
                                static_cast<int>(hidden),
                                static_cast<int>(actions));
  net.ForEachParameterArray(
      [&](std::span<float> xs) { io::ReadFloats(is, xs); });
  if (!AllFinite(net)) throw CheckpointError("checkpoint holds non-finite values");
  return net;
}

inline void SaveCheckpoint(const std::filesystem::path& path,
                           const Network<float>& net) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CheckpointError("cannot open " + path.string() + " for writing");
  WriteNetwork(os, net);
  if (!os.flush()) throw CheckpointError("write failed: " + path.string());
}

inline Network<float> LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open checkpoint " + path.string());
  auto net = ReadNetwork(is);
  if (is.peek() != std::char_traits<char>::eof()) {
    throw CheckpointError("trailing bytes after parameters in " +
                          path.string());
  }
  return net;
}

}  // namespace sls

#endif  // SLS_CHECKPOINT_HPP_
