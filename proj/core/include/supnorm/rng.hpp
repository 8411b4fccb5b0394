#pragma once

#include <cstdint>
#include <random>

namespace supnorm {

/// Addresses one reproducible random stream.
///
/// The same (master_seed, stream_id) always yields the same engine state;
/// distinct pairs are decorrelated through a seed_seq mixing step. Hierarchies
/// of streams (replication -> data -> bootstrap replicate) are built with
/// child().
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  /// A sub-stream of this stream, keyed by `sub`.
  RngSpec child(std::uint64_t sub) const;

  std::mt19937_64 engine() const;

  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

}  // namespace supnorm
