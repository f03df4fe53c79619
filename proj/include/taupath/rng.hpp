// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace taupath {

/// Counter-based random stream built on Philox4x32-10.
///
/// A stream is identified by 128 bits derived from (seed, path): the first 64
/// bits key the block cipher and the other 64 occupy the upper half of the
/// counter. Output block `i` is Philox(key, {i, id}), so the same (seed,
/// path) gives the same sequence on every platform, and deriving a child is a
/// single block evaluation that depends only on the parent id and the index.
///
/// Copying a stream copies its position: two copies replay identical values.
class RngStream {
 public:
  /// Root stream for `seed` (empty path).
  explicit RngStream(std::uint64_t seed);

  /// Child stream `index` of this stream's path. Does not advance `this`.
  RngStream derive(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();
  /// Uniform on the open interval (0, 1).
  double next_open_uniform();

  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return 2 * counter_ - buffered_; }

  friend bool operator==(const RngStream& a, const RngStream& b) {
    return a.id_ == b.id_ && a.position() == b.position();
  }

 private:
  using Id = std::array<std::uint32_t, 4>;
  explicit RngStream(const Id& id) : id_(id) {}

  void refill();

  Id id_{};
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned buffered_ = 0;
};

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

}  // namespace taupath
