// Copyright 2026 The taupath Authors
// SPDX-License-Identifier: Apache-2.0
#include "taupath/rng.hpp"

namespace taupath {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Key tweak separating child derivation from output blocks.
constexpr std::uint32_t kDeriveTweak0 = 0x5851F42Du;
constexpr std::uint32_t kDeriveTweak1 = 0x4C957F2Du;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t{a} * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t seed)
    : id_(philox4x32_10({0x5EED5EEDu, 0u, 0u, 0u},
                        {static_cast<std::uint32_t>(seed),
                         static_cast<std::uint32_t>(seed >> 32)})) {}

RngStream RngStream::derive(std::uint64_t index) const {
  return RngStream(philox4x32_10(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       id_[2], id_[3]},
      {id_[0] ^ kDeriveTweak0, id_[1] ^ kDeriveTweak1}));
}

void RngStream::refill() {
  const auto block = philox4x32_10(
      {static_cast<std::uint32_t>(counter_),
       static_cast<std::uint32_t>(counter_ >> 32), id_[2], id_[3]},
      {id_[0], id_[1]});
  ++counter_;
  // Consumed from the back so buffer_[1] is handed out first.
  buffer_[1] = (std::uint64_t{block[1]} << 32) | block[0];
  buffer_[0] = (std::uint64_t{block[3]} << 32) | block[2];
  buffered_ = 2;
}

std::uint64_t RngStream::next_u64() {
  if (buffered_ == 0) refill();
  return buffer_[--buffered_];
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_open_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace taupath
