//
// Copyright 2026 The dpmean Authors
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
//

// Reproducible random substreams.
//
// A RandomStream is an immutable (seed, stream_id) descriptor. Draws are
// produced by a StreamCursor, which is owned by exactly one caller. The
// derivation is fixed and must not change between versions, since golden
// test values and published experiment outputs depend on it:
//
//   Mix64(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//              z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//              return z ^ (z >> 31)
//
//   key       = Mix64(seed ^ Mix64(stream_id ^ 0x6A09E667F3BCC909))
//   bits(j)   = Mix64(key + (j + 1) * 0x9E3779B97F4A7C15)   (j = 0, 1, ...)
//   uniform(j) = ((bits(j) >> 11) + 0.5) * 2^-53
//
// The cursor is therefore a SplitMix64 generator started at `key`, and draw j
// can be computed directly from the counter. Uniforms lie strictly inside
// (0, 1): the smallest value is 2^-54 and the largest is 1 - 2^-54.

#ifndef DPMEAN_RANDOM_STREAM_H_
#define DPMEAN_RANDOM_STREAM_H_

#include <cstdint>

namespace dpmean {

inline constexpr uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
inline constexpr uint64_t kStreamSalt = 0x6A09E667F3BCC909ULL;

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct RandomStream {
  uint64_t seed = 0;
  uint64_t stream_id = 0;

  friend bool operator==(const RandomStream&, const RandomStream&) = default;
};

// Substream `stream_id` of `seed`. Any two distinct pairs give independent
// sequences for practical purposes.
RandomStream DeriveStream(uint64_t seed, uint64_t stream_id);

// Mutable draw position within a RandomStream. Not thread-safe; give each
// worker its own cursor.
class StreamCursor {
 public:
  explicit StreamCursor(const RandomStream& stream);

  uint64_t NextBits() {
    ++counter_;
    return Mix64(key_ + counter_ * kGoldenGamma);
  }

  // Uniform double in the open interval (0, 1).
  double NextUniform() {
    constexpr double kTwoToMinus53 = 1.0 / 9007199254740992.0;
    return (static_cast<double>(NextBits() >> 11) + 0.5) * kTwoToMinus53;
  }

  uint64_t draws() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace dpmean

#endif  // DPMEAN_RANDOM_STREAM_H_
