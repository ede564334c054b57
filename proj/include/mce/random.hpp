/* Copyright 2026 The mce Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Counter-based random streams.
//
// Draw k of a stream with key K is mix(K + (k + 1) * golden), the SplitMix64
// output function. Streams are addressable at any position, so a consumer can
// regenerate an arbitrary slice of a stream without replaying the prefix, and
// child streams are derived by hashing (parent key, index). Results never
// depend on which thread consumes which stream.

#pragma once

#include <cstdint>
#include <limits>

namespace mce {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Key of the `index`-th child stream of `parent`.
constexpr std::uint64_t child_seed(std::uint64_t parent, std::uint64_t index) {
  return detail::mix64(detail::mix64(parent ^ 0x6A09E667F3BCC909ULL) + (index + 1) * detail::kGolden);
}

/// Uniform double in the open interval (0, 1) from 52 random bits. With 53
/// bits the top value 1 - 2^-54 rounds up to 1.
constexpr double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key, std::uint64_t position = 0)
      : key_(key), pos_(position) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() { return at(pos_++); }

  /// Draw number `k` of this stream, independent of the current position.
  constexpr result_type at(std::uint64_t k) const { return detail::mix64(key_ + (k + 1) * detail::kGolden); }

  constexpr double uniform() { return to_unit_open((*this)()); }
  constexpr double uniform_at(std::uint64_t k) const { return to_unit_open(at(k)); }

  /// Uniform integer in [0, n) by multiply-shift on 64 random bits.
  constexpr std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t position() const { return pos_; }

 private:
  std::uint64_t key_;
  std::uint64_t pos_;
};

}  // namespace mce
