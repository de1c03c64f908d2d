// Copyright 2026 The bioevents Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BIOEVENTS_CORE_RANDOM_H_
#define BIOEVENTS_CORE_RANDOM_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace bioevents {

// 64-bit FNV-1a. Used for seed derivation, checkpoint checksums and digests.
constexpr std::uint64_t fnv1a(std::string_view data,
                              std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex_digest(std::string_view data);

// Seeded generator whose output is identical on every platform:
// std::mt19937_64 is fully specified, and the bounded draw below avoids the
// implementation-defined std::uniform_int_distribution.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}
  DeterministicRng(std::uint64_t seed, std::string_view stream)
      : engine_(fnv1a(stream, seed ^ 0x9e3779b97f4a7c15ULL)) {}

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [0, 1).
  double unit();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // k distinct indices from [0, n), in draw order. k must be <= n.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bioevents

#endif  // BIOEVENTS_CORE_RANDOM_H_
