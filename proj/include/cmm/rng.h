// Copyright 2026 The CMM Authors
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
#ifndef CMM_RNG_H
#define CMM_RNG_H

#include <cstdint>
#include <limits>

namespace cmm {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Counter-based splittable generator. Draw i of a stream with key k is mix64(k + (i + 1) * GOLDEN),
/// so any draw can be computed independently of the others and streams are reproducible bit for bit.
/// See docs/rng.md for the full definition.
class CounterRng {
   public:
    using result_type = std::uint64_t;
    static constexpr std::uint64_t GOLDEN = 0x9e3779b97f4a7c15ull;
    static constexpr std::uint64_t SPLIT = 0xd1b54a32d192ed03ull;

    explicit CounterRng(std::uint64_t seed) : key_(seed) {
    }

    static constexpr std::uint64_t at(std::uint64_t key, std::uint64_t index) {
        return mix64(key + (index + 1) * GOLDEN);
    }
    /// 53-bit uniform double in [0, 1).
    static constexpr double uniform_at(std::uint64_t key, std::uint64_t index) {
        return static_cast<double>(at(key, index) >> 11) * 0x1.0p-53;
    }

    std::uint64_t operator()() {
        return at(key_, counter_++);
    }
    double uniform() {
        return uniform_at(key_, counter_++);
    }
    /// Standard normal via Box-Muller (consumes two draws).
    double normal();

    /// Independent child stream.
    CounterRng split(std::uint64_t stream) const {
        return CounterRng(mix64(key_ ^ mix64((stream + 1) * SPLIT)));
    }

    std::uint64_t key() const {
        return key_;
    }
    std::uint64_t counter() const {
        return counter_;
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace cmm

#endif
