// Copyright 2026 The commgt Authors
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

#ifndef COMMGT_RNG_HPP
#define COMMGT_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace commgt {

struct Seed {
    std::uint64_t value = 0;
    std::uint64_t stream = 0;

    // Derives an independent sub-stream, e.g. one per trial or per purpose.
    Seed child(std::uint64_t index) const;

    friend bool operator==(const Seed&, const Seed&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
   public:
    using result_type = std::uint64_t;

    explicit Rng(Seed seed);

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform();
    bool bernoulli(double probability);
    // Uniform integer in [0, bound).
    std::size_t below(std::size_t bound);
    // k distinct values from [0, n), sorted ascending.
    std::vector<std::uint32_t> choose(std::size_t n, std::size_t k);

   private:
    std::mt19937_64 engine_;
};

}  // namespace commgt

#endif
