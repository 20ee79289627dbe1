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

#include "commgt/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace commgt {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Seed Seed::child(std::uint64_t index) const {
    return Seed{value, splitmix64(stream ^ splitmix64(index + 0x632BE59BD9B4E019ULL))};
}

Rng::Rng(Seed seed) {
    std::uint64_t a = splitmix64(seed.value);
    std::uint64_t b = splitmix64(a ^ seed.stream);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                      static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

bool Rng::bernoulli(double probability) {
    if (probability <= 0.0) return false;
    if (probability >= 1.0) return true;
    return uniform() < probability;
}

std::size_t Rng::below(std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below requires a positive bound");
    // Rejection sampling keeps the draw exactly uniform.
    const std::uint64_t limit = max() - (max() % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x > limit);
    return static_cast<std::size_t>(x % bound);
}

std::vector<std::uint32_t> Rng::choose(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("cannot choose more items than available");
    std::vector<std::uint32_t> out;
    out.reserve(k);
    if (k * 4 >= n) {
        std::vector<std::uint32_t> all(n);
        std::iota(all.begin(), all.end(), 0u);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + below(n - i);
            std::swap(all[i], all[j]);
        }
        out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
        // Floyd's algorithm: k draws without materialising [0, n).
        for (std::size_t j = n - k; j < n; ++j) {
            auto t = static_cast<std::uint32_t>(below(j + 1));
            if (std::find(out.begin(), out.end(), t) == out.end())
                out.push_back(t);
            else
                out.push_back(static_cast<std::uint32_t>(j));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace commgt
