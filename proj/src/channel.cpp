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

#include "commgt/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace commgt {

Pool::Pool(std::vector<std::uint32_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

NoiseModel NoiseModel::z_channel(double flip_probability) {
    if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
        throw std::invalid_argument("Z-channel flip probability must lie in [0, 1]");
    return NoiseModel(flip_probability);
}

TestOracle::TestOracle(const InfectionState& state, NoiseModel noise, Seed seed)
    : state_(&state), noise_(noise), rng_(seed) {}

bool TestOracle::pool_result(const Pool& pool) { return pool_result(pool.members()); }

bool TestOracle::pool_result(std::span<const std::uint32_t> members) {
    const auto& bits = state_->members;
    bool truth = false;
    for (std::uint32_t i : members) {
        if (i >= bits.size()) throw std::invalid_argument("pool member " + std::to_string(i) + " out of range");
        truth = truth || bits[i];
    }
    ++tests_;
    // Only positive truths consume a noise draw.
    if (truth && !noise_.is_noiseless()) return !rng_.bernoulli(noise_.flip_probability());
    return truth;
}

OutcomeVector run_matrix(const TestMatrix& matrix, const InfectionState& state, NoiseModel noise, Seed seed) {
    if (matrix.width() != state.members.size())
        throw std::invalid_argument("matrix width does not match the population size");
    TestOracle oracle(state, noise, seed);
    OutcomeVector y(matrix.tests());
    for (std::size_t t = 0; t < matrix.tests(); ++t) y[t] = oracle.pool_result(std::span(matrix.row(t)));
    return y;
}

Pool mixed_sample_pool(const CommunityStructure& structure, std::size_t family,
                       std::span<const std::uint32_t> representatives) {
    const std::size_t first = structure.first_member(family);
    const std::size_t last = first + structure.family_size(family);
    for (std::uint32_t i : representatives)
        if (i < first || i >= last) throw std::invalid_argument("representative outside its family");
    return Pool({representatives.begin(), representatives.end()});
}

std::string format_bits(const BitVector& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

BitVector parse_bits(std::string_view text) {
    BitVector bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c == '0' || c == '1')
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        else
            throw std::invalid_argument("outcome strings may contain only 0 and 1");
    }
    return bits;
}

}  // namespace commgt
