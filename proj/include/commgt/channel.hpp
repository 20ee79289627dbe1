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

#ifndef COMMGT_CHANNEL_HPP
#define COMMGT_CHANNEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commgt/matrix.hpp"
#include "commgt/model.hpp"
#include "commgt/rng.hpp"

namespace commgt {

// Sorted, duplicate-free set of member indices.
class Pool {
   public:
    Pool() = default;
    explicit Pool(std::vector<std::uint32_t> members);
    std::span<const std::uint32_t> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

   private:
    std::vector<std::uint32_t> members_;
};

// Noiseless, or a Z-channel where a positive result reads negative with
// probability z and negatives are never flipped.
class NoiseModel {
   public:
    static NoiseModel noiseless() { return NoiseModel(0.0); }
    static NoiseModel z_channel(double flip_probability);
    double flip_probability() const { return z_; }
    bool is_noiseless() const { return z_ == 0.0; }

   private:
    explicit NoiseModel(double z) : z_(z) {}
    double z_;
};

using OutcomeVector = BitVector;

class TestOracle {
   public:
    TestOracle(const InfectionState& state, NoiseModel noise, Seed seed);

    bool pool_result(const Pool& pool);
    bool pool_result(std::span<const std::uint32_t> members);
    std::size_t tests_performed() const { return tests_; }
    std::size_t population() const { return state_->members.size(); }
    const NoiseModel& noise() const { return noise_; }

   private:
    const InfectionState* state_;
    NoiseModel noise_;
    Rng rng_;
    std::size_t tests_ = 0;
};

OutcomeVector run_matrix(const TestMatrix& matrix, const InfectionState& state, NoiseModel noise, Seed seed);
Pool mixed_sample_pool(const CommunityStructure& structure, std::size_t family,
                       std::span<const std::uint32_t> representatives);

std::string format_bits(const BitVector& bits);
BitVector parse_bits(std::string_view text);

}  // namespace commgt

#endif
