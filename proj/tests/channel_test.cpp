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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "commgt/designs.hpp"

namespace commgt {
namespace {

InfectionState state_of(BitVector members, const CommunityStructure& s) {
    InfectionState st{std::move(members), BitVector(s.families(), 0)};
    for (std::size_t i = 0; i < st.members.size(); ++i)
        if (st.members[i]) st.families[s.family_of(i)] = 1;
    return st;
}

TEST(PoolResult, EmptyPoolIsNegative) {
    auto s = CommunityStructure::symmetric(1, 3);
    auto st = state_of({1, 1, 1}, s);
    TestOracle oracle(st, NoiseModel::noiseless(), Seed{});
    EXPECT_FALSE(oracle.pool_result(Pool{}));
    EXPECT_EQ(oracle.tests_performed(), 1u);
}

TEST(PoolResult, NoiselessIsOr) {
    auto s = CommunityStructure::symmetric(1, 4);
    auto st = state_of({0, 0, 1, 0}, s);
    TestOracle oracle(st, NoiseModel::noiseless(), Seed{});
    EXPECT_TRUE(oracle.pool_result(Pool({1, 2})));
    EXPECT_FALSE(oracle.pool_result(Pool({0, 1, 3})));
    EXPECT_EQ(oracle.tests_performed(), 2u);
}

TEST(PoolResult, DegenerateFlipProbabilities) {
    auto s = CommunityStructure::symmetric(1, 2);
    auto st = state_of({1, 0}, s);
    TestOracle always_flip(st, NoiseModel::z_channel(1.0), Seed{1, 0});
    TestOracle half(st, NoiseModel::z_channel(0.5), Seed{1, 0});
    for (int t = 0; t < 100; ++t) {
        EXPECT_FALSE(always_flip.pool_result(Pool({0})));
        EXPECT_FALSE(always_flip.pool_result(Pool({1})));
        EXPECT_FALSE(half.pool_result(Pool({1})));
    }
}

TEST(PoolResult, RejectsOutOfRangeIndex) {
    auto s = CommunityStructure::symmetric(1, 2);
    auto st = state_of({0, 0}, s);
    TestOracle oracle(st, NoiseModel::noiseless(), Seed{});
    EXPECT_THROW(oracle.pool_result(Pool({2})), std::invalid_argument);
    EXPECT_THROW(NoiseModel::z_channel(1.5), std::invalid_argument);
}

TEST(PoolDedup, DuplicatesCollapse) {
    Pool p({3, 1, 3, 1});
    EXPECT_EQ(p.size(), 2u);
    EXPECT_EQ(p.members()[0], 1u);
}

TEST(RunMatrix, IdentityReturnsTruth) {
    auto s = CommunityStructure::symmetric(2, 3);
    BitVector u{1, 0, 0, 1, 1, 0};
    auto y = run_matrix(repetition_matrix(6, 1), state_of(u, s), NoiseModel::noiseless(), Seed{});
    EXPECT_EQ(y, u);
}

TEST(RunMatrix, SmallOrEvaluation) {
    auto s = CommunityStructure::symmetric(1, 3);
    TestMatrix g(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(run_matrix(g, state_of({1, 0, 0}, s), NoiseModel::noiseless(), Seed{}), (OutcomeVector{1, 0}));
}

TEST(RunMatrix, WidthMismatchRejected) {
    auto s = CommunityStructure::symmetric(1, 3);
    EXPECT_THROW(run_matrix(TestMatrix(4), state_of({0, 0, 0}, s), NoiseModel::noiseless(), Seed{}),
                 std::invalid_argument);
}

TEST(RunMatrix, ZChannelFrequency) {
    auto s = CommunityStructure::symmetric(1, 5);
    auto st = state_of({0, 1, 0, 0, 0}, s);
    TestMatrix all(5, {{0, 1, 2, 3, 4}});
    const double z = 0.3;
    const std::size_t seeds = 10000;
    std::size_t ones = 0;
    for (std::size_t t = 0; t < seeds; ++t) ones += run_matrix(all, st, NoiseModel::z_channel(z), Seed{8, t})[0];
    const double sigma = std::sqrt(z * (1 - z) / seeds);
    EXPECT_NEAR(static_cast<double>(ones) / seeds, 1 - z, 3 * sigma);
}

TEST(RunMatrix, NegativesNeverFlipAndCounterIsAdditive) {
    auto s = CommunityStructure::symmetric(2, 2);
    auto st = state_of({0, 0, 1, 1}, s);
    TestMatrix g(4, {{0}, {1}, {0, 1}, {2}, {3}, {}});
    TestOracle oracle(st, NoiseModel::z_channel(0.4), Seed{5, 5});
    for (std::size_t t = 0; t < g.tests(); ++t) {
        const bool y = oracle.pool_result(g.row(t));
        if (t < 3 || t == 5) EXPECT_FALSE(y);
    }
    EXPECT_EQ(oracle.tests_performed(), g.tests());
}

TEST(RunMatrix, NoiseAdvancesOnlyOnPositiveTruth) {
    // Inserting negative-truth tests between positives must not change the positive outcomes.
    auto s = CommunityStructure::symmetric(1, 2);
    auto st = state_of({1, 0}, s);
    TestMatrix dense(2), sparse(2);
    for (int t = 0; t < 50; ++t) {
        dense.add_row({0});
        sparse.add_row({0});
        sparse.add_row({1});
    }
    auto a = run_matrix(dense, st, NoiseModel::z_channel(0.5), Seed{3, 3});
    auto b = run_matrix(sparse, st, NoiseModel::z_channel(0.5), Seed{3, 3});
    for (int t = 0; t < 50; ++t) EXPECT_EQ(a[t], b[2 * t]);
}

TEST(MixedSample, PoolsOfRepresentatives) {
    CommunityStructure s({3, 3});
    const std::vector<std::uint32_t> all{3, 4, 5}, two{3, 4}, none{}, outside{1};
    EXPECT_EQ(mixed_sample_pool(s, 1, all).size(), 3u);
    EXPECT_TRUE(mixed_sample_pool(s, 1, none).empty());
    auto p = mixed_sample_pool(s, 1, two);
    EXPECT_EQ(std::vector<std::uint32_t>(p.members().begin(), p.members().end()), two);
    EXPECT_THROW(mixed_sample_pool(s, 1, outside), std::invalid_argument);
}

TEST(Bits, RoundTrip) {
    BitVector b{1, 0, 0, 1};
    EXPECT_EQ(format_bits(b), "1001");
    EXPECT_EQ(parse_bits("1001"), b);
    EXPECT_THROW(parse_bits("10x"), std::invalid_argument);
}

}  // namespace
}  // namespace commgt
