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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "commgt/channel.hpp"
#include "commgt/decoders.hpp"
#include "commgt/designs.hpp"
#include "commgt/errors.hpp"
#include "oracles.hpp"

namespace commgt {
namespace {

LbpConfig config(double z, double q, double p, bool community = true, std::size_t iterations = 10) {
    LbpConfig cfg;
    cfg.iterations = iterations;
    cfg.z = z;
    cfg.family_rate = q;
    cfg.member_rate = {p};
    cfg.community_aware = community;
    return cfg;
}

TEST(Lbp, NoiselessNegativeIsConclusive) {
    auto s = CommunityStructure::symmetric(1, 1);
    auto r = lbp_decode(TestMatrix(1, {{0}}), s, config(0.0, 0.5, 0.5), OutcomeVector{0});
    EXPECT_DOUBLE_EQ((*r.member_posteriors)[0], 0.0);
    EXPECT_EQ(r.hard_calls, BitVector{0});
}

TEST(Lbp, NoiselessPositiveSingletonIsConclusive) {
    auto s = CommunityStructure::symmetric(1, 1);
    auto r = lbp_decode(TestMatrix(1, {{0}}), s, config(0.0, 0.5, 0.5), OutcomeVector{1});
    EXPECT_DOUBLE_EQ((*r.member_posteriors)[0], 1.0);
    EXPECT_DOUBLE_EQ((*r.family_posteriors)[0], 1.0);
}

TEST(Lbp, IndividualTestsMatchEnumeration) {
    auto s = CommunityStructure::symmetric(2, 2);
    const auto g = repetition_matrix(4, 1);
    const auto cfg = config(0.15, 0.3, 0.6);
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
        OutcomeVector y(4);
        for (int t = 0; t < 4; ++t) y[t] = mask >> t & 1u;
        auto r = lbp_decode(g, s, cfg, y);
        auto exact = oracle::exact_posteriors(g, s, cfg, y);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR((*r.member_posteriors)[i], exact.members[i], 1e-9);
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR((*r.family_posteriors)[j], exact.families[j], 1e-9);
    }
}

TEST(Lbp, ForestInstancesMatchEnumeration) {
    Rng rng(Seed{2024, 0});
    for (int trial = 0; trial < 40; ++trial) {
        const bool community = trial % 2 == 0;
        auto inst = oracle::random_forest_instance(rng, 8, community);
        const double z = trial % 4 < 2 ? 0.0 : 0.15;
        auto cfg = config(z, 0.4, 0.5, community, 2 * (inst.structure.members() + inst.structure.families()) + 2);
        InfectionState st = sample_probabilistic(inst.structure, 0.4, cfg.member_rate, Seed{2024, trial + 1u});
        auto y = run_matrix(inst.pools, st, z > 0 ? NoiseModel::z_channel(z) : NoiseModel::noiseless(),
                            Seed{2025, static_cast<std::uint64_t>(trial)});
        auto r = lbp_decode(inst.pools, inst.structure, cfg, y);
        auto exact = oracle::exact_posteriors(inst.pools, inst.structure, cfg, y);
        for (std::size_t i = 0; i < inst.structure.members(); ++i)
            ASSERT_NEAR((*r.member_posteriors)[i], exact.members[i], 1e-9) << "trial " << trial;
        if (community)
            for (std::size_t j = 0; j < inst.structure.families(); ++j)
                ASSERT_NEAR((*r.family_posteriors)[j], exact.families[j], 1e-9);
        else
            EXPECT_FALSE(r.family_posteriors.has_value());
    }
}

TEST(Lbp, MessagesStayNormalizedOnLoopyGraphs) {
    auto s = CommunityStructure::symmetric(20, 5);
    auto g = bernoulli_matrix(40, 100, 0.05, Seed{8, 0});
    auto st = sample_probabilistic(s, 0.1, std::vector<double>{0.8}, Seed{8, 1});
    auto y = run_matrix(g, st, NoiseModel::z_channel(0.15), Seed{8, 2});
    LbpDiagnostics diag;
    auto r = lbp_decode(g, s, config(0.15, 0.1, 0.8, true, 20), y, &diag);
    EXPECT_LE(diag.max_normalization_error, 1e-12);
    EXPECT_GT(diag.messages_sent, 0u);
    for (double p : *r.member_posteriors) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
}

TEST(Lbp, NegativeNoiselessTestForcesAllMembersHealthy) {
    auto s = CommunityStructure::symmetric(2, 3);
    TestMatrix g(6, {{0, 1, 4}, {2, 3, 5}});
    auto r = lbp_decode(g, s, config(0.0, 0.5, 0.5), OutcomeVector{0, 1});
    for (auto i : {0, 1, 4}) {
        EXPECT_DOUBLE_EQ((*r.member_posteriors)[i], 0.0);
        EXPECT_EQ(r.hard_calls[i], 0);
    }
}

TEST(Lbp, HardCallsFollowPosteriorsWithTieToInfected) {
    // No tests, community-agnostic, prior q*p = 0.5 exactly.
    auto s = CommunityStructure::symmetric(1, 2);
    auto r = lbp_decode(TestMatrix(2), s, config(0.1, 1.0, 0.5, false), OutcomeVector{});
    EXPECT_DOUBLE_EQ((*r.member_posteriors)[0], 0.5);
    EXPECT_EQ(r.hard_calls, (BitVector{1, 1}));
}

TEST(Lbp, ContradictoryNoiselessEvidenceIsDegenerate) {
    auto s = CommunityStructure::symmetric(1, 1);
    TestMatrix g(1, {{0}, {0}});
    EXPECT_THROW(lbp_decode(g, s, config(0.0, 0.5, 0.5), OutcomeVector{0, 1}), NumericDegeneracy);
}

TEST(Lbp, RejectsInvalidConfig) {
    auto s = CommunityStructure::symmetric(1, 1);
    TestMatrix g(1, {{0}});
    EXPECT_THROW(lbp_decode(g, s, config(0.0, 0.5, 0.5, true, 0), OutcomeVector{1}), std::invalid_argument);
    EXPECT_THROW(lbp_decode(g, s, config(1.5, 0.5, 0.5), OutcomeVector{1}), std::invalid_argument);
    EXPECT_THROW(lbp_decode(g, s, config(0.1, 0.5, 0.5), OutcomeVector{1, 0}), std::invalid_argument);
}

}  // namespace
}  // namespace commgt
