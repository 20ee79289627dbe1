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

#include "commgt/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "oracles.hpp"

namespace commgt {
namespace {

TEST(CommunityStructure, LayoutIsFamilyContiguous) {
    CommunityStructure s({5, 5});
    EXPECT_EQ(s.families(), 2u);
    EXPECT_EQ(s.members(), 10u);
    EXPECT_EQ(s.family_of(7), 1u);
    EXPECT_EQ(s.first_member(1), 5u);
    EXPECT_EQ(s.members_of(1), (std::vector<std::uint32_t>{5, 6, 7, 8, 9}));
}

TEST(CommunityStructure, SymmetricClassroomScale) {
    auto s = CommunityStructure::symmetric(20, 50);
    EXPECT_EQ(s.families(), 20u);
    EXPECT_EQ(s.members(), 1000u);
    EXPECT_TRUE(s.is_symmetric());
}

TEST(CommunityStructure, FamilyOfIsTotalAndConsistent) {
    CommunityStructure s({3, 1, 4, 2});
    for (std::size_t j = 0; j < s.families(); ++j)
        for (auto i : s.members_of(j)) EXPECT_EQ(s.family_of(i), j);
    EXPECT_EQ(s.min_family_size(), 1u);
    EXPECT_EQ(s.max_family_size(), 4u);
    EXPECT_FALSE(s.is_symmetric());
    EXPECT_THROW(s.family_of(10), std::out_of_range);
}

TEST(CommunityStructure, RejectsEmptyOrZeroSizes) {
    EXPECT_THROW(CommunityStructure({}), std::invalid_argument);
    EXPECT_THROW(CommunityStructure({3, 0}), std::invalid_argument);
}

TEST(Combinatorial, NoInfectedFamiliesGivesAllZero) {
    auto s = CommunityStructure::symmetric(4, 3);
    const std::size_t km = 2;
    auto st = sample_combinatorial(s, 0, {&km, 1}, Seed{3, 0});
    EXPECT_EQ(st.infected_members(), 0u);
    EXPECT_EQ(st.infected_families(), 0u);
}

TEST(Combinatorial, FullInfectionGivesAllOne) {
    CommunityStructure s({2, 3, 1});
    const std::vector<std::size_t> km{2, 3, 1};
    auto st = sample_combinatorial(s, 3, km, Seed{3, 0});
    EXPECT_EQ(st.infected_members(), 6u);
    EXPECT_EQ(st.infected_families(), 3u);
}

TEST(Combinatorial, ExactCountsAndFamilyFrequency) {
    auto s = CommunityStructure::symmetric(200, 5);
    const std::size_t km = 3;
    const std::size_t samples = 10000;
    std::vector<std::size_t> hits(200, 0);
    for (std::size_t t = 0; t < samples; ++t) {
        auto st = sample_combinatorial(s, 10, {&km, 1}, Seed{11, t});
        ASSERT_EQ(st.infected_members(), 30u);
        ASSERT_TRUE(st.consistent_with(s));
        for (std::size_t j = 0; j < 200; ++j) {
            const auto c = st.infected_in_family(s, j);
            ASSERT_TRUE(c == 0 || c == 3);
            ASSERT_EQ(st.families[j] != 0, c == 3);
            hits[j] += st.families[j];
        }
    }
    const double sigma = std::sqrt(0.05 * 0.95 / samples);
    for (std::size_t j = 0; j < 200; ++j) EXPECT_NEAR(static_cast<double>(hits[j]) / samples, 0.05, 4 * sigma) << j;
}

TEST(Combinatorial, FamilySubsetsAreUniform) {
    // Chi-square over all C(5,2)=10 family subsets; 27.88 is the 0.999 quantile at 9 dof.
    auto s = CommunityStructure::symmetric(5, 2);
    const std::size_t km = 1, samples = 20000;
    std::map<std::vector<std::uint32_t>, std::size_t> counts;
    for (std::size_t t = 0; t < samples; ++t) {
        auto st = sample_combinatorial(s, 2, {&km, 1}, Seed{5, t});
        std::vector<std::uint32_t> fams;
        for (std::uint32_t j = 0; j < 5; ++j)
            if (st.families[j]) fams.push_back(j);
        ++counts[fams];
    }
    ASSERT_EQ(counts.size(), 10u);
    double chi2 = 0.0;
    const double expected = samples / 10.0;
    for (auto& [k, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_LT(chi2, 27.88);
}

TEST(Combinatorial, ZeroInfectedMembersInInfectedFamilyIsLegal) {
    auto s = CommunityStructure::symmetric(3, 2);
    const std::size_t km = 0;
    auto st = sample_combinatorial(s, 2, {&km, 1}, Seed{1, 0});
    EXPECT_EQ(st.infected_families(), 2u);
    EXPECT_EQ(st.infected_members(), 0u);
    EXPECT_TRUE(st.consistent_with(s));
}

TEST(Combinatorial, RejectsInfeasibleCounts) {
    auto s = CommunityStructure::symmetric(3, 2);
    const std::size_t ok = 1, big = 3;
    EXPECT_THROW(sample_combinatorial(s, 4, {&ok, 1}, Seed{}), std::invalid_argument);
    EXPECT_THROW(sample_combinatorial(s, 1, {&big, 1}, Seed{}), std::invalid_argument);
    const std::vector<std::size_t> wrong_length{1, 1};
    EXPECT_THROW(sample_combinatorial(s, 1, wrong_length, Seed{}), std::invalid_argument);
}

TEST(Probabilistic, DegenerateRates) {
    auto s = CommunityStructure::symmetric(6, 4);
    const double zero = 0.0, one = 1.0;
    EXPECT_EQ(sample_probabilistic(s, 0.0, {&one, 1}, Seed{2, 0}).infected_members(), 0u);
    auto all = sample_probabilistic(s, 1.0, {&one, 1}, Seed{2, 0});
    EXPECT_EQ(all.infected_members(), 24u);
    EXPECT_EQ(all.infected_families(), 6u);
    EXPECT_EQ(sample_probabilistic(s, 1.0, {&zero, 1}, Seed{2, 0}).infected_members(), 0u);
}

TEST(Probabilistic, MeanInfectedCount) {
    auto s = CommunityStructure::symmetric(200, 5);
    const double p = 0.5, q = 0.2;
    const std::size_t samples = 10000;
    double sum = 0.0, sq = 0.0;
    for (std::size_t t = 0; t < samples; ++t) {
        const double k = static_cast<double>(sample_probabilistic(s, q, {&p, 1}, Seed{9, t}).infected_members());
        sum += k;
        sq += k * k;
    }
    // Per family: count = V * Bin(5, p); variance = q*5p(1-p) + q(1-q)(5p)^2.
    const double per_family_var = q * 5 * p * (1 - p) + q * (1 - q) * 25 * p * p;
    const double se = std::sqrt(200 * per_family_var / samples);
    EXPECT_NEAR(sum / samples, 100.0, 3 * se);
}

TEST(Probabilistic, RejectsOutOfRange) {
    auto s = CommunityStructure::symmetric(2, 2);
    const double bad = 1.5, ok = 0.5;
    EXPECT_THROW(sample_probabilistic(s, -0.1, {&ok, 1}, Seed{}), std::invalid_argument);
    EXPECT_THROW(sample_probabilistic(s, 0.5, {&bad, 1}, Seed{}), std::invalid_argument);
}

TEST(Sampling, IdenticalSeedReproducesState) {
    CommunityStructure s({4, 7, 3, 9});
    InfectionModelSpec spec = ProbabilisticModel{0.5, {0.3, 0.6, 0.9, 0.1}};
    auto a = sample_state(s, spec, Seed{42, 7});
    auto b = sample_state(s, spec, Seed{42, 7});
    auto c = sample_state(s, spec, Seed{42, 8});
    EXPECT_EQ(a.members, b.members);
    EXPECT_EQ(a.families, b.families);
    (void)c;
}

TEST(Sampling, FamilyGateHoldsForEverySample) {
    CommunityStructure s({2, 5, 3});
    InfectionModelSpec spec = ProbabilisticModel{0.4, {0.7}};
    for (std::uint64_t t = 0; t < 500; ++t) EXPECT_TRUE(sample_state(s, spec, Seed{1, t}).consistent_with(s));
}

TEST(Representatives, PerFamilyDrawsWithinFamilies) {
    CommunityStructure s({4, 6, 5});
    auto sets = RepresentativeRule::per_family(3).select(s, Seed{4, 1});
    ASSERT_EQ(sets.size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(sets[j].size(), 3u);
        for (auto i : sets[j]) EXPECT_EQ(s.family_of(i), j);
    }
}

TEST(Representatives, AllMembersAndExplicit) {
    CommunityStructure s({2, 3});
    auto all = RepresentativeRule::all_members().select(s, Seed{});
    EXPECT_EQ(all[1], (std::vector<std::uint32_t>{2, 3, 4}));
    auto ex = RepresentativeRule::explicit_sets({{1}, {}});
    EXPECT_EQ(ex.select(s, Seed{})[0], (std::vector<std::uint32_t>{1}));
    EXPECT_THROW(RepresentativeRule::explicit_sets({{2}, {}}).validate(s), std::invalid_argument);
    EXPECT_THROW(RepresentativeRule::per_family(3).validate(s), std::invalid_argument);
}

}  // namespace
}  // namespace commgt
