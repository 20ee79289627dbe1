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

#include "commgt/designs.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace commgt {
namespace {

bool all_ones(const TestMatrix& m) {
    for (const auto& r : m.rows())
        if (r.size() != m.width()) return false;
    return true;
}

TEST(Bernoulli, DegenerateDensities) {
    EXPECT_TRUE(all_ones(bernoulli_matrix(5, 7, 1.0, Seed{1, 0})));
    EXPECT_EQ(bernoulli_matrix(5, 7, 0.0, Seed{1, 0}).nonzeros(), 0u);
    EXPECT_EQ(bernoulli_matrix(5, 7, 0.0, Seed{1, 0}).tests(), 5u);
}

TEST(Bernoulli, EmpiricalDensity) {
    auto m = bernoulli_matrix(200, 100, 0.3, Seed{17, 0});
    const double cells = 200.0 * 100.0;
    EXPECT_NEAR(m.nonzeros() / cells, 0.3, 3 * std::sqrt(0.3 * 0.7 / cells));
}

TEST(Bernoulli, RejectsBadParameters) {
    EXPECT_THROW(bernoulli_matrix(5, 5, 1.2, Seed{}), std::invalid_argument);
    EXPECT_THROW(bernoulli_matrix(5, 5, -0.1, Seed{}), std::invalid_argument);
    EXPECT_THROW(bernoulli_matrix(0, 5, 0.5, Seed{}), std::invalid_argument);
}

TEST(ConstantWeight, DegenerateWeights) {
    EXPECT_TRUE(all_ones(constant_column_weight_matrix(4, 6, 4, Seed{2, 0})));
    EXPECT_EQ(constant_column_weight_matrix(4, 6, 0, Seed{2, 0}).nonzeros(), 0u);
    EXPECT_THROW(constant_column_weight_matrix(4, 6, 5, Seed{}), std::invalid_argument);
}

TEST(ConstantWeight, EveryColumnHasExactWeight) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto m = constant_column_weight_matrix(13, 40, 5, Seed{s, 1});
        for (auto w : m.column_weights()) ASSERT_EQ(w, 5u);
    }
}

TEST(ConstantWeight, SupportsAreUniform) {
    // 15 possible supports of size 2 out of 6 rows; each should appear with frequency 1/15.
    const std::size_t seeds = 6000;
    std::map<std::vector<std::uint32_t>, std::size_t> counts;
    for (std::size_t s = 0; s < seeds; ++s) {
        auto m = constant_column_weight_matrix(6, 4, 2, Seed{31, s});
        for (const auto& col : m.column_supports()) {
            ASSERT_EQ(col.size(), 2u);
            ++counts[col];
        }
    }
    ASSERT_EQ(counts.size(), 15u);
    const double draws = seeds * 4.0, p = 1.0 / 15.0;
    for (auto& [support, c] : counts) EXPECT_NEAR(c / draws, p, 3.5 * std::sqrt(p * (1 - p) / draws));
}

TEST(Repetition, Layout) {
    auto id = repetition_matrix(3, 1);
    EXPECT_EQ(id, TestMatrix(3, {{0}, {1}, {2}}));
    auto m = repetition_matrix(2, 3);
    EXPECT_EQ(m.tests(), 6u);
    EXPECT_EQ(m.column_supports()[0], (std::vector<std::uint32_t>{0, 2, 4}));
    for (auto w : repetition_matrix(7, 4).column_weights()) EXPECT_EQ(w, 4u);
    EXPECT_THROW(repetition_matrix(3, 0), std::invalid_argument);
}

TEST(CommunityG2, CanonicalLayoutOfSixFamilies) {
    auto s = CommunityStructure::symmetric(6, 2);
    auto layout = community_g2_layout(s, BlockDesignSpec::from_counts({2, 1, 3}), BlockAssignment::Canonical);
    EXPECT_EQ(layout.family_row, (std::vector<std::size_t>{0, 1, 2, 0, 2, 2}));
    EXPECT_EQ(layout.matrix.tests(), 6u);
    EXPECT_EQ(layout.matrix.row(0), (Row{0, 6}));
    EXPECT_EQ(layout.matrix.row(2), (Row{2}));
    EXPECT_EQ(layout.matrix.row(5), (Row{5, 9, 11}));
}

TEST(CommunityG2, OneFamilyPerRowIsIndividualTesting) {
    auto s = CommunityStructure::symmetric(4, 3);
    auto g2 = community_g2(s, BlockDesignSpec::symmetric(4, 4), BlockAssignment::Canonical);
    EXPECT_EQ(g2, repetition_matrix(12, 1));
}

TEST(CommunityG2, StructuralProperties) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto s = CommunityStructure::symmetric(12, 5);
        auto layout = community_g2_layout(s, BlockDesignSpec::symmetric(12, 3), BlockAssignment::Random, Seed{seed, 0});
        const auto& g2 = layout.matrix;
        EXPECT_EQ(g2.tests(), 15u);
        for (auto w : g2.column_weights()) EXPECT_EQ(w, 1u);
        // Two families either share all M rows or none.
        auto cols = g2.column_supports();
        for (std::size_t a = 0; a < 12; ++a)
            for (std::size_t b = 0; b < 12; ++b) {
                const bool shared = layout.family_row[a] == layout.family_row[b];
                for (std::size_t m = 0; m < 5; ++m) EXPECT_EQ(cols[a * 5 + m] == cols[b * 5 + m], shared);
            }
    }
}

TEST(CommunityG2, PadsWithAuxiliaryFamilies) {
    auto spec = BlockDesignSpec::symmetric(10, 4);
    EXPECT_EQ(spec.per_row(), (std::vector<std::size_t>{3, 3, 3, 3}));
    EXPECT_EQ(spec.auxiliary_families(), 2u);
    auto g2 = community_g2(CommunityStructure::symmetric(10, 2), spec, BlockAssignment::Random, Seed{1, 1});
    EXPECT_EQ(g2.tests(), 8u);
    EXPECT_EQ(g2.width(), 20u);
    for (auto w : g2.column_weights()) EXPECT_EQ(w, 1u);
}

TEST(CommunityG2, RejectsBadSpecs) {
    auto s = CommunityStructure::symmetric(6, 2);
    EXPECT_THROW(community_g2(s, BlockDesignSpec::from_counts({2, 2}), BlockAssignment::Canonical),
                 std::invalid_argument);
    EXPECT_THROW(community_g2(CommunityStructure({2, 3}), BlockDesignSpec::from_counts({2})), std::invalid_argument);
    EXPECT_THROW(BlockDesignSpec::from_counts({}), std::invalid_argument);
}

TEST(CommunityG1, OnePerFamilyWithAllMembers) {
    CommunityStructure s({3, 2, 4});
    auto g1 = community_g1(s, OnePerFamily{}, RepresentativeRule::all_members(), Seed{});
    EXPECT_EQ(g1.tests(), 3u);
    EXPECT_EQ(g1.row(2), (Row{5, 6, 7, 8}));
}

TEST(CommunityG1, SingleRepresentativeGivesSingletons) {
    auto s = CommunityStructure::symmetric(4, 5);
    auto g1 = community_g1(s, OnePerFamily{}, 1, Seed{6, 0});
    EXPECT_EQ(g1.tests(), 4u);
    for (std::size_t j = 0; j < 4; ++j) {
        ASSERT_EQ(g1.row(j).size(), 1u);
        EXPECT_EQ(s.family_of(g1.row(j)[0]), j);
    }
}

TEST(CommunityG1, SparseFullWeightPutsEveryFamilyInEveryTest) {
    auto s = CommunityStructure::symmetric(5, 2);
    auto g1 = community_g1(s, SparseFamilyDesign{3, 3}, RepresentativeRule::all_members(), Seed{2, 2});
    EXPECT_EQ(g1.tests(), 3u);
    for (const auto& r : g1.rows()) EXPECT_EQ(r.size(), 10u);
}

TEST(CommunityG1, SparseReplicatesFamilyColumns) {
    auto s = CommunityStructure::symmetric(8, 3);
    auto g1 = community_g1(s, SparseFamilyDesign{6, 2}, 2, Seed{4, 4});
    auto cols = g1.column_supports();
    for (std::size_t j = 0; j < 8; ++j) {
        std::size_t used = 0;
        std::vector<std::uint32_t> support;
        for (auto i : s.members_of(j)) {
            if (cols[i].empty()) continue;
            if (used++ == 0) support = cols[i];
            EXPECT_EQ(cols[i], support);
            EXPECT_EQ(cols[i].size(), 2u);
        }
        EXPECT_EQ(used, 2u);
    }
    auto collapsed = collapse_to_families(g1, s);
    for (auto w : collapsed.column_weights()) EXPECT_EQ(w, 2u);
}

TEST(CommunityG1, RejectsTooManyRepresentatives) {
    CommunityStructure s({3, 2});
    EXPECT_THROW(community_g1(s, OnePerFamily{}, 3, Seed{}), std::invalid_argument);
}

TEST(Stack, ConcatenatesRows) {
    auto s = CommunityStructure::symmetric(3, 2);
    auto g1 = community_g1(s, OnePerFamily{}, RepresentativeRule::all_members(), Seed{});
    auto g2 = community_g2(s, BlockDesignSpec::from_counts({2, 1}), BlockAssignment::Canonical);
    EXPECT_EQ(stack(TestMatrix(6), g2), g2);
    auto g = stack(g1, g2);
    EXPECT_EQ(g.tests(), g1.tests() + g2.tests());
    for (std::size_t t = 0; t < g1.tests(); ++t) EXPECT_EQ(g.row(t), g1.row(t));
    for (std::size_t t = 0; t < g2.tests(); ++t) EXPECT_EQ(g.row(g1.tests() + t), g2.row(t));
    std::stringstream ss;
    write_matrix(ss, g);
    EXPECT_EQ(read_matrix(ss), g);
    EXPECT_EQ(format_matrix(parse_matrix(format_matrix(g))), format_matrix(g));
    EXPECT_THROW(stack(g1, TestMatrix(5)), std::invalid_argument);
}

TEST(MatrixFormat, RejectsMalformedInput) {
    EXPECT_THROW(parse_matrix("2 3\n0 5\n1\n"), std::invalid_argument);
    EXPECT_THROW(parse_matrix("2 3\n0\n"), std::invalid_argument);
    EXPECT_THROW(TestMatrix(2, {{0, 2}}), std::invalid_argument);
}

}  // namespace
}  // namespace commgt
