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

#ifndef COMMGT_ADAPTIVE_HPP
#define COMMGT_ADAPTIVE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "commgt/channel.hpp"
#include "commgt/decoders.hpp"
#include "commgt/designs.hpp"
#include "commgt/model.hpp"

namespace commgt {

struct AdaptiveResult {
    BitVector estimates;
    BitVector family_estimates;
    std::size_t tests_used = 0;
};

// Tests the union of the given item ids; used to run the search routines
// over members or over family mixed samples alike.
using GroupTester = std::function<bool(std::span<const std::uint32_t>)>;

// Ids in [0, count) found positive, ascending.
std::vector<std::uint32_t> binary_splitting_search(std::size_t count, const GroupTester& test);
// With an estimated count nothing is inferred infected without a test, and whatever
// is left once the estimate runs out goes through binary splitting.
std::vector<std::uint32_t> hwang_search(std::size_t count, std::size_t infected, const GroupTester& test,
                                        bool count_is_exact = true);

// Estimates are indexed by population member; members outside `items` stay 0.
AdaptiveResult binary_splitting(std::span<const std::uint32_t> items, TestOracle& oracle);
AdaptiveResult hgbsa(std::span<const std::uint32_t> items, std::size_t infected, TestOracle& oracle);

// Fraction of infected members above which a family counts as heavily infected.
inline constexpr double kHeavyInfectionFraction = 0.38;

// Descriptive label only; the community search branches on mixed-sample outcomes.
bool heavily_infected(std::size_t infected, std::size_t family_size, double threshold = kHeavyInfectionFraction);

enum class SearchKind { BinarySplitting, Hwang };

struct SearchChoice {
    SearchKind kind = SearchKind::BinarySplitting;
    // Infected counts handed to the generalized search in each part.
    std::size_t family_count = 0;
    std::size_t member_count = 0;
    bool counts_exact = true;

    static SearchChoice binary() { return {}; }
    static SearchChoice hwang(std::size_t families, std::size_t members, bool exact = true) {
        return {SearchKind::Hwang, families, members, exact};
    }
};

// Expected positive mixed samples and expected residual infected members
// under the given model, rounded to the nearest count.
SearchChoice hwang_counts_for(const CommunityStructure& structure, const InfectionModelSpec& spec,
                              const RepresentativeRule& rule);

AdaptiveResult adaptive_community(const CommunityStructure& structure, const RepresentativeRule& rule,
                                  const SearchChoice& search, TestOracle& oracle, Seed seed);

enum class PositiveFamilyPolicy { IndividualTests, LabelInfected };

struct StageOneDesign {
    FamilyDesignMode design = OnePerFamily{};
    // COMP when absent.
    std::optional<ThresholdConfig> threshold;
};

struct StageTwoDesign {
    PositiveFamilyPolicy positives = PositiveFamilyPolicy::IndividualTests;
    std::size_t tests = 0;
    std::size_t column_weight = 0;
    std::optional<ThresholdConfig> threshold;
};

struct TwoStageResult : AdaptiveResult {
    std::size_t stage_one_tests = 0;
    std::size_t stage_two_tests = 0;
};

TwoStageResult two_stage(const CommunityStructure& structure, const RepresentativeRule& rule,
                         const StageOneDesign& stage1, const StageTwoDesign& stage2, const InfectionState& state,
                         NoiseModel noise, Seed seed);

}  // namespace commgt

#endif
