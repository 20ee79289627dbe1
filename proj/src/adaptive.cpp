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

#include "commgt/adaptive.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "commgt/bounds.hpp"

namespace commgt {

namespace {

enum : std::uint8_t { kUnknown = 0, kInfected = 1, kCleared = 2 };

void compact(std::vector<std::uint32_t>& pending, const std::vector<std::uint8_t>& status) {
    std::erase_if(pending, [&](std::uint32_t id) { return status[id] != kUnknown; });
}

std::vector<std::uint32_t> collect(const std::vector<std::uint8_t>& status) {
    std::vector<std::uint32_t> out;
    for (std::size_t id = 0; id < status.size(); ++id)
        if (status[id] == kInfected) out.push_back(static_cast<std::uint32_t>(id));
    return out;
}

// Halves a known-positive group until one infected id remains. The tested
// half is the larger one; a negative half is cleared, the untested half of a
// positive split goes back to the pending pool.
std::uint32_t isolate_one(std::vector<std::uint32_t> group, std::vector<std::uint8_t>& status,
                          const GroupTester& test) {
    while (group.size() > 1) {
        const std::size_t half = (group.size() + 1) / 2;
        std::span<const std::uint32_t> first(group.data(), half);
        if (test(first)) {
            group.resize(half);
        } else {
            for (std::uint32_t id : first) status[id] = kCleared;
            group.erase(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(half));
        }
    }
    status[group[0]] = kInfected;
    return group[0];
}

}  // namespace

std::vector<std::uint32_t> binary_splitting_search(std::size_t count, const GroupTester& test) {
    std::vector<std::uint8_t> status(count, kUnknown);
    std::vector<std::uint32_t> pending(count);
    std::iota(pending.begin(), pending.end(), 0u);
    while (!pending.empty()) {
        if (!test(pending)) break;
        isolate_one(pending, status, test);
        compact(pending, status);
    }
    return collect(status);
}

std::vector<std::uint32_t> hwang_search(std::size_t count, std::size_t infected, const GroupTester& test,
                                        bool count_is_exact) {
    if (infected > count) throw std::invalid_argument("infected count exceeds the number of items");
    std::vector<std::uint8_t> status(count, kUnknown);
    std::vector<std::uint32_t> pending(count);
    std::iota(pending.begin(), pending.end(), 0u);
    std::size_t k = infected;
    while (!pending.empty() && k > 0) {
        const std::size_t m = pending.size();
        if (m <= k && count_is_exact) {
            for (std::uint32_t id : pending) status[id] = kInfected;
            break;
        }
        if (m + 2 <= 2 * k) {
            const std::uint32_t id = pending.front();
            status[id] = test(std::span(&id, 1)) ? kInfected : kCleared;
            k -= status[id] == kInfected;
            compact(pending, status);
            continue;
        }
        const std::size_t ratio = (m - k) / k;
        const std::size_t group = ratio >= 1 ? std::bit_floor(ratio) : 1;
        std::vector<std::uint32_t> head(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(group));
        if (!test(head)) {
            for (std::uint32_t id : head) status[id] = kCleared;
        } else {
            isolate_one(std::move(head), status, test);
            --k;
        }
        compact(pending, status);
    }
    if (!count_is_exact && !pending.empty()) {
        std::vector<std::uint32_t> ids;
        GroupTester remaining = [&](std::span<const std::uint32_t> local) {
            ids.clear();
            for (std::uint32_t i : local) ids.push_back(pending[i]);
            return test(ids);
        };
        for (std::uint32_t i : binary_splitting_search(pending.size(), remaining)) status[pending[i]] = kInfected;
    }
    return collect(status);
}

namespace {

GroupTester member_tester(std::span<const std::uint32_t> items, TestOracle& oracle,
                          std::vector<std::uint32_t>& scratch) {
    return [items, &oracle, &scratch](std::span<const std::uint32_t> ids) {
        scratch.clear();
        for (std::uint32_t id : ids) scratch.push_back(items[id]);
        return oracle.pool_result(std::span<const std::uint32_t>(scratch));
    };
}

AdaptiveResult member_result(std::span<const std::uint32_t> items, const std::vector<std::uint32_t>& positives,
                             const TestOracle& oracle, std::size_t start) {
    AdaptiveResult r;
    r.estimates.assign(oracle.population(), 0);
    for (std::uint32_t id : positives) r.estimates[items[id]] = 1;
    r.tests_used = oracle.tests_performed() - start;
    return r;
}

}  // namespace

AdaptiveResult binary_splitting(std::span<const std::uint32_t> items, TestOracle& oracle) {
    const std::size_t start = oracle.tests_performed();
    std::vector<std::uint32_t> scratch;
    auto positives = binary_splitting_search(items.size(), member_tester(items, oracle, scratch));
    return member_result(items, positives, oracle, start);
}

AdaptiveResult hgbsa(std::span<const std::uint32_t> items, std::size_t infected, TestOracle& oracle) {
    if (infected > items.size()) throw std::invalid_argument("known infected count exceeds the item count");
    const std::size_t start = oracle.tests_performed();
    std::vector<std::uint32_t> scratch;
    auto positives = hwang_search(items.size(), infected, member_tester(items, oracle, scratch));
    return member_result(items, positives, oracle, start);
}

bool heavily_infected(std::size_t infected, std::size_t family_size, double threshold) {
    if (family_size == 0 || infected > family_size) throw std::invalid_argument("infected count exceeds family size");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("threshold must lie in [0, 1]");
    return static_cast<double>(infected) > threshold * static_cast<double>(family_size);
}

SearchChoice hwang_counts_for(const CommunityStructure& structure, const InfectionModelSpec& spec,
                              const RepresentativeRule& rule) {
    rule.validate(structure);
    auto reps_in = [&](std::size_t j) { return rule.size_for(structure, j); };
    const std::size_t family_count = structure.families();
    double families = 0.0, members = 0.0;
    bool exact = false;
    if (const auto* comb = std::get_if<CombinatorialModel>(&spec)) {
        comb->validate(structure);
        double hit_sum = 0.0, residual_sum = 0.0;
        // Counts are certain when every family's mixed sample is surely positive or surely
        // negative, the same way for all, and any residual count is the same for all.
        exact = true;
        const double first =
            positive_fraction_combinatorial(structure.family_size(0), comb->members_for(0), reps_in(0));
        for (std::size_t j = 0; j < family_count; ++j) {
            const std::size_t size = structure.family_size(j), infected = comb->members_for(j), reps = reps_in(j);
            const double hit = positive_fraction_combinatorial(size, infected, reps);
            hit_sum += hit;
            residual_sum += static_cast<double>(infected) * (1.0 - hit);
            exact =
                exact && (hit == 0.0 || hit == 1.0) && hit == first && (hit == 1.0 || infected == comb->members_for(0));
        }
        const double share = static_cast<double>(comb->infected_families) / static_cast<double>(family_count);
        families = share * hit_sum;
        members = share * residual_sum;
    } else {
        const auto& prob = std::get<ProbabilisticModel>(spec);
        prob.validate(structure);
        for (std::size_t j = 0; j < family_count; ++j) {
            const double member_p = prob.rate_for(j);
            const std::size_t size = structure.family_size(j), reps = reps_in(j);
            families += prob.family_rate * positive_fraction_probabilistic(member_p, reps, size);
            members += prob.family_rate * std::pow(1.0 - member_p, static_cast<double>(reps)) *
                       static_cast<double>(size - reps) * member_p;
        }
    }
    return SearchChoice::hwang(static_cast<std::size_t>(std::llround(families)),
                               static_cast<std::size_t>(std::llround(members)), exact);
}

AdaptiveResult adaptive_community(const CommunityStructure& structure, const RepresentativeRule& rule,
                                  const SearchChoice& search, TestOracle& oracle, Seed seed) {
    if (oracle.population() != structure.members())
        throw std::invalid_argument("oracle population does not match the community");
    const auto reps = rule.select(structure, seed);
    const std::size_t start = oracle.tests_performed();
    const std::size_t family_count = structure.families();

    // Part 1: search over family mixed samples.
    std::vector<std::uint32_t> scratch;
    GroupTester mixed = [&](std::span<const std::uint32_t> ids) {
        scratch.clear();
        for (std::uint32_t f : ids) scratch.insert(scratch.end(), reps[f].begin(), reps[f].end());
        return oracle.pool_result(std::span<const std::uint32_t>(scratch));
    };
    const auto positive_families =
        search.kind == SearchKind::Hwang
            ? hwang_search(family_count, std::min(search.family_count, family_count), mixed, search.counts_exact)
            : binary_splitting_search(family_count, mixed);

    AdaptiveResult result;
    result.family_estimates.assign(family_count, 0);
    result.estimates.assign(structure.members(), 0);
    for (std::uint32_t f : positive_families) result.family_estimates[f] = 1;

    // Part 2: individual tests inside positive families, one search over the rest.
    std::vector<std::uint32_t> rest;
    for (std::size_t j = 0; j < family_count; ++j) {
        const std::size_t first = structure.first_member(j);
        for (std::size_t m = 0; m < structure.family_size(j); ++m) {
            const auto i = static_cast<std::uint32_t>(first + m);
            if (result.family_estimates[j])
                result.estimates[i] = oracle.pool_result(std::span(&i, 1));
            else
                rest.push_back(i);
        }
    }
    GroupTester members = member_tester(rest, oracle, scratch);
    const auto positives =
        search.kind == SearchKind::Hwang
            ? hwang_search(rest.size(), std::min(search.member_count, rest.size()), members, search.counts_exact)
            : binary_splitting_search(rest.size(), members);
    for (std::uint32_t id : positives) result.estimates[rest[id]] = 1;
    result.tests_used = oracle.tests_performed() - start;
    return result;
}

TwoStageResult two_stage(const CommunityStructure& structure, const RepresentativeRule& rule,
                         const StageOneDesign& stage1, const StageTwoDesign& stage2, const InfectionState& state,
                         NoiseModel noise, Seed seed) {
    if (state.members.size() != structure.members() || state.families.size() != structure.families())
        throw std::invalid_argument("infection state does not match the community");
    const std::size_t family_count = structure.families();
    const auto reps = rule.select(structure, seed.child(0));
    const TestMatrix fam = family_design(family_count, stage1.design, seed.child(1));
    const TestMatrix g1 = expand_family_design(structure, fam, reps);
    const OutcomeVector y1 = run_matrix(g1, state, noise, seed.child(2));
    BitVector families =
        stage1.threshold ? threshold_decode(fam, y1, *stage1.threshold).hard_calls : comp(fam, y1).hard_calls;

    TwoStageResult result;
    result.family_estimates = families;
    result.estimates.assign(structure.members(), 0);
    result.stage_one_tests = g1.tests();

    TestOracle oracle(state, noise, seed.child(3));
    std::vector<std::uint32_t> rest;
    for (std::size_t j = 0; j < family_count; ++j) {
        const std::size_t first = structure.first_member(j);
        for (std::size_t m = 0; m < structure.family_size(j); ++m) {
            const auto i = static_cast<std::uint32_t>(first + m);
            if (!families[j])
                rest.push_back(i);
            else if (stage2.positives == PositiveFamilyPolicy::LabelInfected)
                result.estimates[i] = 1;
            else
                result.estimates[i] = oracle.pool_result(std::span(&i, 1));
        }
    }
    if (!rest.empty()) {
        const TestMatrix local =
            constant_column_weight_matrix(stage2.tests, rest.size(), stage2.column_weight, seed.child(4));
        OutcomeVector y2(local.tests());
        std::vector<std::uint32_t> pool;
        for (std::size_t t = 0; t < local.tests(); ++t) {
            pool.clear();
            for (std::uint32_t id : local.row(t)) pool.push_back(rest[id]);
            y2[t] = oracle.pool_result(std::span<const std::uint32_t>(pool));
        }
        const BitVector calls =
            stage2.threshold ? threshold_decode(local, y2, *stage2.threshold).hard_calls : comp(local, y2).hard_calls;
        for (std::size_t id = 0; id < rest.size(); ++id) result.estimates[rest[id]] = calls[id];
    }
    result.stage_two_tests = oracle.tests_performed();
    result.tests_used = result.stage_one_tests + result.stage_two_tests;
    return result;
}

}  // namespace commgt
