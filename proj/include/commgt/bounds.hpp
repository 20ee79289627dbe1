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

#ifndef COMMGT_BOUNDS_HPP
#define COMMGT_BOUNDS_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "commgt/model.hpp"

namespace commgt {

struct BoundReport {
    double value = 0.0;
    std::string formula_id;
    bool is_upper_bound = false;
    std::map<std::string, double> inputs;
};

double binary_entropy(double p);
double log2_binomial(double n, double k);
// Exact C(n, k) when it fits in 64 bits.
std::optional<std::uint64_t> binomial_exact(std::uint64_t n, std::uint64_t k);

double counting_bound(std::size_t members, std::size_t infected);
double counting_bound_probabilistic(std::size_t members, double rate);

// Infected counts pair with families 0..k_f-1; a single entry is shared.
double combinatorial_community_bound(const CommunityStructure& structure, std::size_t infected_families,
                                     std::span<const std::size_t> infected_members);
double probabilistic_community_bound(const CommunityStructure& structure, double family_rate,
                                     std::span<const double> member_rates);

// Fraction of infected families whose mixed sample of R members is positive.
double positive_fraction_combinatorial(std::size_t family_size, std::size_t infected, std::size_t representatives);
double positive_fraction_probabilistic(double member_rate, std::size_t representatives, std::size_t family_size);

enum class SearchVariant { BinarySplitting, Hwang };

double expected_tests_combinatorial(std::size_t families, std::size_t family_size, std::size_t infected_families,
                                    std::size_t infected_members, std::size_t representatives, SearchVariant variant);
double expected_tests_probabilistic(std::size_t families, std::size_t family_size, double family_rate,
                                    double member_rate, std::size_t representatives);

// Probability that two or more infected families share a block row.
double pr_joint_combinatorial(std::size_t infected_families, std::span<const std::size_t> families_per_row);
double pr_joint_probabilistic(double family_rate, std::span<const std::size_t> families_per_row);

// Exact rational form: the probability is 1 - good / total.
struct JointCount {
    std::uint64_t good = 0;
    std::uint64_t total = 0;
};
JointCount pr_joint_combinatorial_exact(std::size_t infected_families, std::span<const std::size_t> families_per_row);

struct SymmetricCombinatorial {
    std::size_t families = 0;
    std::size_t family_size = 0;
    std::size_t infected_families = 0;
    std::size_t infected_members = 0;
};
struct SymmetricProbabilistic {
    std::size_t families = 0;
    std::size_t family_size = 0;
    double family_rate = 0.0;
    double member_rate = 0.0;
};
using SymmetricModel = std::variant<SymmetricCombinatorial, SymmetricProbabilistic>;

// System false-positive probability of the block design with T2 tests.
BoundReport any_fp_probability(const SymmetricModel& model, std::size_t tests);
// Per-member misidentification rate with c families per block row.
BoundReport error_rate_bound(const SymmetricModel& model, std::size_t families_per_row);

struct RepetitionScheme {
    std::size_t tests = 0;
    std::size_t members = 0;
    double z = 0.0;
    double delta = 0.0;
};
struct BernoulliScheme {
    std::size_t tests = 0;
    double density = 0.0;
    double z = 0.0;
    double delta = 0.0;
    std::size_t infected = 0;
};
struct ConstantWeightScheme {
    std::size_t column_weight = 0;
    double z = 0.0;
    double delta = 0.0;
};
struct TwoStageScheme {
    std::size_t stage_one_tests = 0;
    std::size_t infected_families = 0;
    double z = 0.0;
    double delta = 0.0;
};
using NoisyScheme = std::variant<RepetitionScheme, BernoulliScheme, ConstantWeightScheme, TwoStageScheme>;

struct NoisyBound {
    BoundReport false_negative;
    std::optional<BoundReport> false_positive;
};
NoisyBound noisy_bound(const NoisyScheme& scheme);

struct CompositionSearch {
    bool balanced_is_minimal = false;
    double balanced_value = 0.0;
    double minimum_value = 0.0;
    std::vector<std::size_t> balanced;
    std::vector<std::size_t> argmin;
    std::size_t compositions = 0;
    std::size_t ties = 0;
};

struct JointModelCombinatorial {
    std::size_t infected_families = 0;
};
struct JointModelProbabilistic {
    double family_rate = 0.0;
};
using JointModel = std::variant<JointModelCombinatorial, JointModelProbabilistic>;

double pr_joint(const JointModel& model, std::span<const std::size_t> families_per_row);
CompositionSearch symmetric_c_is_minimizer(const JointModel& model, std::size_t families, std::size_t block_rows);

}  // namespace commgt

#endif
