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

// Brute-force reference implementations used by the unit and acceptance tests.
// Everything here is deliberately naive: enumerate, count, compare.

#ifndef COMMGT_TESTS_ORACLES_HPP
#define COMMGT_TESTS_ORACLES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "commgt/decoders.hpp"
#include "commgt/matrix.hpp"
#include "commgt/model.hpp"
#include "commgt/rng.hpp"

namespace commgt::oracle {

// Calls fn(subset) for every k-subset of {0..n-1}, in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::uint32_t>&)>& fn);

std::uint64_t choose(std::uint64_t n, std::uint64_t k);

// Fraction of infected-family placements with no two infected families sharing a block row.
struct Fraction {
    std::uint64_t good = 0;
    std::uint64_t total = 0;
    double value() const { return total ? static_cast<double>(good) / static_cast<double>(total) : 0.0; }
};
Fraction enumerate_no_collision(std::size_t infected_families, std::span<const std::size_t> families_per_row);

// Probability of no collision under i.i.d. Bernoulli(q) family infection, by summing over all 2^F patterns.
double enumerate_no_collision_probabilistic(double family_rate, std::span<const std::size_t> families_per_row);

// Noiseless OR of every row.
OutcomeVector evaluate(const TestMatrix& matrix, const BitVector& members);

// Elementwise OR over every member pattern that reproduces the outcomes exactly (width <= 20).
BitVector maximal_consistent(const TestMatrix& matrix, const OutcomeVector& outcomes);

struct Posteriors {
    std::vector<double> members;
    std::vector<double> families;
};

// Exact marginals of the factorized joint over (V, U) given Y, by full enumeration.
Posteriors exact_posteriors(const TestMatrix& pools, const CommunityStructure& structure, const LbpConfig& cfg,
                            const OutcomeVector& outcomes);

// True when the factor graph (member/family variables, test and family factors) has no cycle.
bool factor_graph_is_forest(const TestMatrix& pools, const CommunityStructure& structure, bool community_aware);

struct ForestInstance {
    CommunityStructure structure;
    TestMatrix pools;
};

// Random instance whose factor graph is a forest; draws until the forest check passes.
ForestInstance random_forest_instance(Rng& rng, std::size_t max_members, bool community_aware);

// Exhaustive count over placements of community_comp failures on the canonical G2 layout with
// OnePerFamily G1 and all members as representatives (combinatorial model, symmetric).
struct FpCensus {
    std::uint64_t placements = 0;
    std::uint64_t with_any_fp = 0;
    std::uint64_t false_positives = 0;  // summed over placements
    std::uint64_t false_negatives = 0;
};
FpCensus enumerate_community_comp(std::size_t families, std::size_t family_size, std::size_t infected_families,
                                  std::size_t infected_members, const std::vector<std::size_t>& families_per_row);

}  // namespace commgt::oracle

#endif
