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

#ifndef COMMGT_DESIGNS_HPP
#define COMMGT_DESIGNS_HPP

#include <cstddef>
#include <variant>
#include <vector>

#include "commgt/matrix.hpp"
#include "commgt/model.hpp"
#include "commgt/rng.hpp"

namespace commgt {

TestMatrix bernoulli_matrix(std::size_t tests, std::size_t width, double density, Seed seed);
// Every column lands in exactly `column_weight` distinct tests chosen uniformly.
TestMatrix constant_column_weight_matrix(std::size_t tests, std::size_t width, std::size_t column_weight, Seed seed);
// `repeats` stacked identity matrices; member i sits in tests i, i+n, ...
TestMatrix repetition_matrix(std::size_t width, std::size_t repeats);

// Families per block row of the member-identification design.
class BlockDesignSpec {
   public:
    static BlockDesignSpec from_counts(std::vector<std::size_t> families_per_row);
    // Equal rows of ceil(F/b); any shortfall is filled with auxiliary
    // families that contribute no columns.
    static BlockDesignSpec symmetric(std::size_t families, std::size_t block_rows);

    std::size_t block_rows() const { return per_row_.size(); }
    const std::vector<std::size_t>& per_row() const { return per_row_; }
    std::size_t auxiliary_families() const { return auxiliary_; }
    bool is_symmetric() const;
    void validate(std::size_t families) const;

   private:
    std::vector<std::size_t> per_row_;
    std::size_t auxiliary_ = 0;
};

enum class BlockAssignment { Canonical, Random };

struct BlockLayout {
    TestMatrix matrix;
    std::vector<std::size_t> family_row;
};

BlockLayout community_g2_layout(const CommunityStructure& structure, const BlockDesignSpec& spec,
                                BlockAssignment assignment, Seed seed = {});
TestMatrix community_g2(const CommunityStructure& structure, const BlockDesignSpec& spec,
                        BlockAssignment assignment = BlockAssignment::Random, Seed seed = {});

struct OnePerFamily {};
struct SparseFamilyDesign {
    std::size_t tests = 0;
    std::size_t column_weight = 0;
};
using FamilyDesignMode = std::variant<OnePerFamily, SparseFamilyDesign>;

// Design over family columns (T1 x F).
TestMatrix family_design(std::size_t families, const FamilyDesignMode& mode, Seed seed);
// Replaces each family column by the columns of its representatives.
TestMatrix expand_family_design(const CommunityStructure& structure, const TestMatrix& family_matrix,
                                const std::vector<std::vector<std::uint32_t>>& representatives);
// Family f is in test t iff some member of f is.
TestMatrix collapse_to_families(const TestMatrix& member_matrix, const CommunityStructure& structure);

TestMatrix community_g1(const CommunityStructure& structure, const FamilyDesignMode& mode,
                        const RepresentativeRule& rule, Seed seed);
TestMatrix community_g1(const CommunityStructure& structure, const FamilyDesignMode& mode, std::size_t representatives,
                        Seed seed);

TestMatrix stack(const TestMatrix& top, const TestMatrix& bottom);

}  // namespace commgt

#endif
