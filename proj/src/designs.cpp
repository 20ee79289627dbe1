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

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace commgt {

TestMatrix bernoulli_matrix(std::size_t tests, std::size_t width, double density, Seed seed) {
    if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("Bernoulli density must lie in [0, 1]");
    if (tests == 0) throw std::invalid_argument("Bernoulli design needs at least one test");
    Rng rng(seed);
    std::vector<Row> rows(tests);
    for (auto& row : rows)
        for (std::size_t i = 0; i < width; ++i)
            if (rng.bernoulli(density)) row.push_back(static_cast<std::uint32_t>(i));
    return TestMatrix(width, std::move(rows));
}

TestMatrix constant_column_weight_matrix(std::size_t tests, std::size_t width, std::size_t column_weight, Seed seed) {
    if (column_weight > tests) throw std::invalid_argument("column weight exceeds the number of tests");
    Rng rng(seed);
    std::vector<Row> rows(tests);
    for (std::size_t i = 0; i < width; ++i)
        for (std::uint32_t t : rng.choose(tests, column_weight)) rows[t].push_back(static_cast<std::uint32_t>(i));
    return TestMatrix(width, std::move(rows));
}

TestMatrix repetition_matrix(std::size_t width, std::size_t repeats) {
    if (repeats == 0) throw std::invalid_argument("repetition design needs at least one repeat");
    TestMatrix m(width);
    for (std::size_t r = 0; r < repeats; ++r)
        for (std::size_t i = 0; i < width; ++i) m.add_row({static_cast<std::uint32_t>(i)});
    return m;
}

BlockDesignSpec BlockDesignSpec::from_counts(std::vector<std::size_t> families_per_row) {
    BlockDesignSpec spec;
    spec.per_row_ = std::move(families_per_row);
    if (spec.per_row_.empty()) throw std::invalid_argument("block design needs at least one block row");
    for (std::size_t c : spec.per_row_)
        if (c == 0) throw std::invalid_argument("every block row must hold at least one family");
    return spec;
}

BlockDesignSpec BlockDesignSpec::symmetric(std::size_t families, std::size_t block_rows) {
    if (block_rows == 0 || families == 0) throw std::invalid_argument("block design needs F >= 1 and b >= 1");
    const std::size_t per = (families + block_rows - 1) / block_rows;
    BlockDesignSpec spec = from_counts(std::vector<std::size_t>(block_rows, per));
    spec.auxiliary_ = per * block_rows - families;
    return spec;
}

bool BlockDesignSpec::is_symmetric() const {
    return std::all_of(per_row_.begin(), per_row_.end(), [&](std::size_t c) { return c == per_row_.front(); });
}

void BlockDesignSpec::validate(std::size_t families) const {
    const std::size_t slots = std::accumulate(per_row_.begin(), per_row_.end(), std::size_t{0});
    if (slots != families + auxiliary_)
        throw std::invalid_argument("block row counts sum to " + std::to_string(slots) + " but there are " +
                                    std::to_string(families) + " families");
}

BlockLayout community_g2_layout(const CommunityStructure& structure, const BlockDesignSpec& spec,
                                BlockAssignment assignment, Seed seed) {
    if (!structure.is_symmetric()) throw std::invalid_argument("block design requires equal family sizes");
    spec.validate(structure.families());
    const std::size_t family_count = structure.families();
    const std::size_t size = structure.family_size(0);
    const std::size_t row_count = spec.block_rows();

    std::vector<std::size_t> row_of(family_count);
    if (assignment == BlockAssignment::Canonical) {
        // Round-robin over rows with free capacity.
        std::vector<std::size_t> capacity = spec.per_row();
        std::size_t r = 0;
        for (std::size_t j = 0; j < family_count; ++j) {
            while (capacity[r] == 0) r = (r + 1) % row_count;
            row_of[j] = r;
            --capacity[r];
            r = (r + 1) % row_count;
        }
    } else {
        std::vector<std::size_t> slots;
        for (std::size_t r = 0; r < row_count; ++r) slots.insert(slots.end(), spec.per_row()[r], r);
        Rng rng(seed);
        for (std::size_t i = slots.size(); i > 1; --i) std::swap(slots[i - 1], slots[rng.below(i)]);
        std::copy_n(slots.begin(), family_count, row_of.begin());
    }

    std::vector<Row> rows(row_count * size);
    for (std::size_t j = 0; j < family_count; ++j) {
        const std::size_t first = structure.first_member(j);
        for (std::size_t m = 0; m < size; ++m)
            rows[row_of[j] * size + m].push_back(static_cast<std::uint32_t>(first + m));
    }
    return BlockLayout{TestMatrix(structure.members(), std::move(rows)), std::move(row_of)};
}

TestMatrix community_g2(const CommunityStructure& structure, const BlockDesignSpec& spec, BlockAssignment assignment,
                        Seed seed) {
    return community_g2_layout(structure, spec, assignment, seed).matrix;
}

TestMatrix family_design(std::size_t families, const FamilyDesignMode& mode, Seed seed) {
    if (std::holds_alternative<OnePerFamily>(mode)) return repetition_matrix(families, 1);
    const auto& sparse = std::get<SparseFamilyDesign>(mode);
    if (sparse.tests == 0) throw std::invalid_argument("sparse family design needs at least one test");
    return constant_column_weight_matrix(sparse.tests, families, sparse.column_weight, seed);
}

TestMatrix expand_family_design(const CommunityStructure& structure, const TestMatrix& family_matrix,
                                const std::vector<std::vector<std::uint32_t>>& representatives) {
    if (family_matrix.width() != structure.families())
        throw std::invalid_argument("family design width must equal the number of families");
    if (representatives.size() != structure.families())
        throw std::invalid_argument("need one representative set per family");
    TestMatrix out(structure.members());
    for (const auto& frow : family_matrix.rows()) {
        Row row;
        for (std::uint32_t f : frow) row.insert(row.end(), representatives[f].begin(), representatives[f].end());
        out.add_row(std::move(row));
    }
    return out;
}

TestMatrix collapse_to_families(const TestMatrix& member_matrix, const CommunityStructure& structure) {
    if (member_matrix.width() != structure.members())
        throw std::invalid_argument("matrix width does not match the population size");
    TestMatrix out(structure.families());
    for (const auto& mrow : member_matrix.rows()) {
        Row row;
        row.reserve(mrow.size());
        for (std::uint32_t i : mrow) row.push_back(static_cast<std::uint32_t>(structure.family_of(i)));
        out.add_row(std::move(row));
    }
    return out;
}

TestMatrix community_g1(const CommunityStructure& structure, const FamilyDesignMode& mode,
                        const RepresentativeRule& rule, Seed seed) {
    const auto reps = rule.select(structure, seed.child(0));
    return expand_family_design(structure, family_design(structure.families(), mode, seed.child(1)), reps);
}

TestMatrix community_g1(const CommunityStructure& structure, const FamilyDesignMode& mode, std::size_t representatives,
                        Seed seed) {
    if (representatives > structure.min_family_size())
        throw std::invalid_argument("representative count exceeds a family size");
    return community_g1(structure, mode, RepresentativeRule::per_family(representatives), seed);
}

TestMatrix stack(const TestMatrix& top, const TestMatrix& bottom) {
    if (top.width() != bottom.width()) throw std::invalid_argument("stacked designs must have equal widths");
    std::vector<Row> rows = top.rows();
    rows.insert(rows.end(), bottom.rows().begin(), bottom.rows().end());
    return TestMatrix(top.width(), std::move(rows));
}

}  // namespace commgt
