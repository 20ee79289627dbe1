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

#ifndef COMMGT_MODEL_HPP
#define COMMGT_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "commgt/rng.hpp"

namespace commgt {

using BitVector = std::vector<std::uint8_t>;

// Partition of n members into F families; members of a family have
// consecutive indices.
class CommunityStructure {
   public:
    explicit CommunityStructure(std::vector<std::size_t> family_sizes);
    static CommunityStructure symmetric(std::size_t families, std::size_t family_size);

    std::size_t families() const { return sizes_.size(); }
    std::size_t members() const { return offsets_.back(); }
    std::size_t family_size(std::size_t family) const;
    std::size_t first_member(std::size_t family) const;
    std::size_t family_of(std::size_t member) const;
    const std::vector<std::size_t>& family_sizes() const { return sizes_; }
    std::vector<std::uint32_t> members_of(std::size_t family) const;
    bool is_symmetric() const;
    std::size_t min_family_size() const;
    std::size_t max_family_size() const;

    friend bool operator==(const CommunityStructure&, const CommunityStructure&) = default;

   private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
};

struct InfectionState {
    BitVector members;
    BitVector families;

    std::size_t infected_members() const;
    std::size_t infected_families() const;
    // Families holding at least one infected member.
    std::size_t families_with_infected(const CommunityStructure& structure) const;
    std::size_t infected_in_family(const CommunityStructure& structure, std::size_t family) const;
    // Family bits zero imply member bits zero.
    bool consistent_with(const CommunityStructure& structure) const;
};

// Infected-family count plus per-family infected-member counts. A single
// entry applies to every family; otherwise there is one entry per family.
struct CombinatorialModel {
    std::size_t infected_families = 0;
    std::vector<std::size_t> infected_members{0};

    std::size_t members_for(std::size_t family) const;
    void validate(const CommunityStructure& structure) const;
};

// Family infection probability q and member infection probability per
// family (single entry = shared value).
struct ProbabilisticModel {
    double family_rate = 0.0;
    std::vector<double> member_rate{0.0};

    double rate_for(std::size_t family) const;
    void validate(const CommunityStructure& structure) const;
};

using InfectionModelSpec = std::variant<CombinatorialModel, ProbabilisticModel>;

InfectionState sample_combinatorial(const CommunityStructure& structure, std::size_t infected_families,
                                    std::span<const std::size_t> infected_members, Seed seed);
InfectionState sample_probabilistic(const CommunityStructure& structure, double family_rate,
                                    std::span<const double> member_rates, Seed seed);
InfectionState sample_state(const CommunityStructure& structure, const InfectionModelSpec& spec, Seed seed);

// Which members of each family are pooled into its mixed sample.
class RepresentativeRule {
   public:
    // R members per family, drawn uniformly without replacement.
    static RepresentativeRule per_family(std::size_t count);
    // Every member of every family.
    static RepresentativeRule all_members();
    // Fixed member subsets, one per family.
    static RepresentativeRule explicit_sets(std::vector<std::vector<std::uint32_t>> sets);

    void validate(const CommunityStructure& structure) const;
    std::vector<std::vector<std::uint32_t>> select(const CommunityStructure& structure, Seed seed) const;
    // Number of representatives family j contributes.
    std::size_t size_for(const CommunityStructure& structure, std::size_t family) const;

   private:
    enum class Kind { Count, All, Explicit };
    Kind kind_ = Kind::Count;
    std::size_t count_ = 0;
    std::vector<std::vector<std::uint32_t>> sets_;
};

}  // namespace commgt

#endif
