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

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace commgt {

CommunityStructure::CommunityStructure(std::vector<std::size_t> family_sizes) : sizes_(std::move(family_sizes)) {
    if (sizes_.empty()) throw std::invalid_argument("community needs at least one family");
    offsets_.assign(sizes_.size() + 1, 0);
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
        if (sizes_[j] == 0) throw std::invalid_argument("family " + std::to_string(j) + " has size 0");
        offsets_[j + 1] = offsets_[j] + sizes_[j];
    }
    if (offsets_.back() > UINT32_MAX) throw std::invalid_argument("population too large");
}

CommunityStructure CommunityStructure::symmetric(std::size_t families, std::size_t family_size) {
    return CommunityStructure(std::vector<std::size_t>(families, family_size));
}

std::size_t CommunityStructure::family_size(std::size_t family) const { return sizes_.at(family); }

std::size_t CommunityStructure::first_member(std::size_t family) const {
    if (family >= sizes_.size()) throw std::out_of_range("family index out of range");
    return offsets_[family];
}

std::size_t CommunityStructure::family_of(std::size_t member) const {
    if (member >= members()) throw std::out_of_range("member index out of range");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), member);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

std::vector<std::uint32_t> CommunityStructure::members_of(std::size_t family) const {
    std::vector<std::uint32_t> out(family_size(family));
    std::iota(out.begin(), out.end(), static_cast<std::uint32_t>(offsets_[family]));
    return out;
}

bool CommunityStructure::is_symmetric() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [&](std::size_t m) { return m == sizes_.front(); });
}

std::size_t CommunityStructure::min_family_size() const { return *std::min_element(sizes_.begin(), sizes_.end()); }
std::size_t CommunityStructure::max_family_size() const { return *std::max_element(sizes_.begin(), sizes_.end()); }

std::size_t InfectionState::infected_members() const {
    return static_cast<std::size_t>(std::count(members.begin(), members.end(), 1));
}

std::size_t InfectionState::infected_families() const {
    return static_cast<std::size_t>(std::count(families.begin(), families.end(), 1));
}

std::size_t InfectionState::infected_in_family(const CommunityStructure& structure, std::size_t family) const {
    auto first = members.begin() + static_cast<std::ptrdiff_t>(structure.first_member(family));
    return static_cast<std::size_t>(
        std::count(first, first + static_cast<std::ptrdiff_t>(structure.family_size(family)), 1));
}

std::size_t InfectionState::families_with_infected(const CommunityStructure& structure) const {
    std::size_t count = 0;
    for (std::size_t j = 0; j < structure.families(); ++j) count += infected_in_family(structure, j) > 0;
    return count;
}

bool InfectionState::consistent_with(const CommunityStructure& structure) const {
    if (members.size() != structure.members() || families.size() != structure.families()) return false;
    for (std::size_t j = 0; j < structure.families(); ++j)
        if (!families[j] && infected_in_family(structure, j) > 0) return false;
    return true;
}

std::size_t CombinatorialModel::members_for(std::size_t family) const {
    return infected_members.size() == 1 ? infected_members[0] : infected_members.at(family);
}

void CombinatorialModel::validate(const CommunityStructure& structure) const {
    if (infected_families > structure.families())
        throw std::invalid_argument("infected family count exceeds the number of families");
    if (infected_members.size() != 1 && infected_members.size() != structure.families())
        throw std::invalid_argument("per-family infected counts must have 1 or F entries");
    for (std::size_t j = 0; j < structure.families(); ++j)
        if (members_for(j) > structure.family_size(j))
            throw std::invalid_argument("infected member count exceeds size of family " + std::to_string(j));
}

double ProbabilisticModel::rate_for(std::size_t family) const {
    return member_rate.size() == 1 ? member_rate[0] : member_rate.at(family);
}

namespace {
void check_probability(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}
}  // namespace

void ProbabilisticModel::validate(const CommunityStructure& structure) const {
    check_probability(family_rate, "family infection probability");
    if (member_rate.size() != 1 && member_rate.size() != structure.families())
        throw std::invalid_argument("per-family member probabilities must have 1 or F entries");
    for (double p : member_rate) check_probability(p, "member infection probability");
}

InfectionState sample_combinatorial(const CommunityStructure& structure, std::size_t infected_families,
                                    std::span<const std::size_t> infected_members, Seed seed) {
    CombinatorialModel spec{infected_families, {infected_members.begin(), infected_members.end()}};
    spec.validate(structure);
    Rng rng(seed);
    InfectionState state{BitVector(structure.members(), 0), BitVector(structure.families(), 0)};
    // Families first, then members inside each chosen family.
    for (std::uint32_t j : rng.choose(structure.families(), infected_families)) {
        state.families[j] = 1;
        const std::size_t first = structure.first_member(j);
        for (std::uint32_t offset : rng.choose(structure.family_size(j), spec.members_for(j)))
            state.members[first + offset] = 1;
    }
    return state;
}

InfectionState sample_probabilistic(const CommunityStructure& structure, double family_rate,
                                    std::span<const double> member_rates, Seed seed) {
    ProbabilisticModel spec{family_rate, {member_rates.begin(), member_rates.end()}};
    spec.validate(structure);
    Rng rng(seed);
    InfectionState state{BitVector(structure.members(), 0), BitVector(structure.families(), 0)};
    for (std::size_t j = 0; j < structure.families(); ++j) {
        if (!rng.bernoulli(family_rate)) continue;
        state.families[j] = 1;
        const double p = spec.rate_for(j);
        const std::size_t first = structure.first_member(j);
        for (std::size_t m = 0; m < structure.family_size(j); ++m) state.members[first + m] = rng.bernoulli(p);
    }
    return state;
}

InfectionState sample_state(const CommunityStructure& structure, const InfectionModelSpec& spec, Seed seed) {
    if (const auto* comb = std::get_if<CombinatorialModel>(&spec))
        return sample_combinatorial(structure, comb->infected_families, comb->infected_members, seed);
    const auto& prob = std::get<ProbabilisticModel>(spec);
    return sample_probabilistic(structure, prob.family_rate, prob.member_rate, seed);
}

RepresentativeRule RepresentativeRule::per_family(std::size_t count) {
    RepresentativeRule rule;
    rule.kind_ = Kind::Count;
    rule.count_ = count;
    return rule;
}

RepresentativeRule RepresentativeRule::all_members() {
    RepresentativeRule rule;
    rule.kind_ = Kind::All;
    return rule;
}

RepresentativeRule RepresentativeRule::explicit_sets(std::vector<std::vector<std::uint32_t>> sets) {
    RepresentativeRule rule;
    rule.kind_ = Kind::Explicit;
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    rule.sets_ = std::move(sets);
    return rule;
}

void RepresentativeRule::validate(const CommunityStructure& structure) const {
    switch (kind_) {
        case Kind::Count:
            if (count_ > structure.min_family_size())
                throw std::invalid_argument("representative count exceeds the smallest family size");
            return;
        case Kind::All:
            return;
        case Kind::Explicit:
            if (sets_.size() != structure.families())
                throw std::invalid_argument("explicit representatives need one subset per family");
            for (std::size_t j = 0; j < sets_.size(); ++j) {
                const std::size_t first = structure.first_member(j);
                for (std::uint32_t i : sets_[j])
                    if (i < first || i >= first + structure.family_size(j))
                        throw std::invalid_argument("representative outside family " + std::to_string(j));
            }
            return;
    }
}

std::size_t RepresentativeRule::size_for(const CommunityStructure& structure, std::size_t family) const {
    switch (kind_) {
        case Kind::Count:
            return count_;
        case Kind::All:
            return structure.family_size(family);
        case Kind::Explicit:
            return sets_.at(family).size();
    }
    return 0;
}

std::vector<std::vector<std::uint32_t>> RepresentativeRule::select(const CommunityStructure& structure,
                                                                   Seed seed) const {
    validate(structure);
    if (kind_ == Kind::Explicit) return sets_;
    std::vector<std::vector<std::uint32_t>> reps(structure.families());
    if (kind_ == Kind::All) {
        for (std::size_t j = 0; j < structure.families(); ++j) reps[j] = structure.members_of(j);
        return reps;
    }
    Rng rng(seed);
    for (std::size_t j = 0; j < structure.families(); ++j) {
        const auto first = static_cast<std::uint32_t>(structure.first_member(j));
        reps[j] = rng.choose(structure.family_size(j), count_);
        for (auto& r : reps[j]) r += first;
    }
    return reps;
}

}  // namespace commgt
