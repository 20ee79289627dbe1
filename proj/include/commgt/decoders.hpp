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

#ifndef COMMGT_DECODERS_HPP
#define COMMGT_DECODERS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "commgt/channel.hpp"
#include "commgt/matrix.hpp"
#include "commgt/model.hpp"

namespace commgt {

struct DecodeResult {
    BitVector hard_calls;
    std::optional<BitVector> family_calls;
    std::optional<std::vector<double>> member_posteriors;
    std::optional<std::vector<double>> family_posteriors;
};

DecodeResult comp(const TestMatrix& matrix, const OutcomeVector& outcomes);

// Families cleared by the family-identification rows force their members to
// zero; COMP on the member-identification rows decides the rest.
DecodeResult community_comp(const TestMatrix& g1, const TestMatrix& g2, const OutcomeVector& y1,
                            const OutcomeVector& y2, const CommunityStructure& structure);

struct ThresholdConfig {
    double z = 0.0;
    double delta = 0.0;

    // Member is cleared when its negative count exceeds this fraction of its
    // tests.
    double negative_fraction() const { return z * (1.0 + delta); }
    void validate() const;
};

DecodeResult threshold_decode(const TestMatrix& matrix, const OutcomeVector& outcomes, const ThresholdConfig& cfg);
DecodeResult repetition_decode(const OutcomeVector& outcomes, std::size_t width, std::size_t repeats,
                               const ThresholdConfig& cfg);

struct LbpConfig {
    std::size_t iterations = 10;
    double z = 0.0;
    double family_rate = 0.0;
    std::vector<double> member_rate{0.0};
    bool community_aware = true;

    double rate_for(std::size_t family) const {
        return member_rate.size() == 1 ? member_rate[0] : member_rate.at(family);
    }
    void validate(const CommunityStructure& structure) const;
};

struct LbpDiagnostics {
    // Largest |s0 + s1 - 1| over every message sent.
    double max_normalization_error = 0.0;
    std::size_t messages_sent = 0;
};

DecodeResult lbp_decode(const TestMatrix& pools, const CommunityStructure& structure, const LbpConfig& cfg,
                        const OutcomeVector& outcomes, LbpDiagnostics* diagnostics = nullptr);

}  // namespace commgt

#endif
