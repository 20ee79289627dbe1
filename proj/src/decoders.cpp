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

#include "commgt/decoders.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "commgt/designs.hpp"
#include "commgt/errors.hpp"

namespace commgt {

namespace {

void check_dimensions(const TestMatrix& matrix, const OutcomeVector& outcomes) {
    if (matrix.tests() != outcomes.size())
        throw std::invalid_argument("outcome length " + std::to_string(outcomes.size()) +
                                    " does not match test count " + std::to_string(matrix.tests()));
}

// Marks every member of a negative test.
BitVector cleared_by_negatives(const TestMatrix& matrix, const OutcomeVector& outcomes) {
    BitVector cleared(matrix.width(), 0);
    for (std::size_t t = 0; t < matrix.tests(); ++t)
        if (!outcomes[t])
            for (std::uint32_t i : matrix.row(t)) cleared[i] = 1;
    return cleared;
}

}  // namespace

DecodeResult comp(const TestMatrix& matrix, const OutcomeVector& outcomes) {
    check_dimensions(matrix, outcomes);
    BitVector calls = cleared_by_negatives(matrix, outcomes);
    for (auto& c : calls) c = !c;
    return DecodeResult{std::move(calls), std::nullopt, std::nullopt, std::nullopt};
}

DecodeResult community_comp(const TestMatrix& g1, const TestMatrix& g2, const OutcomeVector& y1,
                            const OutcomeVector& y2, const CommunityStructure& structure) {
    check_dimensions(g1, y1);
    check_dimensions(g2, y2);
    if (g1.width() != structure.members() || g2.width() != structure.members())
        throw std::invalid_argument("design widths must equal the population size");
    BitVector families = comp(collapse_to_families(g1, structure), y1).hard_calls;
    BitVector calls = comp(g2, y2).hard_calls;
    for (std::size_t j = 0; j < structure.families(); ++j) {
        if (families[j]) continue;
        const std::size_t first = structure.first_member(j);
        std::fill_n(calls.begin() + static_cast<std::ptrdiff_t>(first), structure.family_size(j), 0);
    }
    return DecodeResult{std::move(calls), std::move(families), std::nullopt, std::nullopt};
}

void ThresholdConfig::validate() const {
    if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("threshold rule needs z in [0, 1]");
    if (!(delta >= 0.0)) throw std::invalid_argument("threshold rule needs delta >= 0");
    if (negative_fraction() > 1.0) throw std::invalid_argument("threshold rule needs z(1+delta) <= 1");
}

namespace {

std::uint8_t threshold_call(std::size_t negatives, std::size_t total, double fraction) {
    if (total == 0) return 1;
    // Negative branch first, so it wins whenever both conditions hold.
    if (static_cast<double>(negatives) > fraction * static_cast<double>(total)) return 0;
    return 1;
}

}  // namespace

DecodeResult threshold_decode(const TestMatrix& matrix, const OutcomeVector& outcomes, const ThresholdConfig& cfg) {
    cfg.validate();
    check_dimensions(matrix, outcomes);
    std::vector<std::size_t> negatives(matrix.width(), 0), total(matrix.width(), 0);
    for (std::size_t t = 0; t < matrix.tests(); ++t)
        for (std::uint32_t i : matrix.row(t)) {
            ++total[i];
            negatives[i] += !outcomes[t];
        }
    BitVector calls(matrix.width());
    for (std::size_t i = 0; i < calls.size(); ++i)
        calls[i] = threshold_call(negatives[i], total[i], cfg.negative_fraction());
    return DecodeResult{std::move(calls), std::nullopt, std::nullopt, std::nullopt};
}

DecodeResult repetition_decode(const OutcomeVector& outcomes, std::size_t width, std::size_t repeats,
                               const ThresholdConfig& cfg) {
    cfg.validate();
    if (repeats == 0) throw std::invalid_argument("repetition decoding needs at least one repeat");
    if (outcomes.size() != width * repeats)
        throw std::invalid_argument("repetition outcomes must have n * repeats entries");
    BitVector calls(width);
    for (std::size_t i = 0; i < width; ++i) {
        std::size_t negatives = 0;
        for (std::size_t r = 0; r < repeats; ++r) negatives += !outcomes[i + r * width];
        calls[i] = threshold_call(negatives, repeats, cfg.negative_fraction());
    }
    return DecodeResult{std::move(calls), std::nullopt, std::nullopt, std::nullopt};
}

void LbpConfig::validate(const CommunityStructure& structure) const {
    if (iterations == 0) throw std::invalid_argument("belief propagation needs at least one iteration");
    auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in_unit(z)) throw std::invalid_argument("noise level must lie in [0, 1]");
    if (!in_unit(family_rate)) throw std::invalid_argument("family infection probability must lie in [0, 1]");
    if (member_rate.size() != 1 && member_rate.size() != structure.families())
        throw std::invalid_argument("member infection probabilities need 1 or F entries");
    for (double p : member_rate)
        if (!in_unit(p)) throw std::invalid_argument("member infection probability must lie in [0, 1]");
}

namespace {

using Msg = std::array<double, 2>;

class BeliefPropagation {
   public:
    BeliefPropagation(const TestMatrix& pools, const CommunityStructure& structure, const LbpConfig& cfg,
                      const OutcomeVector& outcomes)
        : pools_(pools), structure_(structure), cfg_(cfg), outcomes_(outcomes) {
        const std::size_t n = structure.members();
        edges_of_member_.assign(n, {});
        test_start_.assign(pools.tests() + 1, 0);
        for (std::size_t t = 0; t < pools.tests(); ++t) {
            test_start_[t + 1] = test_start_[t] + pools.row(t).size();
            for (std::size_t k = 0; k < pools.row(t).size(); ++k) {
                const std::uint32_t i = pools.row(t)[k];
                edge_member_.push_back(i);
                edges_of_member_[i].push_back(static_cast<std::uint32_t>(test_start_[t] + k));
            }
        }
        const std::size_t e = edge_member_.size();
        member_to_test_.assign(e, Msg{0.5, 0.5});
        test_to_member_.assign(e, Msg{0.5, 0.5});
        member_to_family_.assign(n, Msg{0.5, 0.5});
        family_to_member_.assign(n, Msg{0.5, 0.5});
        family_to_vertex_.assign(n, Msg{0.5, 0.5});
        vertex_to_family_.assign(n, Msg{0.5, 0.5});
        member_prior_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double member_p = cfg.rate_for(structure.family_of(i));
            const double marginal = cfg.family_rate * member_p;
            member_prior_[i] = Msg{1.0 - marginal, marginal};
        }
    }

    DecodeResult run(LbpDiagnostics* diagnostics) {
        for (std::size_t it = 0; it < cfg_.iterations; ++it) {
            factor_step();
            variable_step();
        }
        DecodeResult result;
        const std::size_t n = structure_.members();
        std::vector<double> post(n);
        BitVector calls(n);
        for (std::size_t i = 0; i < n; ++i) {
            Msg b = cfg_.community_aware ? family_to_member_[i] : member_prior_[i];
            for (std::uint32_t e : edges_of_member_[i]) b = mul(b, test_to_member_[e]);
            post[i] = normalize(b, false)[1];
            calls[i] = post[i] >= 0.5;
        }
        result.hard_calls = std::move(calls);
        result.member_posteriors = std::move(post);
        if (cfg_.community_aware) {
            const std::size_t family_count = structure_.families();
            std::vector<double> fpost(family_count);
            BitVector fcalls(family_count);
            for (std::size_t j = 0; j < family_count; ++j) {
                Msg b{1.0 - cfg_.family_rate, cfg_.family_rate};
                const std::size_t first = structure_.first_member(j);
                for (std::size_t m = 0; m < structure_.family_size(j); ++m) b = mul(b, family_to_vertex_[first + m]);
                fpost[j] = normalize(b, false)[1];
                fcalls[j] = fpost[j] >= 0.5;
            }
            result.family_posteriors = std::move(fpost);
            result.family_calls = std::move(fcalls);
        }
        if (diagnostics) {
            diagnostics->max_normalization_error = max_error_;
            diagnostics->messages_sent = sent_;
        }
        return result;
    }

   private:
    static Msg mul(const Msg& a, const Msg& b) { return Msg{a[0] * b[0], a[1] * b[1]}; }

    // Keeps running products away from underflow without changing ratios.
    static Msg rescale(Msg m) {
        const double hi = std::max(m[0], m[1]);
        if (hi > 0.0 && hi < 1e-100) m = Msg{m[0] / hi, m[1] / hi};
        return m;
    }

    Msg normalize(Msg m, bool transmitted = true) {
        const double s = m[0] + m[1];
        if (!(s > 0.0) || !std::isfinite(s)) throw NumericDegeneracy("belief propagation produced an all-zero message");
        m = Msg{m[0] / s, m[1] / s};
        if (transmitted) {
            max_error_ = std::max(max_error_, std::abs(m[0] + m[1] - 1.0));
            ++sent_;
        }
        return m;
    }

    // out[k] = product of all messages except in[k].
    void exclusive_products(const std::vector<Msg>& in, std::vector<Msg>& out) {
        const std::size_t d = in.size();
        prefix_.assign(d + 1, Msg{1.0, 1.0});
        suffix_.assign(d + 1, Msg{1.0, 1.0});
        for (std::size_t k = 0; k < d; ++k) prefix_[k + 1] = rescale(mul(prefix_[k], in[k]));
        for (std::size_t k = d; k-- > 0;) suffix_[k] = rescale(mul(suffix_[k + 1], in[k]));
        out.resize(d);
        for (std::size_t k = 0; k < d; ++k) out[k] = mul(prefix_[k], suffix_[k + 1]);
    }

    void factor_step() {
        const double z = cfg_.z;
        std::vector<double> pre, suf;
        for (std::size_t t = 0; t < pools_.tests(); ++t) {
            const std::size_t begin = test_start_[t], end = test_start_[t + 1], d = end - begin;
            pre.assign(d + 1, 1.0);
            suf.assign(d + 1, 1.0);
            for (std::size_t k = 0; k < d; ++k) pre[k + 1] = pre[k] * member_to_test_[begin + k][0];
            for (std::size_t k = d; k-- > 0;) suf[k] = suf[k + 1] * member_to_test_[begin + k][0];
            const double y = outcomes_[t] ? 1.0 : 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double others_clear = pre[k] * suf[k + 1];
                const double some_other = (1.0 - z) * (1.0 - others_clear);
                const double mu0 = (1.0 - y) * (1.0 - some_other) + y * some_other;
                const double mu1 = (1.0 - y) * z + y * (1.0 - z);
                test_to_member_[begin + k] = normalize(Msg{mu0, mu1});
            }
        }
        if (!cfg_.community_aware) return;
        for (std::size_t i = 0; i < structure_.members(); ++i) {
            const double member_p = cfg_.rate_for(structure_.family_of(i));
            const Msg& w = vertex_to_family_[i];
            family_to_member_[i] = normalize(Msg{w[0] + w[1] * (1.0 - member_p), w[1] * member_p});
            const Msg& s = member_to_family_[i];
            family_to_vertex_[i] = normalize(Msg{s[0], s[0] * (1.0 - member_p) + s[1] * member_p});
        }
    }

    void variable_step() {
        for (std::size_t i = 0; i < structure_.members(); ++i) {
            const auto& edges = edges_of_member_[i];
            scratch_in_.clear();
            for (std::uint32_t e : edges) scratch_in_.push_back(test_to_member_[e]);
            scratch_in_.push_back(cfg_.community_aware ? family_to_member_[i] : member_prior_[i]);
            exclusive_products(scratch_in_, scratch_out_);
            for (std::size_t k = 0; k < edges.size(); ++k) member_to_test_[edges[k]] = normalize(scratch_out_[k]);
            if (cfg_.community_aware) member_to_family_[i] = normalize(scratch_out_.back());
        }
        if (!cfg_.community_aware) return;
        const Msg prior{1.0 - cfg_.family_rate, cfg_.family_rate};
        for (std::size_t j = 0; j < structure_.families(); ++j) {
            const std::size_t first = structure_.first_member(j), size = structure_.family_size(j);
            scratch_in_.assign(family_to_vertex_.begin() + static_cast<std::ptrdiff_t>(first),
                               family_to_vertex_.begin() + static_cast<std::ptrdiff_t>(first + size));
            exclusive_products(scratch_in_, scratch_out_);
            for (std::size_t m = 0; m < size; ++m)
                vertex_to_family_[first + m] = normalize(mul(prior, scratch_out_[m]));
        }
    }

    const TestMatrix& pools_;
    const CommunityStructure& structure_;
    const LbpConfig& cfg_;
    const OutcomeVector& outcomes_;

    std::vector<std::size_t> test_start_;
    std::vector<std::uint32_t> edge_member_;
    std::vector<std::vector<std::uint32_t>> edges_of_member_;
    std::vector<Msg> member_to_test_, test_to_member_;
    std::vector<Msg> member_to_family_, family_to_member_, family_to_vertex_, vertex_to_family_;
    std::vector<Msg> member_prior_;
    std::vector<Msg> prefix_, suffix_, scratch_in_, scratch_out_;
    double max_error_ = 0.0;
    std::size_t sent_ = 0;
};

}  // namespace

DecodeResult lbp_decode(const TestMatrix& pools, const CommunityStructure& structure, const LbpConfig& cfg,
                        const OutcomeVector& outcomes, LbpDiagnostics* diagnostics) {
    cfg.validate(structure);
    check_dimensions(pools, outcomes);
    if (pools.width() != structure.members())
        throw std::invalid_argument("pool design width must equal the population size");
    return BeliefPropagation(pools, structure, cfg, outcomes).run(diagnostics);
}

}  // namespace commgt
