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

#include "commgt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "commgt/errors.hpp"

namespace commgt {

namespace {

__extension__ using u128 = unsigned __int128;

void require_probability(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void require_threshold(double z, double delta) {
    require_probability(z, "noise level z");
    if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
    if (z * (1.0 + delta) > 1.0) throw std::invalid_argument("z(1+delta) must not exceed 1");
}

double sum_of(std::span<const std::size_t> xs) {
    return static_cast<double>(std::accumulate(xs.begin(), xs.end(), std::size_t{0}));
}

}  // namespace

double binary_entropy(double p) {
    require_probability(p, "entropy argument");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::optional<std::uint64_t> binomial_exact(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    }
    return static_cast<std::uint64_t>(r);
}

double log2_binomial(double n, double k) {
    if (!(k >= 0.0 && k <= n)) throw std::invalid_argument("binomial needs 0 <= k <= n");
    const bool integral = n == std::floor(n) && k == std::floor(k);
    if (integral && n < 1e6) {
        if (auto exact = binomial_exact(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)))
            return std::log2(static_cast<double>(*exact));
        double s = 0.0;
        const double kk = std::min(k, n - k);
        for (double i = 1; i <= kk; ++i) s += std::log2((n - kk + i) / i);
        return s;
    }
    return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

double counting_bound(std::size_t members, std::size_t infected) {
    if (infected > members) throw std::invalid_argument("infected count exceeds population");
    return log2_binomial(static_cast<double>(members), static_cast<double>(infected));
}

double counting_bound_probabilistic(std::size_t members, double rate) {
    return static_cast<double>(members) * binary_entropy(rate);
}

double combinatorial_community_bound(const CommunityStructure& structure, std::size_t infected_families,
                                     std::span<const std::size_t> infected_members) {
    const std::size_t family_count = structure.families();
    if (infected_families > family_count) throw std::invalid_argument("infected family count exceeds F");
    if (infected_members.size() != 1 && infected_members.size() < infected_families)
        throw std::invalid_argument("need one infected-member count per infected family");
    double value = log2_binomial(static_cast<double>(family_count), static_cast<double>(infected_families));
    for (std::size_t j = 0; j < infected_families; ++j) {
        const std::size_t count = infected_members.size() == 1 ? infected_members[0] : infected_members[j];
        if (count > structure.family_size(j)) throw std::invalid_argument("infected count exceeds family size");
        value += log2_binomial(static_cast<double>(structure.family_size(j)), static_cast<double>(count));
    }
    return value;
}

double probabilistic_community_bound(const CommunityStructure& structure, double family_rate,
                                     std::span<const double> member_rates) {
    require_probability(family_rate, "family infection probability");
    const std::size_t family_count = structure.families();
    if (member_rates.size() != 1 && member_rates.size() != family_count)
        throw std::invalid_argument("member probabilities need 1 or family_count entries");
    const double family_p = family_rate;
    double value = static_cast<double>(family_count) * binary_entropy(family_p);
    for (std::size_t j = 0; j < family_count; ++j) {
        const double member_p = member_rates.size() == 1 ? member_rates[0] : member_rates[j];
        require_probability(member_p, "member infection probability");
        const double size = static_cast<double>(structure.family_size(j));
        value += family_p * size * binary_entropy(member_p);
        const double quiet = 1.0 - family_p + family_p * std::pow(1.0 - member_p, size);
        if (quiet > 0.0) value -= quiet * binary_entropy(std::min(1.0, (1.0 - family_p) / quiet));
    }
    return value;
}

double positive_fraction_combinatorial(std::size_t family_size, std::size_t infected, std::size_t representatives) {
    if (representatives > family_size) throw std::invalid_argument("more representatives than family members");
    if (infected > family_size) throw std::invalid_argument("infected count exceeds family size");
    if (representatives == 0) return 0.0;
    if (representatives > family_size - infected) return 1.0;
    // 1 - C(size - infected, reps) / C(size, reps) as a running product.
    double all_healthy = 1.0;
    for (std::size_t i = 0; i < representatives; ++i)
        all_healthy *= static_cast<double>(family_size - infected - i) / static_cast<double>(family_size - i);
    return 1.0 - all_healthy;
}

double positive_fraction_probabilistic(double member_rate, std::size_t representatives, std::size_t family_size) {
    require_probability(member_rate, "member infection probability");
    if (representatives > family_size) throw std::invalid_argument("more representatives than family members");
    return 1.0 - std::pow(1.0 - member_rate, static_cast<double>(representatives));
}

double expected_tests_combinatorial(std::size_t families, std::size_t family_size, std::size_t infected_families,
                                    std::size_t infected_members, std::size_t representatives, SearchVariant variant) {
    if (families == 0 || family_size == 0) throw std::invalid_argument("need fam >= 1 and size >= 1");
    if (infected_families > families) throw std::invalid_argument("infected family count exceeds F");
    const double hit = positive_fraction_combinatorial(family_size, infected_members, representatives);
    const double fam = static_cast<double>(families), size = static_cast<double>(family_size);
    const double infected_fams = static_cast<double>(infected_families);
    const double population = fam * size, infected = infected_fams * static_cast<double>(infected_members);
    const double found = infected_fams * hit, residual = infected * (1.0 - hit);
    double value = 0.0;
    if (variant == SearchVariant::Hwang) {
        if (found > 0.0) value += found * (std::log2(fam / found) + 1.0 + size);
        if (residual > 0.0) value += residual * (std::log2((population - infected_fams * size * hit) / residual) + 1.0);
    } else {
        if (found > 0.0) value += found * (std::log2(fam) + 1.0 + size);
        if (residual > 0.0) value += residual * (std::log2(population - infected_fams * size * hit) + 1.0);
    }
    return value;
}

double expected_tests_probabilistic(std::size_t families, std::size_t family_size, double family_rate,
                                    double member_rate, std::size_t representatives) {
    if (families == 0 || family_size == 0) throw std::invalid_argument("need fam >= 1 and size >= 1");
    require_probability(family_rate, "family infection probability");
    const double hit = positive_fraction_probabilistic(member_rate, representatives, family_size);
    const double fam = static_cast<double>(families), size = static_cast<double>(family_size);
    const double population = fam * size, family_p = family_rate, member_p = member_rate;
    double value = 0.0;
    if (fam * family_p * hit > 0.0) value += fam * family_p * hit * (std::log2(fam) + 1.0 + size);
    const double residual = population * family_p * member_p * (1.0 - hit);
    if (residual > 0.0) value += residual * (std::log2(population * (1.0 - family_p * hit)) + 1.0);
    return value;
}

namespace {

// Elementary symmetric polynomial e_k of the row counts.
long double elementary_symmetric(std::size_t k, std::span<const std::size_t> loads) {
    std::vector<long double> e(k + 1, 0.0L);
    e[0] = 1.0L;
    for (std::size_t x : loads)
        for (std::size_t j = k; j >= 1; --j) e[j] += e[j - 1] * static_cast<long double>(x);
    return e[k];
}

}  // namespace

JointCount pr_joint_combinatorial_exact(std::size_t infected_families, std::span<const std::size_t> loads) {
    const auto family_count = static_cast<std::uint64_t>(sum_of(loads));
    if (infected_families > family_count) throw std::invalid_argument("infected family count exceeds F");
    auto total = binomial_exact(family_count, infected_families);
    if (!total) throw SizeLimitError("exact joint probability overflows 64 bits");
    std::vector<u128> e(infected_families + 1, 0);
    e[0] = 1;
    for (std::size_t x : loads)
        for (std::size_t j = infected_families; j >= 1; --j) e[j] += e[j - 1] * x;
    return JointCount{static_cast<std::uint64_t>(e[infected_families]), *total};
}

double pr_joint_combinatorial(std::size_t infected_families, std::span<const std::size_t> loads) {
    const double family_count = sum_of(loads);
    if (static_cast<double>(infected_families) > family_count)
        throw std::invalid_argument("infected family count exceeds F");
    if (infected_families > loads.size()) return 1.0;
    const long double good = elementary_symmetric(infected_families, loads);
    const double log_total = log2_binomial(family_count, static_cast<double>(infected_families));
    const double ratio = std::exp2(std::log2(static_cast<double>(good)) - log_total);
    return std::clamp(1.0 - ratio, 0.0, 1.0);
}

double pr_joint_probabilistic(double family_rate, std::span<const std::size_t> loads) {
    require_probability(family_rate, "family infection probability");
    const double family_p = family_rate;
    double none_shared = 1.0;
    for (std::size_t ci : loads) {
        const double x = static_cast<double>(ci);
        none_shared *= std::pow(1.0 - family_p, x) + x * family_p * std::pow(1.0 - family_p, x - 1.0);
    }
    return std::clamp(1.0 - none_shared, 0.0, 1.0);
}

double pr_joint(const JointModel& model, std::span<const std::size_t> families_per_row) {
    if (const auto* comb = std::get_if<JointModelCombinatorial>(&model))
        return pr_joint_combinatorial(comb->infected_families, families_per_row);
    return pr_joint_probabilistic(std::get<JointModelProbabilistic>(model).family_rate, families_per_row);
}

namespace {

struct BlockShape {
    double rows = 0, per_row = 0, padded_families = 0;
    bool padded = false;
};

BlockShape shape_for(std::size_t families, std::size_t rows) {
    const std::size_t per = (families + rows - 1) / rows;
    return BlockShape{static_cast<double>(rows), static_cast<double>(per), static_cast<double>(per * rows),
                      per * rows != families};
}

// Symmetric combinatorial joint probability: every block row holds the same number of families.
double joint_symmetric_combinatorial(const BlockShape& s, std::size_t infected_families) {
    const double infected = static_cast<double>(infected_families);
    if (infected > s.rows) return 1.0;
    if (infected_families <= 1) return 0.0;
    const double log_good = log2_binomial(s.rows, infected) + infected * std::log2(s.per_row);
    return std::clamp(1.0 - std::exp2(log_good - log2_binomial(s.padded_families, infected)), 0.0, 1.0);
}

}  // namespace

BoundReport any_fp_probability(const SymmetricModel& model, std::size_t tests) {
    if (tests == 0) throw std::invalid_argument("T2 must be positive");
    BoundReport r;
    r.inputs["T2"] = static_cast<double>(tests);
    if (const auto* m = std::get_if<SymmetricCombinatorial>(&model)) {
        if (m->family_size == 0 || tests % m->family_size != 0)
            throw std::invalid_argument("T2 must be a multiple of the family size");
        if (m->infected_families > m->families || m->infected_members > m->family_size)
            throw std::invalid_argument("infeasible infected counts");
        const BlockShape s = shape_for(m->families, tests / m->family_size);
        const double first = 1.0 - 1.0 / std::exp2(log2_binomial(static_cast<double>(m->family_size),
                                                                 static_cast<double>(m->infected_members)));
        r.value = first * joint_symmetric_combinatorial(s, m->infected_families);
        r.formula_id = "any_fp_combinatorial";
        r.is_upper_bound = s.padded;
        r.inputs["F"] = static_cast<double>(m->families);
        r.inputs["M"] = static_cast<double>(m->family_size);
        r.inputs["k_f"] = static_cast<double>(m->infected_families);
        r.inputs["k_m"] = static_cast<double>(m->infected_members);
    } else {
        const auto& p = std::get<SymmetricProbabilistic>(model);
        if (p.family_size == 0 || tests % p.family_size != 0)
            throw std::invalid_argument("T2 must be a multiple of the family size");
        require_probability(p.family_rate, "family infection probability");
        require_probability(p.member_rate, "member infection probability");
        const BlockShape s = shape_for(p.families, tests / p.family_size);
        const double size = static_cast<double>(p.family_size), family_p = p.family_rate, member_p = p.member_rate;
        double aligned = 0.0;
        for (std::size_t i = 1; i <= p.family_size; ++i) {
            const double x = static_cast<double>(i);
            const double one = std::pow(member_p, x) * std::pow(1.0 - member_p, size - x);
            aligned += one * one / std::exp2(log2_binomial(size, x));
        }
        const double row_clear = std::pow(1.0 - family_p, s.per_row - 1.0) * (1.0 - family_p + s.per_row * family_p);
        r.value = std::clamp((1.0 - aligned) * (1.0 - std::pow(row_clear, s.rows)), 0.0, 1.0);
        r.formula_id = "any_fp_probabilistic";
        r.is_upper_bound = s.padded;
        r.inputs["F"] = static_cast<double>(p.families);
        r.inputs["M"] = size;
        r.inputs["q"] = family_p;
        r.inputs["p"] = member_p;
    }
    return r;
}

BoundReport error_rate_bound(const SymmetricModel& model, std::size_t families_per_row) {
    if (families_per_row == 0) throw std::invalid_argument("families per block row must be positive");
    BoundReport r;
    r.is_upper_bound = true;
    r.inputs["c"] = static_cast<double>(families_per_row);
    if (const auto* m = std::get_if<SymmetricCombinatorial>(&model)) {
        if (m->families == 0 || m->family_size == 0) throw std::invalid_argument("need F >= 1 and M >= 1");
        if (m->infected_families > m->families || m->infected_members > m->family_size)
            throw std::invalid_argument("infeasible infected counts");
        const std::size_t rows = (m->families + families_per_row - 1) / families_per_row;
        const BlockShape s{static_cast<double>(rows), static_cast<double>(families_per_row),
                           static_cast<double>(rows * families_per_row), rows * families_per_row != m->families};
        const double healthy_share = static_cast<double>(m->infected_families) *
                                     static_cast<double>(m->family_size - m->infected_members) /
                                     (static_cast<double>(m->families) * static_cast<double>(m->family_size));
        r.value = healthy_share * joint_symmetric_combinatorial(s, m->infected_families);
        r.formula_id = "error_rate_combinatorial";
    } else {
        const auto& p = std::get<SymmetricProbabilistic>(model);
        require_probability(p.family_rate, "family infection probability");
        require_probability(p.member_rate, "member infection probability");
        const double family_p = p.family_rate;
        r.value = (1.0 - p.member_rate) * family_p *
                  (1.0 - std::pow(1.0 - family_p, static_cast<double>(families_per_row) - 1.0));
        r.formula_id = "error_rate_probabilistic";
    }
    return r;
}

NoisyBound noisy_bound(const NoisyScheme& scheme) {
    NoisyBound out;
    auto report = [](double value, const char* id) {
        BoundReport r;
        r.value = std::clamp(value, 0.0, 1.0);
        r.formula_id = id;
        r.is_upper_bound = true;
        return r;
    };
    if (const auto* s = std::get_if<RepetitionScheme>(&scheme)) {
        require_threshold(s->z, s->delta);
        if (s->members == 0) throw std::invalid_argument("repetition bound needs n >= 1");
        const double zd = s->z * s->delta;
        out.false_negative =
            report(std::exp(-2.0 * static_cast<double>(s->tests) / static_cast<double>(s->members) * zd * zd),
                   "repetition_fn");
    } else if (const auto* s = std::get_if<BernoulliScheme>(&scheme)) {
        require_threshold(s->z, s->delta);
        require_probability(s->density, "Bernoulli density");
        const double zd = s->z * s->delta, th = s->density, test_count = static_cast<double>(s->tests);
        out.false_negative = report(std::pow(1.0 - th + th * std::exp(-2.0 * zd * zd), test_count), "bernoulli_fn");
        const double gap = (1.0 - s->z) * std::pow(1.0 - th, static_cast<double>(s->infected)) - zd;
        out.false_positive = report(std::pow(1.0 - th + th * std::exp(-2.0 * gap * gap), test_count), "bernoulli_fp");
    } else if (const auto* s = std::get_if<ConstantWeightScheme>(&scheme)) {
        require_threshold(s->z, s->delta);
        const double zd = s->z * s->delta;
        const double v = std::exp(-2.0 * static_cast<double>(s->column_weight) * zd * zd);
        out.false_negative = report(v, "constant_weight_fn");
        out.false_positive = report(v, "constant_weight_fp");
    } else {
        const auto& t = std::get<TwoStageScheme>(scheme);
        require_threshold(t.z, t.delta);
        if (t.infected_families == 0) throw std::invalid_argument("two-stage bound needs k_f >= 1");
        const double zd = t.z * t.delta;
        out.false_negative = report(std::exp(-2.0 * static_cast<double>(t.stage_one_tests) /
                                             static_cast<double>(t.infected_families) * zd * zd),
                                    "two_stage_fn");
    }
    return out;
}

CompositionSearch symmetric_c_is_minimizer(const JointModel& model, std::size_t families, std::size_t block_rows) {
    if (families > 12) throw SizeLimitError("composition search supports F <= 12");
    if (block_rows == 0 || block_rows > families) throw std::invalid_argument("need 1 <= b <= F");
    CompositionSearch out;
    out.balanced.assign(block_rows, families / block_rows);
    for (std::size_t i = 0; i < families % block_rows; ++i) ++out.balanced[i];
    out.balanced_value = pr_joint(model, out.balanced);
    out.minimum_value = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> c(block_rows);
    std::vector<std::pair<double, std::vector<std::size_t>>> seen;
    std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t row, std::size_t left) {
        if (row + 1 == block_rows) {
            c[row] = left;
            const double v = pr_joint(model, c);
            ++out.compositions;
            seen.emplace_back(v, c);
            if (v < out.minimum_value) {
                out.minimum_value = v;
                out.argmin = c;
            }
            return;
        }
        for (std::size_t x = 1; x + (block_rows - row - 1) <= left; ++x) {
            c[row] = x;
            recurse(row + 1, left - x);
        }
    };
    recurse(0, families);

    const double tol = 1e-12 * std::max(1.0, std::abs(out.minimum_value));
    out.balanced_is_minimal = out.balanced_value <= out.minimum_value + tol;
    auto is_balanced = [](const std::vector<std::size_t>& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return *hi - *lo <= 1;
    };
    for (const auto& [v, comp] : seen)
        if (v <= out.minimum_value + tol && !is_balanced(comp)) ++out.ties;
    return out;
}

}  // namespace commgt
