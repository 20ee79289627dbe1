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

#include "commgt/harness.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "commgt/bounds.hpp"
#include "commgt/decoders.hpp"
#include "commgt/designs.hpp"

namespace commgt {

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
    out << kMetricsHeader << '\n';
    // Shortest text that reads back to the same double.
    auto num = [](double x) {
        char buf[32];
        const auto end = std::to_chars(buf, buf + sizeof buf, x).ptr;
        return std::string(buf, end);
    };
    for (const auto& r : records)
        out << r.experiment << ',' << r.sweep_param << ',' << num(r.value) << ',' << r.metric << ',' << num(r.mean)
            << ',' << num(r.stderr_) << ',' << r.trials << ',' << r.seed << '\n';
}

std::vector<MetricsRecord> read_metrics_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) throw std::invalid_argument("unexpected metrics header");
    std::vector<MetricsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 8) throw std::invalid_argument("metrics row needs 8 fields: " + line);
        MetricsRecord r;
        r.experiment = f[0];
        r.sweep_param = f[1];
        r.value = std::stod(f[2]);
        r.metric = f[3];
        r.mean = std::stod(f[4]);
        r.stderr_ = std::stod(f[5]);
        r.trials = static_cast<std::size_t>(std::stoull(f[6]));
        r.seed = std::stoull(f[7]);
        out.push_back(std::move(r));
    }
    return out;
}

void RunningStat::add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
}

std::optional<double> TrialScore::fn_rate() const {
    if (infected == 0) return std::nullopt;
    return static_cast<double>(false_negatives) / static_cast<double>(infected);
}

std::optional<double> TrialScore::fp_rate() const {
    if (healthy == 0) return std::nullopt;
    return static_cast<double>(false_positives) / static_cast<double>(healthy);
}

TrialScore score_trial(const BitVector& truth, const BitVector& estimate, std::size_t tests) {
    if (truth.size() != estimate.size()) throw std::invalid_argument("estimate length differs from truth");
    TrialScore s;
    s.tests = tests;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) {
            ++s.infected;
            s.false_negatives += !estimate[i];
        } else {
            ++s.healthy;
            s.false_positives += estimate[i] != 0;
        }
    }
    return s;
}

AlgorithmSpec parse_algorithm(const std::string& name) {
    AlgorithmSpec spec;
    if (name == "bsa") {
        spec.kind = AlgorithmKind::BinarySplitting;
    } else if (name == "hgbsa") {
        spec.kind = AlgorithmKind::Hwang;
    } else if (name == "two_stage" || name == "two-stage") {
        spec.kind = AlgorithmKind::TwoStage;
    } else if (name == "alg1" || name == "alg1_rM") {
        spec.kind = AlgorithmKind::Community;
    } else if (name == "alg1_hgbsa") {
        spec.kind = AlgorithmKind::Community;
        spec.hwang_inside = true;
    } else if (name.rfind("alg1_r", 0) == 0) {
        spec.kind = AlgorithmKind::Community;
        std::size_t r = 0;
        const char* b = name.data() + 6;
        const char* e = name.data() + name.size();
        auto [ptr, ec] = std::from_chars(b, e, r);
        if (ec != std::errc{} || ptr != e || b == e) throw std::invalid_argument("unknown algorithm: " + name);
        spec.representatives = r;
    } else {
        throw std::invalid_argument("unknown algorithm: " + name);
    }
    return spec;
}

namespace {

RepresentativeRule rule_for(const AlgorithmSpec& a) {
    return a.representatives ? RepresentativeRule::per_family(*a.representatives) : RepresentativeRule::all_members();
}

std::size_t clamp_weight(double w, std::size_t tests) {
    const auto r = static_cast<std::size_t>(std::max(1.0, std::round(w)));
    return std::min(r, tests);
}

}  // namespace

TrialScore run_adaptive_trial(const CommunityStructure& structure, const InfectionModelSpec& model,
                              const AlgorithmSpec& algorithm, NoiseModel noise, Seed seed) {
    const InfectionState state = sample_state(structure, model, seed.child(0));
    TestOracle oracle(state, noise, seed.child(1));
    std::vector<std::uint32_t> everyone(structure.members());
    for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = static_cast<std::uint32_t>(i);
    switch (algorithm.kind) {
        case AlgorithmKind::BinarySplitting: {
            auto r = binary_splitting(everyone, oracle);
            return score_trial(state.members, r.estimates, r.tests_used);
        }
        case AlgorithmKind::Hwang: {
            auto r = hgbsa(everyone, state.infected_members(), oracle);
            return score_trial(state.members, r.estimates, r.tests_used);
        }
        case AlgorithmKind::Community: {
            const RepresentativeRule rule = rule_for(algorithm);
            const SearchChoice search =
                algorithm.hwang_inside ? hwang_counts_for(structure, model, rule) : SearchChoice::binary();
            auto r = adaptive_community(structure, rule, search, oracle, seed.child(2));
            return score_trial(state.members, r.estimates, r.tests_used);
        }
        case AlgorithmKind::TwoStage: {
            const RepresentativeRule rule = rule_for(algorithm);
            const SearchChoice expected = hwang_counts_for(structure, model, rule);
            const double residual = std::max<double>(1.0, static_cast<double>(expected.member_count));
            StageTwoDesign stage2;
            stage2.tests = static_cast<std::size_t>(
                std::ceil(std::exp(1.0) * residual * std::log(static_cast<double>(structure.members()) + 1.0)));
            stage2.column_weight =
                clamp_weight(std::log(2.0) * static_cast<double>(stage2.tests) / residual, stage2.tests);
            auto r = two_stage(structure, rule, StageOneDesign{}, stage2, state, noise, seed.child(2));
            return score_trial(state.members, r.estimates, r.tests_used);
        }
    }
    throw std::logic_error("unhandled algorithm kind");
}

namespace {

struct RateStats {
    RunningStat tests, fn, fp;
    void add(const TrialScore& s) {
        tests.add(static_cast<double>(s.tests));
        if (auto r = s.fn_rate()) fn.add(*r);
        if (auto r = s.fp_rate()) fp.add(*r);
    }
};

MetricsRecord record(const std::string& experiment, const std::string& param, double value, const std::string& metric,
                     const RunningStat& stat, std::uint64_t seed) {
    return MetricsRecord{experiment, param, value, metric, stat.mean(), stat.stderr_of_mean(), stat.count(), seed};
}

MetricsRecord constant(const std::string& experiment, const std::string& param, double value, const std::string& metric,
                       double mean, std::size_t trials, std::uint64_t seed) {
    return MetricsRecord{experiment, param, value, metric, mean, 0.0, trials, seed};
}

void push_rates(std::vector<MetricsRecord>& out, const std::string& exp, const std::string& param, double value,
                const std::string& name, const RateStats& s, std::uint64_t seed) {
    out.push_back(record(exp, param, value, name + "_tests", s.tests, seed));
    out.push_back(record(exp, param, value, name + "_fn_rate", s.fn, seed));
    out.push_back(record(exp, param, value, name + "_fp_rate", s.fp, seed));
}

double family_rate_for(double expected_infected, std::size_t members, double member_rate) {
    if (!(member_rate > 0.0)) throw std::invalid_argument("member infection probability must be positive");
    const double family_p = expected_infected / (static_cast<double>(members) * member_rate);
    if (!(family_p >= 0.0 && family_p <= 1.0))
        throw std::invalid_argument("expected infected count is unreachable at this member probability");
    return family_p;
}

// Realized community lower bound: families holding infected members and
// their infected counts.
double realized_community_bound(const CommunityStructure& structure, const InfectionState& state) {
    std::size_t families = 0;
    double members = 0.0;
    for (std::size_t j = 0; j < structure.families(); ++j) {
        const std::size_t k = state.infected_in_family(structure, j);
        if (k == 0) continue;
        ++families;
        members += log2_binomial(static_cast<double>(structure.family_size(j)), static_cast<double>(k));
    }
    return log2_binomial(static_cast<double>(structure.families()), static_cast<double>(families)) + members;
}

}  // namespace

std::vector<MetricsRecord> run_avg_tests_experiment(const AvgTestsConfig& cfg) {
    if (cfg.trials == 0) throw std::invalid_argument("trials must be at least 1");
    const CommunityStructure structure = CommunityStructure::symmetric(cfg.families, cfg.family_size);
    const std::size_t population = structure.members();
    const std::string exp = "avg_tests";
    std::vector<MetricsRecord> out;
    for (std::size_t pi = 0; pi < cfg.member_rates.size(); ++pi) {
        const double member_p = cfg.member_rates[pi];
        const double family_p = family_rate_for(cfg.expected_infected, population, member_p);
        const InfectionModelSpec model = ProbabilisticModel{family_p, {member_p}};
        const Seed point = Seed{cfg.seed, 0}.child(pi);

        out.push_back(constant(exp, "p", member_p, "family_rate", family_p, cfg.trials, cfg.seed));
        out.push_back(constant(exp, "p", member_p, "counting_bound",
                               counting_bound_probabilistic(population, family_p * member_p), cfg.trials, cfg.seed));
        out.push_back(constant(exp, "p", member_p, "community_bound",
                               probabilistic_community_bound(structure, family_p, {&member_p, 1}), cfg.trials,
                               cfg.seed));
        const auto realized = parallel_trials(cfg.trials, cfg.workers, [&](std::size_t t) {
            return realized_community_bound(structure, sample_state(structure, model, point.child(t).child(0)));
        });
        RunningStat rb;
        for (double v : realized) rb.add(v);
        out.push_back(record(exp, "p", member_p, "combinatorial_bound", rb, cfg.seed));

        for (const auto& name : cfg.algorithms) {
            RateStats stats;
            if (name == "nonadaptive") {
                // Largest block-row load whose error-rate bound meets the target.
                std::size_t per_row = 1;
                for (std::size_t candidate = 1; candidate <= cfg.families; ++candidate)
                    if (error_rate_bound(SymmetricProbabilistic{cfg.families, cfg.family_size, family_p, member_p},
                                         candidate)
                            .value <= cfg.fp_target)
                        per_row = candidate;
                const std::size_t rows = (cfg.families + per_row - 1) / per_row;
                const auto scores = parallel_trials(cfg.trials, cfg.workers, [&](std::size_t t) {
                    const Seed s = point.child(t);
                    const InfectionState state = sample_state(structure, model, s.child(0));
                    const TestMatrix g1 =
                        community_g1(structure, OnePerFamily{}, RepresentativeRule::all_members(), s.child(3));
                    const TestMatrix g2 = community_g2(structure, BlockDesignSpec::symmetric(cfg.families, rows),
                                                       BlockAssignment::Random, s.child(4));
                    const auto y1 = run_matrix(g1, state, NoiseModel::noiseless(), s.child(5));
                    const auto y2 = run_matrix(g2, state, NoiseModel::noiseless(), s.child(6));
                    const auto d = community_comp(g1, g2, y1, y2, structure);
                    return score_trial(state.members, d.hard_calls, g1.tests() + g2.tests());
                });
                for (const auto& sc : scores) stats.add(sc);
            } else {
                const AlgorithmSpec spec = parse_algorithm(name);
                const auto scores = parallel_trials(cfg.trials, cfg.workers, [&](std::size_t t) {
                    return run_adaptive_trial(structure, model, spec, NoiseModel::noiseless(), point.child(t));
                });
                for (const auto& sc : scores) stats.add(sc);
            }
            push_rates(out, exp, "p", member_p, name, stats, cfg.seed);
        }
    }
    return out;
}

Calibration calibrate_two_stage(const CommunityStructure& structure, double family_rate, double member_rate,
                                std::size_t trials, Seed seed, std::size_t workers) {
    if (trials == 0) throw std::invalid_argument("calibration needs at least one trial");
    const std::size_t family_count = structure.families();
    const double expected_families = std::max(1.0, static_cast<double>(family_count) * family_rate);
    const InfectionModelSpec model = ProbabilisticModel{family_rate, {member_rate}};
    struct Cal {
        double first, total;
    };
    const auto runs = parallel_trials(trials, workers, [&](std::size_t t) {
        const Seed s = seed.child(t);
        const InfectionState state = sample_state(structure, model, s.child(0));
        BitVector truth(family_count);
        for (std::size_t j = 0; j < family_count; ++j) truth[j] = state.infected_in_family(structure, j) > 0;
        // Smallest family design that COMP decodes exactly on this state.
        std::size_t first = family_count;
        for (std::size_t stage_one = 1; stage_one < family_count; ++stage_one) {
            const std::size_t weight =
                clamp_weight(std::log(2.0) * static_cast<double>(stage_one) / expected_families, stage_one);
            const TestMatrix fam =
                constant_column_weight_matrix(stage_one, family_count, weight, s.child(1).child(stage_one));
            OutcomeVector y(stage_one, 0);
            for (std::size_t r = 0; r < stage_one; ++r)
                for (std::uint32_t f : fam.row(r)) y[r] = y[r] || truth[f];
            if (comp(fam, y).hard_calls == truth) {
                first = stage_one;
                break;
            }
        }
        std::size_t individual = 0;
        bool rest = false;
        for (std::size_t j = 0; j < family_count; ++j) {
            if (truth[j])
                individual += structure.family_size(j);
            else
                rest = true;
        }
        return Cal{static_cast<double>(first), static_cast<double>(first + individual + (rest ? 1 : 0))};
    });
    Calibration c;
    for (const auto& r : runs) {
        c.stage_one_tests += r.first;
        c.total_tests += r.total;
    }
    c.stage_one_tests /= static_cast<double>(trials);
    c.total_tests /= static_cast<double>(trials);
    return c;
}

std::vector<MetricsRecord> run_error_rate_experiment(const ErrorRateConfig& cfg) {
    if (cfg.trials == 0) throw std::invalid_argument("trials must be at least 1");
    for (const auto& d : cfg.decoders)
        if (d != "comp_c_encoder" && d != "clbp_nc_encoder" && d != "comp_nc_encoder" && d != "nclbp_nc_encoder")
            throw std::invalid_argument("unknown decoder: " + d);
    const CommunityStructure structure = CommunityStructure::symmetric(cfg.families, cfg.family_size);
    const NoiseModel noise = cfg.z > 0.0 ? NoiseModel::z_channel(cfg.z) : NoiseModel::noiseless();
    const std::size_t population = structure.members(), family_count = cfg.families, size = cfg.family_size;
    const std::string exp = "error_rate";
    std::vector<MetricsRecord> out;
    for (std::size_t pi = 0; pi < cfg.member_rates.size(); ++pi) {
        const double member_p = cfg.member_rates[pi];
        const double family_p = family_rate_for(cfg.expected_infected, population, member_p);
        const InfectionModelSpec model = ProbabilisticModel{family_p, {member_p}};
        const Seed point = Seed{cfg.seed, 0}.child(pi);
        const Calibration cal = calibrate_two_stage(structure, family_p, member_p, cfg.calibration_trials,
                                                    point.child(1u << 20), cfg.workers);
        out.push_back(
            constant(exp, "p", member_p, "calibrated_tests", cal.total_tests, cfg.calibration_trials, cfg.seed));
        out.push_back(constant(exp, "p", member_p, "calibrated_stage_one", cal.stage_one_tests, cfg.calibration_trials,
                               cfg.seed));

        for (double mult : cfg.budget_multipliers) {
            const auto budget = static_cast<std::size_t>(std::max(1.0, std::round(mult * cal.total_tests)));
            const std::size_t stage_one =
                std::min<std::size_t>(budget, static_cast<std::size_t>(std::max(1.0, std::round(cal.stage_one_tests))));
            const std::size_t rows = std::max<std::size_t>(1, (budget - stage_one) / size);
            const double expected_families = std::max(1.0, static_cast<double>(family_count) * family_p);
            const std::size_t family_weight =
                clamp_weight(std::log(2.0) * static_cast<double>(stage_one) / expected_families, stage_one);
            const std::size_t weight =
                clamp_weight(std::log(2.0) * static_cast<double>(budget) / cfg.expected_infected, budget);
            LbpConfig community{cfg.lbp_iterations, cfg.z, family_p, {member_p}, true};
            LbpConfig agnostic = community;
            agnostic.community_aware = false;

            using Scores = std::vector<TrialScore>;
            const auto per_trial = parallel_trials(cfg.trials, cfg.workers, [&](std::size_t t) {
                const Seed s = point.child(t);
                const InfectionState state = sample_state(structure, model, s.child(0));
                Scores scores;
                std::optional<TestMatrix> nc;
                std::optional<OutcomeVector> ync;
                for (const auto& d : cfg.decoders) {
                    if (d == "comp_c_encoder") {
                        const TestMatrix g1 = community_g1(structure, SparseFamilyDesign{stage_one, family_weight},
                                                           RepresentativeRule::all_members(), s.child(3));
                        const TestMatrix g2 = community_g2(structure, BlockDesignSpec::symmetric(family_count, rows),
                                                           BlockAssignment::Random, s.child(4));
                        const auto y1 = run_matrix(g1, state, noise, s.child(5));
                        const auto y2 = run_matrix(g2, state, noise, s.child(6));
                        scores.push_back(score_trial(state.members,
                                                     community_comp(g1, g2, y1, y2, structure).hard_calls,
                                                     g1.tests() + g2.tests()));
                        continue;
                    }
                    if (!nc) {
                        nc = constant_column_weight_matrix(budget, population, weight, s.child(7));
                        ync = run_matrix(*nc, state, noise, s.child(8));
                    }
                    BitVector calls;
                    if (d == "comp_nc_encoder")
                        calls = comp(*nc, *ync).hard_calls;
                    else if (d == "clbp_nc_encoder")
                        calls = lbp_decode(*nc, structure, community, *ync).hard_calls;
                    else
                        calls = lbp_decode(*nc, structure, agnostic, *ync).hard_calls;
                    scores.push_back(score_trial(state.members, calls, budget));
                }
                return scores;
            });
            std::ostringstream tag;
            tag << "[x" << mult << "]";
            out.push_back(
                constant(exp, "p", member_p, "tests" + tag.str(), static_cast<double>(budget), cfg.trials, cfg.seed));
            for (std::size_t di = 0; di < cfg.decoders.size(); ++di) {
                RateStats stats;
                for (const auto& sc : per_trial) stats.add(sc[di]);
                out.push_back(
                    record(exp, "p", member_p, cfg.decoders[di] + "_fn_rate" + tag.str(), stats.fn, cfg.seed));
                out.push_back(
                    record(exp, "p", member_p, cfg.decoders[di] + "_fp_rate" + tag.str(), stats.fp, cfg.seed));
            }
        }
    }
    return out;
}

std::vector<MetricsRecord> run_asymmetric_experiment(const AsymmetricConfig& cfg) {
    if (cfg.instances == 0) throw std::invalid_argument("instances must be at least 1");
    if (cfg.families == 0 || cfg.min_family_size == 0 || cfg.min_family_size > cfg.max_family_size)
        throw std::invalid_argument("invalid family size range");
    if (!(cfg.min_member_rate >= 0.0 && cfg.min_member_rate <= cfg.max_member_rate && cfg.max_member_rate <= 1.0))
        throw std::invalid_argument("invalid member probability range");
    if (!(cfg.family_rate > 0.0 && cfg.family_rate <= 1.0))
        throw std::invalid_argument("family infection probability must lie in (0, 1]");
    std::vector<AlgorithmSpec> specs;
    for (const auto& a : cfg.algorithms) specs.push_back(parse_algorithm(a));

    const auto ratios = parallel_trials(cfg.instances, cfg.workers, [&](std::size_t i) {
        const Seed s = Seed{cfg.seed, 0}.child(i);
        Rng rng(s.child(0));
        std::vector<std::size_t> sizes(cfg.families);
        std::vector<double> rates(cfg.families);
        for (std::size_t j = 0; j < cfg.families; ++j) {
            sizes[j] = cfg.min_family_size + rng.below(cfg.max_family_size - cfg.min_family_size + 1);
            rates[j] = cfg.min_member_rate + (cfg.max_member_rate - cfg.min_member_rate) * rng.uniform();
        }
        const CommunityStructure structure(sizes);
        const double bound = probabilistic_community_bound(structure, cfg.family_rate, rates);
        const InfectionModelSpec model = ProbabilisticModel{cfg.family_rate, rates};
        std::vector<double> r;
        for (const auto& spec : specs) {
            const TrialScore sc = run_adaptive_trial(structure, model, spec, NoiseModel::noiseless(), s.child(1));
            r.push_back(static_cast<double>(sc.tests) / bound);
        }
        return r;
    });

    const std::string exp = "asymmetric";
    std::vector<MetricsRecord> out;
    for (std::size_t a = 0; a < specs.size(); ++a) {
        RunningStat stat;
        std::vector<double> xs;
        for (const auto& r : ratios) {
            stat.add(r[a]);
            xs.push_back(r[a]);
        }
        std::sort(xs.begin(), xs.end());
        auto quantile = [&](double f) {
            const double pos = f * static_cast<double>(xs.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const std::size_t hi = std::min(lo + 1, xs.size() - 1);
            return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
        };
        const std::string& name = cfg.algorithms[a];
        out.push_back(record(exp, "q", cfg.family_rate, name + "_ratio", stat, cfg.seed));
        const std::pair<const char*, double> qs[] = {
            {"_ratio_min", 0.0}, {"_ratio_q1", 0.25}, {"_ratio_median", 0.5}, {"_ratio_q3", 0.75}, {"_ratio_max", 1.0}};
        for (const auto& [suffix, f] : qs)
            out.push_back(constant(exp, "q", cfg.family_rate, name + suffix, quantile(f), xs.size(), cfg.seed));
    }
    return out;
}

}  // namespace commgt
