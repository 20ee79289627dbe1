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

#include "commgt/config.hpp"

#include <json.hpp>

namespace commgt {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        json j = json::parse(text);
        if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("configuration key '") + key + "' has the wrong type");
    }
}

template <class T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("configuration is missing '") + key + "'");
    return get_or<T>(j, key, T{});
}

template <class T>
std::vector<T> scalar_or_list(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("configuration is missing '") + key + "'");
    if (j.at(key).is_array()) return get_or<std::vector<T>>(j, key, {});
    return {get_or<T>(j, key, T{})};
}

CommunityStructure structure_from(const json& j) {
    try {
        if (j.contains("family_sizes")) return CommunityStructure(require<std::vector<std::size_t>>(j, "family_sizes"));
        return CommunityStructure::symmetric(require<std::size_t>(j, "families"),
                                             require<std::size_t>(j, "family_size"));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

template <class Fn>
auto guarded(Fn fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

ModelConfig parse_model_config(const std::string& json_text) {
    const json j = parse(json_text);
    ModelConfig cfg{structure_from(j), {}};
    const auto kind = require<std::string>(j, "model");
    if (kind == "combinatorial") {
        CombinatorialModel m{require<std::size_t>(j, "k_f"), scalar_or_list<std::size_t>(j, "k_m")};
        guarded([&] {
            m.validate(cfg.structure);
            return 0;
        });
        cfg.model = m;
    } else if (kind == "probabilistic") {
        ProbabilisticModel m{require<double>(j, "q"), scalar_or_list<double>(j, "p")};
        guarded([&] {
            m.validate(cfg.structure);
            return 0;
        });
        cfg.model = m;
    } else {
        throw ConfigError("model must be 'combinatorial' or 'probabilistic'");
    }
    cfg.heavy_threshold = get_or(j, "heavy_threshold", cfg.heavy_threshold);
    if (!(cfg.heavy_threshold >= 0.0 && cfg.heavy_threshold <= 1.0))
        throw ConfigError("heavy_threshold must lie in [0, 1]");
    return cfg;
}

AvgTestsConfig parse_avg_tests_config(const std::string& json_text) {
    const json j = parse(json_text);
    AvgTestsConfig c;
    c.families = get_or(j, "families", c.families);
    c.family_size = get_or(j, "family_size", c.family_size);
    c.member_rates = get_or(j, "p", c.member_rates);
    c.expected_infected = get_or(j, "expected_infected", c.expected_infected);
    c.algorithms = get_or(j, "algorithms", c.algorithms);
    c.fp_target = get_or(j, "fp_target", c.fp_target);
    c.trials = get_or(j, "trials", c.trials);
    c.seed = get_or(j, "seed", c.seed);
    c.workers = get_or(j, "workers", c.workers);
    if (c.trials == 0) throw ConfigError("trials must be at least 1");
    return c;
}

ErrorRateConfig parse_error_rate_config(const std::string& json_text) {
    const json j = parse(json_text);
    ErrorRateConfig c;
    c.families = get_or(j, "families", c.families);
    c.family_size = get_or(j, "family_size", c.family_size);
    c.member_rates = get_or(j, "p", c.member_rates);
    c.expected_infected = get_or(j, "expected_infected", c.expected_infected);
    if (j.contains("noise")) c.z = get_or(j.at("noise"), "z", c.z);
    c.budget_multipliers = get_or(j, "budget_multipliers", c.budget_multipliers);
    c.decoders = get_or(j, "decoders", c.decoders);
    c.lbp_iterations = get_or(j, "lbp_iterations", c.lbp_iterations);
    c.calibration_trials = get_or(j, "calibration_trials", c.calibration_trials);
    c.trials = get_or(j, "trials", c.trials);
    c.seed = get_or(j, "seed", c.seed);
    c.workers = get_or(j, "workers", c.workers);
    if (c.trials == 0) throw ConfigError("trials must be at least 1");
    return c;
}

AsymmetricConfig parse_asymmetric_config(const std::string& json_text) {
    const json j = parse(json_text);
    AsymmetricConfig c;
    c.families = get_or(j, "families", c.families);
    c.min_family_size = get_or(j, "min_family_size", c.min_family_size);
    c.max_family_size = get_or(j, "max_family_size", c.max_family_size);
    c.min_member_rate = get_or(j, "min_p", c.min_member_rate);
    c.max_member_rate = get_or(j, "max_p", c.max_member_rate);
    c.family_rate = get_or(j, "q", c.family_rate);
    c.algorithms = get_or(j, "algorithms", c.algorithms);
    c.instances = get_or(j, "trials", c.instances);
    c.seed = get_or(j, "seed", c.seed);
    c.workers = get_or(j, "workers", c.workers);
    if (c.instances == 0) throw ConfigError("trials must be at least 1");
    return c;
}

std::vector<MetricsRecord> run_experiment_config(const std::string& json_text) {
    const json j = parse(json_text);
    const auto kind = require<std::string>(j, "experiment");
    if (kind == "avg_tests") {
        const auto cfg = parse_avg_tests_config(json_text);
        return guarded([&] { return run_avg_tests_experiment(cfg); });
    }
    if (kind == "error_rate") {
        const auto cfg = parse_error_rate_config(json_text);
        return guarded([&] { return run_error_rate_experiment(cfg); });
    }
    if (kind == "asymmetric") {
        const auto cfg = parse_asymmetric_config(json_text);
        return guarded([&] { return run_asymmetric_experiment(cfg); });
    }
    throw ConfigError("experiment must be 'avg_tests', 'error_rate' or 'asymmetric'");
}

std::vector<TrialRow> run_trials_config(const std::string& json_text, const std::string& algorithm,
                                        std::optional<std::size_t> representatives) {
    const ModelConfig mc = parse_model_config(json_text);
    const json j = parse(json_text);
    const auto trials = get_or<std::size_t>(j, "trials", 500);
    const auto seed = get_or<std::uint64_t>(j, "seed", 1);
    const auto workers = get_or<std::size_t>(j, "workers", 1);
    const double z = j.contains("noise") ? get_or(j.at("noise"), "z", 0.0) : 0.0;
    if (trials == 0) throw ConfigError("trials must be at least 1");
    AlgorithmSpec spec = guarded([&] { return parse_algorithm(algorithm == "alg1" ? "alg1_rM" : algorithm); });
    if (representatives) spec.representatives = representatives;
    const NoiseModel noise = guarded([&] { return z > 0.0 ? NoiseModel::z_channel(z) : NoiseModel::noiseless(); });
    guarded([&] {
        if (spec.representatives) RepresentativeRule::per_family(*spec.representatives).validate(mc.structure);
        return 0;
    });
    const auto scores = parallel_trials(trials, workers, [&](std::size_t t) {
        return run_adaptive_trial(mc.structure, mc.model, spec, noise, Seed{seed, 0}.child(t));
    });
    std::vector<TrialRow> rows;
    for (std::size_t t = 0; t < scores.size(); ++t)
        rows.push_back({t, scores[t].tests, scores[t].false_negatives, scores[t].false_positives});
    return rows;
}

}  // namespace commgt
