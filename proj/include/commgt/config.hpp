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

#ifndef COMMGT_CONFIG_HPP
#define COMMGT_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "commgt/adaptive.hpp"
#include "commgt/harness.hpp"
#include "commgt/model.hpp"

namespace commgt {

class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// JSON keys: "family_sizes" (or "families" + "family_size"), "model"
// ("combinatorial" with "k_f", "k_m"; "probabilistic" with "q", "p"), where
// "k_m" and "p" take a number or one entry per family.
struct ModelConfig {
    CommunityStructure structure = CommunityStructure::symmetric(1, 1);
    InfectionModelSpec model;
    double heavy_threshold = kHeavyInfectionFraction;
};

ModelConfig parse_model_config(const std::string& json_text);
AvgTestsConfig parse_avg_tests_config(const std::string& json_text);
ErrorRateConfig parse_error_rate_config(const std::string& json_text);
AsymmetricConfig parse_asymmetric_config(const std::string& json_text);

// Dispatches on the "experiment" key.
std::vector<MetricsRecord> run_experiment_config(const std::string& json_text);

struct TrialRow {
    std::size_t trial = 0;
    std::size_t tests_used = 0;
    std::size_t false_negatives = 0;
    std::size_t false_positives = 0;
};

// Per-trial runs of one algorithm on the configured community and model
// ("trials", "seed", optional "noise": {"z": ...}).
std::vector<TrialRow> run_trials_config(const std::string& json_text, const std::string& algorithm,
                                        std::optional<std::size_t> representatives);

}  // namespace commgt

#endif
