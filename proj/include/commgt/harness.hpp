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

#ifndef COMMGT_HARNESS_HPP
#define COMMGT_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "commgt/adaptive.hpp"
#include "commgt/channel.hpp"
#include "commgt/model.hpp"

namespace commgt {

struct MetricsRecord {
    std::string experiment;
    std::string sweep_param;
    double value = 0.0;
    std::string metric;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

inline constexpr const char* kMetricsHeader = "experiment,sweep_param,value,metric,mean,stderr,trials,seed";

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> read_metrics_csv(std::istream& in);

// Mean and normal-approximation standard error.
class RunningStat {
   public:
    void add(double x);
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stderr_of_mean() const { return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

   private:
    std::size_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0;
};

// Runs fn(trial) for every trial on up to `workers` threads (0 = hardware
// concurrency); results are returned in trial order.
template <class Fn>
auto parallel_trials(std::size_t trials, std::size_t workers, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(trials);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(trials, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto body = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < trials;) {
            try {
                slots[t].emplace(fn(t));
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) failure = std::current_exception();
                next = trials;
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<R> out;
    out.reserve(trials);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

struct TrialScore {
    std::size_t tests = 0;
    std::size_t false_negatives = 0;
    std::size_t false_positives = 0;
    std::size_t infected = 0;
    std::size_t healthy = 0;

    std::optional<double> fn_rate() const;
    std::optional<double> fp_rate() const;
};

TrialScore score_trial(const BitVector& truth, const BitVector& estimate, std::size_t tests);

enum class AlgorithmKind { BinarySplitting, Hwang, Community, TwoStage };

struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::Community;
    // Representatives per family; absent means every member.
    std::optional<std::size_t> representatives;
    bool hwang_inside = false;
};

// One zero-error adaptive run on a sampled state.
TrialScore run_adaptive_trial(const CommunityStructure& structure, const InfectionModelSpec& model,
                              const AlgorithmSpec& algorithm, NoiseModel noise, Seed seed);

struct AvgTestsConfig {
    std::size_t families = 20;
    std::size_t family_size = 50;
    std::vector<double> member_rates{0.5, 0.6, 0.7, 0.8};
    // Expected infected members held fixed across the sweep: q = k / (n p).
    double expected_infected = 32.0;
    std::vector<std::string> algorithms{"alg1_r1", "alg1_rM", "bsa"};
    double fp_target = 0.005;
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
};

struct ErrorRateConfig {
    std::size_t families = 200;
    std::size_t family_size = 5;
    std::vector<double> member_rates{0.8};
    double expected_infected = 32.0;
    double z = 0.0;
    // Test budgets as multiples of the calibrated two-stage count.
    std::vector<double> budget_multipliers{1.0};
    std::vector<std::string> decoders{"comp_c_encoder", "clbp_nc_encoder", "comp_nc_encoder", "nclbp_nc_encoder"};
    std::size_t lbp_iterations = 10;
    std::size_t calibration_trials = 50;
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
};

struct AsymmetricConfig {
    std::size_t families = 200;
    std::size_t min_family_size = 5;
    std::size_t max_family_size = 50;
    double min_member_rate = 0.4;
    double max_member_rate = 0.8;
    double family_rate = 0.03;
    std::vector<std::string> algorithms{"bsa", "alg1_r1", "alg1_rM"};
    std::size_t instances = 500;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
};

std::vector<MetricsRecord> run_avg_tests_experiment(const AvgTestsConfig& cfg);
std::vector<MetricsRecord> run_error_rate_experiment(const ErrorRateConfig& cfg);
std::vector<MetricsRecord> run_asymmetric_experiment(const AsymmetricConfig& cfg);

// Mean stage-one and total test counts of the noiseless two-stage design
// tuned to zero errors on each calibration trial.
struct Calibration {
    double stage_one_tests = 0.0;
    double total_tests = 0.0;
};
Calibration calibrate_two_stage(const CommunityStructure& structure, double family_rate, double member_rate,
                                std::size_t trials, Seed seed, std::size_t workers = 1);

// Parses "alg1_r1", "alg1_rM", "alg1_r<k>", "bsa", "hgbsa", "alg1_hgbsa".
AlgorithmSpec parse_algorithm(const std::string& name);

}  // namespace commgt

#endif
