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

// Command-line front end: simulate, design, decode, bound.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>

#include "commgt/adaptive.hpp"
#include "commgt/bounds.hpp"
#include "commgt/channel.hpp"
#include "commgt/config.hpp"
#include "commgt/decoders.hpp"
#include "commgt/designs.hpp"
#include "commgt/errors.hpp"
#include "commgt/harness.hpp"

namespace {

using namespace commgt;
using nlohmann::json;

constexpr int kConfigError = 2;
constexpr int kDegenerate = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, ',');) {
        try {
            out.push_back(static_cast<std::size_t>(std::stoull(cell)));
        } catch (const std::exception&) {
            throw ConfigError("expected a comma-separated list of integers: " + text);
        }
    }
    return out;
}

TestMatrix design_from_spec(const json& j) {
    const auto kind = j.at("design").get<std::string>();
    const Seed seed{j.value("seed", std::uint64_t{1}), 0};
    if (kind == "bernoulli")
        return bernoulli_matrix(j.at("tests").get<std::size_t>(), j.at("width").get<std::size_t>(),
                                j.at("density").get<double>(), seed);
    if (kind == "constant_weight")
        return constant_column_weight_matrix(j.at("tests").get<std::size_t>(), j.at("width").get<std::size_t>(),
                                             j.at("column_weight").get<std::size_t>(), seed);
    if (kind == "repetition")
        return repetition_matrix(j.at("width").get<std::size_t>(), j.at("repeats").get<std::size_t>());
    const CommunityStructure structure = j.contains("family_sizes")
                                             ? CommunityStructure(j.at("family_sizes").get<std::vector<std::size_t>>())
                                             : CommunityStructure::symmetric(j.at("families").get<std::size_t>(),
                                                                             j.at("family_size").get<std::size_t>());
    auto g2 = [&] {
        const BlockDesignSpec spec =
            j.contains("per_row")
                ? BlockDesignSpec::from_counts(j.at("per_row").get<std::vector<std::size_t>>())
                : BlockDesignSpec::symmetric(structure.families(), j.at("block_rows").get<std::size_t>());
        const auto assignment = j.value("assignment", std::string("random")) == "canonical" ? BlockAssignment::Canonical
                                                                                            : BlockAssignment::Random;
        return community_g2(structure, spec, assignment, seed.child(2));
    };
    auto g1 = [&] {
        FamilyDesignMode mode = OnePerFamily{};
        if (j.value("g1_mode", std::string("one_per_family")) == "sparse")
            mode = SparseFamilyDesign{j.at("g1_tests").get<std::size_t>(), j.at("g1_column_weight").get<std::size_t>()};
        const RepresentativeRule rule = j.contains("representatives")
                                            ? RepresentativeRule::per_family(j.at("representatives").get<std::size_t>())
                                            : RepresentativeRule::all_members();
        return community_g1(structure, mode, rule, seed.child(1));
    };
    if (kind == "community_g1") return g1();
    if (kind == "community_g2") return g2();
    if (kind == "community") return stack(g1(), g2());
    throw ConfigError("unknown design kind: " + kind);
}

int run(int argc, char** argv) {
    CLI::App app{"Community-aware group testing simulator"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Run an experiment or per-trial algorithm runs from a config file");
    std::string sim_config, sim_out, sim_algorithm;
    std::optional<std::size_t> sim_reps;
    sim->add_option("--config", sim_config, "JSON configuration")->required();
    sim->add_option("--out", sim_out, "CSV output path")->required();
    sim->add_option("--algorithm", sim_algorithm, "bsa | hgbsa | alg1 | two-stage (per-trial mode)")
        ->check(CLI::IsMember({"bsa", "hgbsa", "alg1", "two-stage"}));
    sim->add_option("--representatives", sim_reps, "Representatives per family for alg1 / two-stage");

    auto* des = app.add_subcommand("design", "Emit a test matrix from a JSON design spec");
    std::string des_spec, des_out;
    des->add_option("--spec", des_spec, "JSON design spec")->required();
    des->add_option("--out", des_out, "Matrix output path")->required();

    auto* dec = app.add_subcommand("decode", "Decode outcomes of a test matrix");
    std::string dec_matrix, dec_outcomes, dec_decoder = "comp", dec_sizes;
    double z = 0.0, delta = 0.0, q = 0.0, p = 0.0;
    std::size_t iterations = 10;
    bool agnostic = false, posteriors = false;
    dec->add_option("--matrix", dec_matrix, "Matrix file")->required();
    dec->add_option("--outcomes", dec_outcomes, "Outcome bit string")->required();
    dec->add_option("--decoder", dec_decoder, "comp | threshold | lbp")
        ->check(CLI::IsMember({"comp", "threshold", "lbp"}));
    dec->add_option("--z", z, "Z-channel flip probability");
    dec->add_option("--delta", delta, "Threshold slack");
    dec->add_option("--q", q, "Family infection probability (lbp)");
    dec->add_option("--p", p, "Member infection probability (lbp)");
    dec->add_option("--iterations", iterations, "LBP iterations");
    dec->add_option("--family-sizes", dec_sizes, "Comma-separated family sizes (lbp; default singletons)");
    dec->add_flag("--no-community", agnostic, "LBP without family variables");
    dec->add_flag("--posteriors", posteriors, "Also print posterior marginals");

    auto* bnd = app.add_subcommand("bound", "Evaluate a closed-form bound");
    std::string formula, variant = "bsa", rows_text, sizes_text;
    std::map<std::string, double> params;
    bnd->add_option("--formula", formula, "Formula id")->required();
    for (const char* name :
         {"n", "k", "p", "q", "F", "M", "k_f", "k_m", "R", "T", "T1", "T2", "c", "z", "delta", "theta", "L"}) {
        bnd->add_option_function<double>(std::string("--") + name, [&params, name](double v) { params[name] = v; });
    }
    bnd->add_option("--variant", variant, "bsa | hgbsa")->check(CLI::IsMember({"bsa", "hgbsa"}));
    bnd->add_option("--per-row", rows_text, "Comma-separated families per block row");
    bnd->add_option("--family-sizes", sizes_text, "Comma-separated family sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (sim->parsed()) {
        const std::string text = slurp(sim_config);
        auto out = open_out(sim_out);
        if (!sim_algorithm.empty()) {
            const std::string name = sim_algorithm == "two-stage" ? "two_stage" : sim_algorithm;
            out << "trial,tests_used,fn,fp\n";
            for (const auto& r : run_trials_config(text, name, sim_reps))
                out << r.trial << ',' << r.tests_used << ',' << r.false_negatives << ',' << r.false_positives << '\n';
        } else {
            write_metrics_csv(out, run_experiment_config(text));
        }
        return 0;
    }
    if (des->parsed()) {
        json j;
        try {
            j = json::parse(slurp(des_spec));
        } catch (const json::exception& e) {
            throw ConfigError(e.what());
        }
        TestMatrix m;
        try {
            m = design_from_spec(j);
        } catch (const json::exception& e) {
            throw ConfigError(e.what());
        }
        auto out = open_out(des_out);
        write_matrix(out, m);
        return 0;
    }
    if (dec->parsed()) {
        std::ifstream in(dec_matrix);
        if (!in) throw ConfigError("cannot read " + dec_matrix);
        const TestMatrix m = read_matrix(in);
        const OutcomeVector y = parse_bits(dec_outcomes);
        DecodeResult r;
        if (dec_decoder == "comp") {
            r = comp(m, y);
        } else if (dec_decoder == "threshold") {
            r = threshold_decode(m, y, ThresholdConfig{z, delta});
        } else {
            const CommunityStructure structure = dec_sizes.empty() ? CommunityStructure::symmetric(m.width(), 1)
                                                                   : CommunityStructure(parse_sizes(dec_sizes));
            r = lbp_decode(m, structure, LbpConfig{iterations, z, q, {p}, !agnostic}, y);
        }
        std::cout << "hard_calls=" << format_bits(r.hard_calls) << '\n';
        if (posteriors && r.member_posteriors) {
            std::cout << "posteriors=";
            for (std::size_t i = 0; i < r.member_posteriors->size(); ++i)
                std::cout << (i ? "," : "") << std::fixed << std::setprecision(6) << (*r.member_posteriors)[i];
            std::cout << '\n';
        }
        return 0;
    }

    auto need = [&](const char* name) {
        auto it = params.find(name);
        if (it == params.end()) throw ConfigError(std::string("formula ") + formula + " needs --" + name);
        return it->second;
    };
    auto count = [&](const char* name) {
        const double v = need(name);
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw ConfigError(std::string("--") + name + " must be a non-negative integer");
        return static_cast<std::size_t>(v);
    };
    auto structure_arg = [&] {
        if (!sizes_text.empty()) return CommunityStructure(parse_sizes(sizes_text));
        return CommunityStructure::symmetric(count("F"), count("M"));
    };
    BoundReport r;
    r.formula_id = formula;
    if (formula == "counting") {
        r.value = counting_bound(count("n"), count("k"));
    } else if (formula == "counting_probabilistic") {
        r.value = counting_bound_probabilistic(count("n"), need("p"));
    } else if (formula == "combinatorial_community") {
        const std::size_t km = count("k_m");
        r.value = combinatorial_community_bound(structure_arg(), count("k_f"), {&km, 1});
    } else if (formula == "probabilistic_community") {
        const double pv = need("p");
        r.value = probabilistic_community_bound(structure_arg(), need("q"), {&pv, 1});
    } else if (formula == "phi_combinatorial") {
        r.value = positive_fraction_combinatorial(count("M"), count("k_m"), count("R"));
    } else if (formula == "phi_probabilistic") {
        r.value = positive_fraction_probabilistic(need("p"), count("R"), count("M"));
    } else if (formula == "expected_tests_combinatorial") {
        r.value =
            expected_tests_combinatorial(count("F"), count("M"), count("k_f"), count("k_m"), count("R"),
                                         variant == "hgbsa" ? SearchVariant::Hwang : SearchVariant::BinarySplitting);
        r.is_upper_bound = true;
    } else if (formula == "expected_tests_probabilistic") {
        r.value = expected_tests_probabilistic(count("F"), count("M"), need("q"), need("p"), count("R"));
        r.is_upper_bound = true;
    } else if (formula == "pr_joint_combinatorial") {
        r.value = pr_joint_combinatorial(count("k_f"), parse_sizes(rows_text));
    } else if (formula == "pr_joint_probabilistic") {
        r.value = pr_joint_probabilistic(need("q"), parse_sizes(rows_text));
    } else if (formula == "any_fp_combinatorial") {
        r = any_fp_probability(SymmetricCombinatorial{count("F"), count("M"), count("k_f"), count("k_m")}, count("T2"));
    } else if (formula == "any_fp_probabilistic") {
        r = any_fp_probability(SymmetricProbabilistic{count("F"), count("M"), need("q"), need("p")}, count("T2"));
    } else if (formula == "error_rate_combinatorial") {
        r = error_rate_bound(SymmetricCombinatorial{count("F"), count("M"), count("k_f"), count("k_m")}, count("c"));
    } else if (formula == "error_rate_probabilistic") {
        r = error_rate_bound(SymmetricProbabilistic{count("F"), count("M"), need("q"), need("p")}, count("c"));
    } else if (formula == "repetition_fn") {
        r = noisy_bound(RepetitionScheme{count("T"), count("n"), need("z"), need("delta")}).false_negative;
    } else if (formula == "bernoulli_fn" || formula == "bernoulli_fp") {
        auto nb = noisy_bound(BernoulliScheme{count("T"), need("theta"), need("z"), need("delta"), count("k")});
        r = formula == "bernoulli_fn" ? nb.false_negative : *nb.false_positive;
    } else if (formula == "constant_weight_fn" || formula == "constant_weight_fp") {
        auto nb = noisy_bound(ConstantWeightScheme{count("L"), need("z"), need("delta")});
        r = formula == "constant_weight_fn" ? nb.false_negative : *nb.false_positive;
    } else if (formula == "two_stage_fn") {
        r = noisy_bound(TwoStageScheme{count("T1"), count("k_f"), need("z"), need("delta")}).false_negative;
    } else {
        throw ConfigError("unknown formula: " + formula);
    }
    std::cout << "formula,value,is_upper_bound\n"
              << formula << ',' << std::setprecision(12) << r.value << ',' << (r.is_upper_bound ? "true" : "false")
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const commgt::NumericDegeneracy& e) {
        std::cerr << "numeric degeneracy: " << e.what() << '\n';
        return kDegenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const commgt::SizeLimitError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
