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

// Python bindings for the commgt core. Bit vectors cross the boundary as lists of 0/1 ints,
// matrices as lists of row supports.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "commgt/adaptive.hpp"
#include "commgt/bounds.hpp"
#include "commgt/channel.hpp"
#include "commgt/config.hpp"
#include "commgt/decoders.hpp"
#include "commgt/designs.hpp"
#include "commgt/errors.hpp"
#include "commgt/harness.hpp"

namespace py = pybind11;
using namespace commgt;

namespace {

TestMatrix to_matrix(std::size_t width, std::vector<Row> rows) { return TestMatrix(width, std::move(rows)); }

InfectionState state_from(const CommunityStructure& s, const BitVector& members) {
    if (members.size() != s.members()) throw std::invalid_argument("state length does not match the population");
    InfectionState st{members, BitVector(s.families(), 0)};
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i]) st.families[s.family_of(i)] = 1;
    return st;
}

py::dict to_dict(const DecodeResult& r) {
    py::dict d;
    d["hard_calls"] = r.hard_calls;
    if (r.family_calls) d["family_calls"] = *r.family_calls;
    if (r.member_posteriors) d["member_posteriors"] = *r.member_posteriors;
    if (r.family_posteriors) d["family_posteriors"] = *r.family_posteriors;
    return d;
}

std::string metrics_csv(const std::vector<MetricsRecord>& rs) {
    std::ostringstream out;
    write_metrics_csv(out, rs);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Community-aware group testing core";

    py::register_exception<NumericDegeneracy>(m, "NumericDegeneracy", PyExc_ArithmeticError);
    py::register_exception<SizeLimitError>(m, "SizeLimitError", PyExc_OverflowError);

    py::class_<CommunityStructure>(m, "CommunityStructure")
        .def(py::init<std::vector<std::size_t>>(), py::arg("family_sizes"))
        .def_static("symmetric", &CommunityStructure::symmetric, py::arg("families"), py::arg("family_size"))
        .def_property_readonly("families", &CommunityStructure::families)
        .def_property_readonly("members", &CommunityStructure::members)
        .def_property_readonly("family_sizes", &CommunityStructure::family_sizes)
        .def("family_of", &CommunityStructure::family_of)
        .def("members_of", &CommunityStructure::members_of)
        .def("__repr__", [](const CommunityStructure& s) {
            return "CommunityStructure(families=" + std::to_string(s.families()) +
                   ", members=" + std::to_string(s.members()) + ")";
        });

    py::class_<InfectionState>(m, "InfectionState")
        .def_readonly("members", &InfectionState::members)
        .def_readonly("families", &InfectionState::families)
        .def_property_readonly("infected_members", &InfectionState::infected_members)
        .def_property_readonly("infected_families", &InfectionState::infected_families);

    m.def(
        "sample_combinatorial",
        [](const CommunityStructure& s, std::size_t infected_families, std::vector<std::size_t> infected_members,
           std::uint64_t seed) { return sample_combinatorial(s, infected_families, infected_members, Seed{seed, 0}); },
        py::arg("structure"), py::arg("infected_families"), py::arg("infected_members"), py::arg("seed") = 0);
    m.def(
        "sample_probabilistic",
        [](const CommunityStructure& s, double family_rate, std::vector<double> member_rates, std::uint64_t seed) {
            return sample_probabilistic(s, family_rate, member_rates, Seed{seed, 0});
        },
        py::arg("structure"), py::arg("family_rate"), py::arg("member_rates"), py::arg("seed") = 0);

    m.def(
        "bernoulli_matrix",
        [](std::size_t tests, std::size_t width, double density, std::uint64_t seed) {
            return bernoulli_matrix(tests, width, density, Seed{seed, 0}).rows();
        },
        py::arg("tests"), py::arg("width"), py::arg("density"), py::arg("seed") = 0);
    m.def(
        "constant_column_weight_matrix",
        [](std::size_t tests, std::size_t width, std::size_t weight, std::uint64_t seed) {
            return constant_column_weight_matrix(tests, width, weight, Seed{seed, 0}).rows();
        },
        py::arg("tests"), py::arg("width"), py::arg("column_weight"), py::arg("seed") = 0);
    m.def(
        "community_g2",
        [](const CommunityStructure& s, std::size_t block_rows, bool canonical, std::uint64_t seed) {
            return community_g2(s, BlockDesignSpec::symmetric(s.families(), block_rows),
                                canonical ? BlockAssignment::Canonical : BlockAssignment::Random, Seed{seed, 0})
                .rows();
        },
        py::arg("structure"), py::arg("block_rows"), py::arg("canonical") = false, py::arg("seed") = 0);

    m.def(
        "run_matrix",
        [](const CommunityStructure& s, std::vector<Row> rows, const BitVector& members, double z, std::uint64_t seed) {
            const auto st = state_from(s, members);
            return run_matrix(to_matrix(s.members(), std::move(rows)), st,
                              z > 0 ? NoiseModel::z_channel(z) : NoiseModel::noiseless(), Seed{seed, 0});
        },
        py::arg("structure"), py::arg("rows"), py::arg("members"), py::arg("z") = 0.0, py::arg("seed") = 0);

    m.def(
        "comp",
        [](std::size_t width, std::vector<Row> rows, const BitVector& y) {
            return to_dict(comp(to_matrix(width, std::move(rows)), y));
        },
        py::arg("width"), py::arg("rows"), py::arg("outcomes"));
    m.def(
        "threshold_decode",
        [](std::size_t width, std::vector<Row> rows, const BitVector& y, double z, double delta) {
            return to_dict(threshold_decode(to_matrix(width, std::move(rows)), y, ThresholdConfig{z, delta}));
        },
        py::arg("width"), py::arg("rows"), py::arg("outcomes"), py::arg("z"), py::arg("delta"));
    m.def(
        "lbp_decode",
        [](const CommunityStructure& s, std::vector<Row> rows, const BitVector& y, double family_rate,
           std::vector<double> member_rate, double z, std::size_t iterations, bool community_aware) {
            LbpConfig cfg;
            cfg.iterations = iterations;
            cfg.z = z;
            cfg.family_rate = family_rate;
            cfg.member_rate = std::move(member_rate);
            cfg.community_aware = community_aware;
            return to_dict(lbp_decode(to_matrix(s.members(), std::move(rows)), s, cfg, y));
        },
        py::arg("structure"), py::arg("rows"), py::arg("outcomes"), py::arg("family_rate"), py::arg("member_rate"),
        py::arg("z") = 0.0, py::arg("iterations") = 10, py::arg("community_aware") = true);

    m.def(
        "adaptive_trial",
        [](const CommunityStructure& s, const std::string& algorithm, std::size_t infected_families,
           std::vector<std::size_t> infected_members, std::uint64_t seed) {
            const InfectionModelSpec model = CombinatorialModel{infected_families, std::move(infected_members)};
            const auto r =
                run_adaptive_trial(s, model, parse_algorithm(algorithm), NoiseModel::noiseless(), Seed{seed, 0});
            py::dict d;
            d["tests"] = r.tests;
            d["false_negatives"] = r.false_negatives;
            d["false_positives"] = r.false_positives;
            return d;
        },
        py::arg("structure"), py::arg("algorithm"), py::arg("infected_families"), py::arg("infected_members"),
        py::arg("seed") = 0);

    m.def("counting_bound", &counting_bound, py::arg("members"), py::arg("infected"));
    m.def(
        "combinatorial_community_bound",
        [](const CommunityStructure& s, std::size_t kf, std::vector<std::size_t> km) {
            return combinatorial_community_bound(s, kf, km);
        },
        py::arg("structure"), py::arg("infected_families"), py::arg("infected_members"));
    m.def(
        "probabilistic_community_bound",
        [](const CommunityStructure& s, double q, std::vector<double> p) {
            return probabilistic_community_bound(s, q, p);
        },
        py::arg("structure"), py::arg("family_rate"), py::arg("member_rates"));
    m.def(
        "pr_joint_combinatorial",
        [](std::size_t kf, std::vector<std::size_t> per_row) { return pr_joint_combinatorial(kf, per_row); },
        py::arg("infected_families"), py::arg("families_per_row"));
    m.def(
        "pr_joint_probabilistic",
        [](double q, std::vector<std::size_t> per_row) { return pr_joint_probabilistic(q, per_row); },
        py::arg("family_rate"), py::arg("families_per_row"));

    m.def(
        "run_experiment", [](const std::string& json_text) { return metrics_csv(run_experiment_config(json_text)); },
        py::arg("config_json"), "Run an experiment described by a JSON config; returns the metrics CSV.");
}
