// Copyright 2026 The tnsim Authors
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

#include <fstream>
#include <regex>
#include <sstream>

#include "gtest/gtest.h"

#include "tnsim/tnsim.hpp"

using namespace tnsim;

static const std::string kData = TNSIM_DATA_DIR;

static std::vector<int> bundled_cuts(std::size_t* cap) {
    std::ifstream in(kData + "/sycamore54_d8.cuts.toml");
    std::stringstream text;
    text << in.rdbuf();
    const std::string s = text.str();
    std::smatch m;
    std::vector<int> cuts;
    if (std::regex_search(s, m, std::regex(R"(cuts = "([0-9,]+)\")"))) {
        std::stringstream list(m[1].str());
        std::string item;
        while (std::getline(list, item, ',')) cuts.push_back(std::stoi(item));
    }
    if (std::regex_search(s, m, std::regex(R"(max-rank = ([0-9]+))"))) *cap = std::stoul(m[1].str());
    return cuts;
}

TEST(bundled, layout_matches_generator) {
    const Circuit c = load_circuit(kData + "/sycamore54_d8.json");
    ASSERT_EQ(c.num_qubits(), 54);
    EXPECT_EQ(c.depth(), 8);
    const CircuitGraph g = sycamore_like_lattice(54);
    EXPECT_EQ(c.graph.edges(), g.edges());
    for (int q = 0; q < 54; ++q) {
        EXPECT_GE(c.graph.degree(q), 1);
        EXPECT_LE(c.graph.degree(q), 4);
    }
}

TEST(bundled, cut_slices_fit_the_rank_cap) {
    const Circuit c = fuse_single_qubit_gates(load_circuit(kData + "/sycamore54_d8.json"));
    std::size_t cap = 0;
    const std::vector<int> cuts = bundled_cuts(&cap);
    ASSERT_FALSE(cuts.empty());
    ASSERT_GT(cap, 0u);
    const std::string zeros(54, '0');
    const auto st = two_sided_evolve(c, zeros, zeros, default_split_cycle(c));
    const TensorNetwork net = build_overlap_network(st.phi, st.psi);
    const CutPlan plan = plan_cuts(net, cuts);
    // Slices share one shape, so a few spread over the index range suffice.
    for (std::uint64_t s : {std::uint64_t{0}, plan.slice_count / 2, plan.slice_count - 1}) {
        path::SearchOptions o;
        o.max_rank = cap;
        const path::SearchResult r = path::find_optimal_path(shape_of(slice_network(net, plan, s)), o);
        EXPECT_EQ(r.path.size(), 54u);
        EXPECT_LE(r.peak_rank, cap);
    }
}
