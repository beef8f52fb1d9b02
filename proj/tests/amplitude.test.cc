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

#include "tnsim/amplitude.hpp"

#include <random>

#include "gtest/gtest.h"

#include "support/test_util.hpp"
#include "tnsim/oracle.hpp"

using namespace tnsim;

static Circuit identity_circuit(int rows, int cols) {
    Circuit c;
    c.graph = generate_lattice(LatticeKind::Square, rows, cols);
    return c;
}

TEST(amplitude, identity_circuit) {
    const Circuit c = identity_circuit(2, 2);
    EXPECT_NEAR(std::abs(compute_amplitude(c, "0101", "0101").amplitude - Complex(1)), 0.0, 1e-15);
    EXPECT_EQ(compute_amplitude(c, "0101", "0111").amplitude, Complex(0));
}

TEST(amplitude, matches_oracle_on_random_cases) {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        auto rc = tnsim::testing::random_case(rng, 4, 14, 1, 8);
        const AmplitudeResult r = compute_amplitude(rc.circuit, rc.in, rc.out);
        const Complex want = oracle::amplitude_oracle(rc.circuit, rc.in, rc.out);
        ASSERT_LT(std::abs(r.amplitude - want), 1e-10) << "trial " << trial;
        EXPECT_EQ(r.slice_count, 1u);
        EXPECT_EQ(r.multiplies, r.path_score);
    }
}

TEST(amplitude, cuts_and_workers_do_not_change_the_value) {
    std::mt19937_64 rng(62);
    const CircuitGraph g = generate_lattice(LatticeKind::SycamoreLike, 3, 4);
    RqcOptions opt;
    opt.depth = 6;
    opt.seed = 8;
    const Circuit c = generate_rqc(g, opt);
    const std::string in = tnsim::testing::random_bits(rng, 12), out = tnsim::testing::random_bits(rng, 12);
    const Complex want = oracle::amplitude_oracle(c, in, out);

    AmplitudeOptions o;
    o.cut_edges = std::vector<int>{0, 5, 9};
    const AmplitudeResult one = compute_amplitude(c, in, out, o);
    EXPECT_GT(one.slice_count, 1u);
    EXPECT_LT(std::abs(one.amplitude - want), 1e-10);
    o.workers = 3;
    const AmplitudeResult three = compute_amplitude(c, in, out, o);
    EXPECT_EQ(three.amplitude, one.amplitude);
    EXPECT_EQ(three.multiplies, one.multiplies);
}

TEST(amplitude, rank_cap_plans_cuts) {
    const CircuitGraph g = generate_lattice(LatticeKind::Square, 4, 4);
    RqcOptions opt;
    opt.depth = 4;
    opt.seed = 2;
    opt.gate = GateKind::CZ;
    const Circuit c = generate_rqc(g, opt);
    const std::string in(16, '0'), out = "0110100110010110";
    AmplitudeOptions o;
    o.max_rank = 4;
    const AmplitudeResult r = compute_amplitude(c, in, out, o);
    EXPECT_FALSE(r.cut_edges.empty());
    EXPECT_LE(r.peak_rank, 4u);
    EXPECT_LT(std::abs(r.amplitude - oracle::amplitude_oracle(c, in, out)), 1e-10);
}

TEST(amplitude, split_cycle_does_not_change_the_value) {
    std::mt19937_64 rng(63);
    auto rc = tnsim::testing::random_case(rng, 6, 12, 4, 8);
    AmplitudeOptions o;
    std::vector<Complex> values;
    for (int split = 0; split <= rc.circuit.depth(); ++split) {
        o.split_cycle = split;
        values.push_back(compute_amplitude(rc.circuit, rc.in, rc.out, o).amplitude);
    }
    for (const Complex& v : values) EXPECT_LT(std::abs(v - values[0]), 1e-10);
}

TEST(amplitude, bad_bitstrings_are_rejected) {
    const Circuit c = identity_circuit(2, 2);
    EXPECT_THROW(compute_amplitude(c, "010", "0101"), std::invalid_argument);
    EXPECT_THROW(compute_amplitude(c, "0102", "0101"), std::invalid_argument);
}
