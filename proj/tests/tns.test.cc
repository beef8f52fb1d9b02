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

#include "tnsim/tns.hpp"

#include <random>

#include "gtest/gtest.h"

#include "support/test_util.hpp"
#include "tnsim/oracle.hpp"

using namespace tnsim;
using tnsim::testing::naive_state;

static double state_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

TEST(tns, product_state) {
    const CircuitGraph g = generate_lattice(LatticeKind::Square, 2, 2);
    const TnsState s(g, "0110");
    EXPECT_EQ(s.max_bond(), 1u);
    EXPECT_NO_THROW(s.check_invariants());
    const auto amps = naive_state(s);
    for (std::size_t i = 0; i < amps.size(); ++i) EXPECT_EQ(amps[i], Complex(i == oracle::basis_index("0110", 4) ? 1 : 0));
    EXPECT_THROW(TnsState(g, "011"), std::invalid_argument);
}

TEST(tns, gate_on_non_edge_is_rejected) {
    const CircuitGraph g = generate_lattice(LatticeKind::Square, 2, 2);
    TnsState s(g, "0000");
    EXPECT_THROW(s.apply_gate(gate_split(gates::cz()), 0, 3), std::invalid_argument);
}

TEST(tns, single_gate_examples) {
    const CircuitGraph g(2, {{0, 1}});
    TnsState s(g, "00");
    s.apply_single(0, gates::hadamard());
    s.apply_single(1, gates::hadamard());
    s.apply_gate(gate_split(gates::cz()), 0, 1);
    EXPECT_EQ(s.bond_dim(0, 1), 2u);
    const auto amps = naive_state(s);
    EXPECT_NEAR(amps[3].real(), -0.5, 1e-14);

    TnsState t(g, "01");
    t.apply_gate(gate_split(gates::iswap()), 0, 1);
    // |01> goes to i|10>. The one-sided SVD sees node 0 as a 2 x 4 matrix.
    EXPECT_LE(t.bond_dim(0, 1), 2u);
    EXPECT_NEAR(naive_state(t)[1].imag(), 1.0, 1e-14);
}

TEST(tns, random_gates_match_oracle) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        auto rc = tnsim::testing::random_case(rng, 4, 6, 1, 4);
        const Circuit fused = fuse_single_qubit_gates(rc.circuit);
        TnsState s(fused.graph, rc.in);
        evolve(s, fused, 0, fused.depth(), Direction::Forward);
        s.check_invariants();
        EXPECT_LT(state_distance(naive_state(s), oracle::full_state_evolve(rc.circuit, rc.in).amplitudes()), 1e-10);
        EXPECT_EQ(s.stats().fresh_pair_violations, 0u);
    }
}

TEST(tns, compression_keeps_the_state) {
    std::mt19937_64 rng(13);
    auto rc = tnsim::testing::random_case(rng, 4, 6, 3, 3);
    const Circuit fused = fuse_single_qubit_gates(rc.circuit);
    TnsState s(fused.graph, rc.in);
    evolve(s, fused, 0, fused.depth(), Direction::Forward);
    const auto before = naive_state(s);
    for (auto [a, b] : s.graph().edges()) s.compress_edge(a, b);
    EXPECT_LT(state_distance(before, naive_state(s)), 1e-12);
}

TEST(tns, uncompressed_bond_multiplies_by_gate_rank) {
    const CircuitGraph g(2, {{0, 1}});
    TnsState s(g, "00");
    s.apply_gate(gate_split(gates::fsim(0.5, 0.3)), 0, 1, false);
    EXPECT_EQ(s.bond_dim(0, 1), 4u);
    s.apply_gate(gate_split(gates::cz()), 0, 1, false);
    EXPECT_EQ(s.bond_dim(0, 1), 8u);
    s.compress_edge(0, 1);
    EXPECT_LE(s.bond_dim(0, 1), 2u);
}

TEST(tns, fresh_pair_bond_is_at_most_two) {
    const CircuitGraph g = generate_lattice(LatticeKind::SycamoreLike, 3, 3);
    std::mt19937_64 rng(14);
    for (const Matrix4& m : {gates::cz(), gates::iswap(), gates::fsim(1.2, 0.4)}) {
        for (auto [a, b] : g.edges()) {
            TnsState s(g, tnsim::testing::random_bits(rng, 9));
            s.apply_single(a, gates::sqrt_w());
            s.apply_single(b, gates::hadamard());
            s.apply_gate(gate_split(m), a, b);
            EXPECT_LE(s.bond_dim(a, b), 2u);
            EXPECT_EQ(s.stats().fresh_pair_gates, 1u);
        }
    }
}

TEST(tns, inverse_evolution_undoes_forward) {
    std::mt19937_64 rng(15);
    auto rc = tnsim::testing::random_case(rng, 4, 6, 2, 4);
    const Circuit fused = fuse_single_qubit_gates(rc.circuit);
    TnsState s(fused.graph, rc.in);
    evolve(s, fused, 0, fused.depth(), Direction::Forward);
    evolve(s, fused, 0, fused.depth(), Direction::Inverse);
    const auto amps = naive_state(s);
    EXPECT_NEAR(std::abs(amps[oracle::basis_index(rc.in, fused.num_qubits())]), 1.0, 1e-10);
}

TEST(tns, circuit_ops_order) {
    Circuit c;
    c.graph = CircuitGraph(2, {{0, 1}});
    c.cycles = {{make_gate(0, 1, GateKind::CZ)}, {make_gate(0, 1, GateKind::ISwap)}};
    for (int m = 0; m < 3; ++m) c.single_qubit_gates.push_back({0, m, gates::hadamard()});
    const auto all = circuit_ops(c, 0, 2, true);
    ASSERT_EQ(all.size(), 5u);
    EXPECT_FALSE(all[0].two_qubit);
    EXPECT_TRUE(all[1].two_qubit);
    EXPECT_FALSE(all[4].two_qubit);
    EXPECT_EQ(circuit_ops(c, 1, 2, false).size(), 2u);
    EXPECT_THROW(circuit_ops(c, 1, 3, false), std::invalid_argument);
}

TEST(tns, two_sided_split_range) {
    Circuit c;
    c.graph = CircuitGraph(2, {{0, 1}});
    c.cycles = {{make_gate(0, 1, GateKind::CZ)}};
    EXPECT_THROW(two_sided_evolve(c, "00", "00", 2), std::invalid_argument);
    EXPECT_THROW(two_sided_evolve(c, "00", "00", -1), std::invalid_argument);
    EXPECT_EQ(default_split_cycle(c), 0);
}
