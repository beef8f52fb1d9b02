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

#pragma once

// Test-side oracles. Nothing here calls contract_pair, the path search or the
// state vector simulator, so a bug in those cannot hide behind its own oracle.

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tnsim/tnsim.hpp"

namespace tnsim::testing {

inline std::string random_bits(std::mt19937_64& rng, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (auto& ch : s) ch = static_cast<char>('0' + static_cast<int>(rng() % 2));
    return s;
}

inline Complex random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    return {dist(rng), dist(rng)};
}

/// Walks every assignment of a list of extents, last digit fastest.
class Odometer {
   public:
    explicit Odometer(std::vector<std::size_t> extents) : extents_(std::move(extents)), digits_(extents_.size(), 0) {}
    const std::vector<std::size_t>& digits() const { return digits_; }
    bool next() {
        for (std::size_t i = digits_.size(); i-- > 0;) {
            if (++digits_[i] < extents_[i]) return true;
            digits_[i] = 0;
        }
        return false;
    }

   private:
    std::vector<std::size_t> extents_;
    std::vector<std::size_t> digits_;
};

/// Direct sum over every joint edge assignment of the product of node entries.
inline Complex naive_contract(const TensorNetwork& net) {
    std::vector<int> ids;
    std::vector<std::size_t> extents;
    for (const auto& [id, e] : net.edges) {
        ids.push_back(id);
        extents.push_back(e.extent);
    }
    Complex total = 0.0;
    Odometer od(extents);
    do {
        Complex term = 1.0;
        for (const auto& t : net.nodes) {
            std::size_t offset = 0;
            for (std::size_t ax = 0; ax < t.rank(); ++ax) {
                const auto pos = std::find(ids.begin(), ids.end(), static_cast<int>(t.labels()[ax])) - ids.begin();
                offset = offset * t.dim(ax) + od.digits()[static_cast<std::size_t>(pos)];
            }
            term *= t.data()[offset];
        }
        total += term;
    } while (od.next());
    return total;
}

/// Random closed network: a spanning tree plus extra edges, Gaussian entries.
inline TensorNetwork random_network(std::mt19937_64& rng, int n, int extra_edges, std::vector<std::size_t> extent_choices) {
    std::vector<std::pair<int, int>> pairs;
    for (int v = 1; v < n; ++v) pairs.emplace_back(static_cast<int>(rng() % static_cast<std::uint64_t>(v)), v);
    for (int i = 0; i < extra_edges && n > 2; ++i) {
        int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end() ||
            std::find(pairs.begin(), pairs.end(), std::make_pair(b, a)) != pairs.end()) {
            continue;
        }
        pairs.emplace_back(a, b);
    }
    TensorNetwork net;
    std::vector<std::vector<std::size_t>> dims(static_cast<std::size_t>(n));
    std::vector<std::vector<AxisLabel>> labels(static_cast<std::size_t>(n));
    for (std::size_t id = 0; id < pairs.size(); ++id) {
        const std::size_t extent = extent_choices[rng() % extent_choices.size()];
        auto [a, b] = pairs[id];
        net.edges[static_cast<int>(id)] = {a, b, extent};
        for (int v : {a, b}) {
            dims[static_cast<std::size_t>(v)].push_back(extent);
            labels[static_cast<std::size_t>(v)].push_back(static_cast<AxisLabel>(id));
        }
    }
    for (int v = 0; v < n; ++v) {
        Tensor t(dims[static_cast<std::size_t>(v)]);
        for (auto& x : t.data()) x = random_complex(rng);
        t.set_labels(labels[static_cast<std::size_t>(v)]);
        net.nodes.push_back(std::move(t));
    }
    return net;
}

/// Random connected shape with the given extent choices.
inline path::NetworkShape random_shape(std::mt19937_64& rng, int n, double extra_edge_prob,
                                       std::vector<std::uint64_t> extents) {
    std::vector<path::ShapeEdge> edges;
    std::vector<std::vector<bool>> has(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    auto add = [&](int a, int b) {
        if (a == b || has[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) return;
        has[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = has[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
        edges.push_back({a, b, extents[rng() % extents.size()]});
    };
    for (int v = 1; v < n; ++v) add(static_cast<int>(rng() % static_cast<std::uint64_t>(v)), v);
    std::uniform_real_distribution<double> u;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (u(rng) < extra_edge_prob) add(a, b);
        }
    }
    return path::NetworkShape(n, std::move(edges));
}

inline path::NetworkShape grid_shape(int rows, int cols, std::uint64_t extent) {
    const CircuitGraph g = generate_lattice(LatticeKind::Square, rows, cols);
    std::vector<path::ShapeEdge> edges;
    for (auto [a, b] : g.edges()) edges.push_back({a, b, extent});
    return path::NetworkShape(g.num_qubits(), std::move(edges));
}

/// All amplitudes of a tensor network state, by summing every bond assignment.
/// Index convention matches the oracle: qubit 0 is the least significant bit.
inline std::vector<Complex> naive_state(const TnsState& s) {
    const CircuitGraph& g = s.graph();
    const int n = g.num_qubits();
    std::vector<std::size_t> extents(s.bond_dims().begin(), s.bond_dims().end());
    std::vector<Complex> out(std::size_t{1} << n);
    Odometer bonds(extents);
    do {
        for (std::uint64_t basis = 0; basis < out.size(); ++basis) {
            Complex term = 1.0;
            for (int q = 0; q < n && term != Complex{0.0}; ++q) {
                const Tensor& t = s.node(q);
                std::size_t offset = (basis >> q) & 1U;
                for (std::size_t ax = 1; ax < t.rank(); ++ax) {
                    offset = offset * t.dim(ax) + bonds.digits()[static_cast<std::size_t>(t.labels()[ax])];
                }
                term *= t.data()[offset];
            }
            out[basis] += term;
        }
    } while (bonds.next());
    return out;
}

/// Random circuit drawn from the acceptance corpus distribution.
struct RandomCase {
    Circuit circuit;
    std::string in;
    std::string out;
};

inline RandomCase random_case(std::mt19937_64& rng, int min_qubits, int max_qubits, int min_depth, int max_depth) {
    static const GateKind kinds[] = {GateKind::CZ, GateKind::ISwap, GateKind::FSim};
    CircuitGraph g;
    while (true) {
        const bool sycamore = rng() % 2 == 1;
        const int rows = 2 + static_cast<int>(rng() % 3);
        const int cols = 2 + static_cast<int>(rng() % 5);
        if (rows * cols < min_qubits || rows * cols > max_qubits) continue;
        g = generate_lattice(sycamore ? LatticeKind::SycamoreLike : LatticeKind::Square, rows, cols);
        break;
    }
    RqcOptions opt;
    opt.depth = min_depth + static_cast<int>(rng() % static_cast<std::uint64_t>(max_depth - min_depth + 1));
    opt.seed = rng();
    opt.gate = kinds[rng() % 3];
    if (opt.gate == GateKind::FSim && rng() % 2 == 0) {
        std::uniform_real_distribution<double> angle(0.1, 3.0);
        opt.fsim_theta = angle(rng);
        opt.fsim_phi = angle(rng);
    }
    RandomCase c{generate_rqc(g, opt), "", ""};
    c.in = random_bits(rng, g.num_qubits());
    c.out = random_bits(rng, g.num_qubits());
    return c;
}

}  // namespace tnsim::testing
