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

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tnsim/circuit.hpp"
#include "tnsim/tensor.hpp"

namespace tnsim {

struct EvolutionStats {
    std::size_t two_qubit_gates = 0;
    /// Gates whose two qubits had only bond-1 edges beforehand.
    std::size_t fresh_pair_gates = 0;
    /// Fresh-pair gates that left a bond above 2. apply_gate counts the
    /// violation and then throws std::logic_error.
    std::size_t fresh_pair_violations = 0;
    std::size_t max_bond = 1;
};

/// Tensor network state on a qubit graph. Node q holds a tensor with axes
/// (physical, one auxiliary axis per incident edge in ascending edge id);
/// auxiliary axes are labelled by edge id.
class TnsState {
   public:
    /// Product state |bits>, every bond of dimension 1.
    TnsState(CircuitGraph graph, std::string_view bits) : graph_(std::move(graph)) {
        const auto values = parse_bitstring(bits, graph_.num_qubits());
        nodes_.reserve(values.size());
        for (int q = 0; q < graph_.num_qubits(); ++q) {
            std::vector<std::size_t> dims(1 + graph_.incident_edges(q).size(), 1);
            dims[0] = 2;
            std::vector<AxisLabel> labels{kPhysicalAxis};
            for (int e : graph_.incident_edges(q)) labels.push_back(e);
            Tensor t(std::move(dims));
            t.data()[static_cast<std::size_t>(values[static_cast<std::size_t>(q)])] = 1.0;
            t.set_labels(std::move(labels));
            nodes_.push_back(std::move(t));
        }
        bonds_.assign(graph_.num_edges(), 1);
    }

    const CircuitGraph& graph() const { return graph_; }
    int num_qubits() const { return graph_.num_qubits(); }
    const Tensor& node(int q) const { return nodes_.at(static_cast<std::size_t>(q)); }
    const std::vector<std::size_t>& bond_dims() const { return bonds_; }
    std::size_t bond_dim(int edge_id) const { return bonds_.at(static_cast<std::size_t>(edge_id)); }
    std::size_t bond_dim(int a, int b) const { return bond_dim(require_edge(a, b)); }
    const EvolutionStats& stats() const { return stats_; }

    std::size_t max_bond() const {
        return bonds_.empty() ? 1 : *std::max_element(bonds_.begin(), bonds_.end());
    }

    /// True when every edge at q has bond dimension 1.
    bool has_unit_bonds(int q) const {
        for (int e : graph_.incident_edges(q)) {
            if (bonds_[static_cast<std::size_t>(e)] != 1) return false;
        }
        return true;
    }

    void apply_single(int q, const Matrix2& m) {
        Tensor gate({2, 2}, {m.begin(), m.end()});
        Tensor& a = nodes_.at(static_cast<std::size_t>(q));
        Tensor r = contract_pair(gate, a.with_labels({}), {{1, 0}});
        r.set_labels(a.labels());
        a = std::move(r);
    }

    /// Contracts P into node k and Q into node l, folding the gate index into
    /// their shared bond, then (optionally) compresses that bond.
    void apply_gate(const SplitGate& split, int k, int l, bool compress = true,
                    double tolerance = kDefaultSvdTolerance) {
        const int e = require_edge(k, l);
        if (split.p.rank() != 3 || split.q.rank() != 3 || split.p.dim(2) != split.rank ||
            split.q.dim(2) != split.rank) {
            throw std::invalid_argument("split gate factors do not match their rank");
        }
        const bool fresh_pair = has_unit_bonds(k) && has_unit_bonds(l);

        auto& ak = nodes_[static_cast<std::size_t>(k)];
        auto& al = nodes_[static_cast<std::size_t>(l)];
        ak = absorb_factor(ak, split.p, e);
        al = absorb_factor(al, split.q, e);
        bonds_[static_cast<std::size_t>(e)] *= split.rank;
        ++stats_.two_qubit_gates;

        if (compress) {
            compress_edge(k, l, tolerance);
            if (fresh_pair) {
                ++stats_.fresh_pair_gates;
                if (bonds_[static_cast<std::size_t>(e)] > 2) {
                    ++stats_.fresh_pair_violations;
                    throw std::logic_error("bond on fresh pair (" + std::to_string(k) + "," + std::to_string(l) +
                                           ") exceeds 2 after compression");
                }
            }
        }
        stats_.max_bond = std::max(stats_.max_bond, max_bond());
    }

    /// SVD of the lower-index endpoint as (other axes) x (bond); U stays,
    /// S*V moves into the partner. Drops singular values below tolerance.
    void compress_edge(int a, int b, double tolerance = kDefaultSvdTolerance) {
        const int e = require_edge(a, b);
        const int anchor = std::min(a, b), partner = std::max(a, b);
        Tensor& ta = nodes_[static_cast<std::size_t>(anchor)];
        Tensor& tb = nodes_[static_cast<std::size_t>(partner)];

        const std::size_t pa = ta.axis_of(e);
        std::vector<std::size_t> rows;
        for (std::size_t ax = 0; ax < ta.rank(); ++ax) {
            if (ax != pa) rows.push_back(ax);
        }
        SvdResult svd = svd_factorize(ta, rows, tolerance);
        const std::size_t r = svd.kept_rank;

        // U is (rows..., r); move r back to the bond position.
        std::vector<std::size_t> perm_u;
        for (std::size_t ax = 0; ax < ta.rank(); ++ax) {
            if (ax < pa) perm_u.push_back(ax);
            else if (ax == pa) perm_u.push_back(ta.rank() - 1);
            else perm_u.push_back(ax - 1);
        }
        Tensor new_a = svd.u.permuted(perm_u);
        new_a.set_labels(ta.labels());

        Tensor sv = svd.v;
        const std::size_t old_bond = sv.dim(1);
        for (std::size_t s = 0; s < r; ++s) {
            for (std::size_t j = 0; j < old_bond; ++j) sv.data()[s * old_bond + j] *= svd.singular_values[s];
        }
        const std::size_t pb = tb.axis_of(e);
        Tensor absorbed = contract_pair(tb.with_labels({}), sv, {{pb, 1}});
        std::vector<std::size_t> perm_b;
        for (std::size_t ax = 0; ax < tb.rank(); ++ax) {
            if (ax < pb) perm_b.push_back(ax);
            else if (ax == pb) perm_b.push_back(tb.rank() - 1);
            else perm_b.push_back(ax - 1);
        }
        Tensor new_b = absorbed.permuted(perm_b);
        new_b.set_labels(tb.labels());

        ta = std::move(new_a);
        tb = std::move(new_b);
        bonds_[static_cast<std::size_t>(e)] = r;
    }

    /// Throws std::logic_error if any bond disagrees with its tensor axes.
    void check_invariants() const {
        for (int q = 0; q < num_qubits(); ++q) {
            const Tensor& t = node(q);
            if (t.rank() != 1 + graph_.incident_edges(q).size() || t.dim(0) != 2) {
                throw std::logic_error("node " + std::to_string(q) + " has the wrong shape");
            }
            for (int e : graph_.incident_edges(q)) {
                if (t.dim(t.axis_of(e)) != bond_dim(e)) {
                    throw std::logic_error("bond " + std::to_string(e) + " disagrees with node " + std::to_string(q));
                }
            }
        }
    }

   private:
    int require_edge(int a, int b) const {
        auto e = graph_.edge_id(a, b);
        if (!e) {
            throw std::invalid_argument("(" + std::to_string(a) + "," + std::to_string(b) + ") is not a graph edge");
        }
        return *e;
    }

    /// factor is (s', s, chi); node is (s, aux...). The bond axis grows to
    /// bond * chi with the gate index as the fast-moving part.
    static Tensor absorb_factor(const Tensor& node, const Tensor& factor, int edge) {
        const std::size_t b = node.axis_of(edge);
        const std::size_t n = node.rank() - 1;  // auxiliary axes
        Tensor r = contract_pair(factor, node.with_labels({}), {{1, 0}});
        // r axes: 0 = s', 1 = chi, j + 1 = node axis j for j >= 1.
        std::vector<std::size_t> perm{0};
        for (std::size_t j = 1; j <= n; ++j) {
            perm.push_back(j + 1);
            if (j == b) perm.push_back(1);
        }
        std::vector<std::size_t> dims = node.dims();
        dims[b] *= factor.dim(2);
        Tensor merged = r.permuted(perm).reshaped(std::move(dims));
        merged.set_labels(node.labels());
        return merged;
    }

    CircuitGraph graph_;
    std::vector<Tensor> nodes_;
    std::vector<std::size_t> bonds_;
    EvolutionStats stats_;
};

inline TnsState init_state(const CircuitGraph& graph, std::string_view bits) {
    return TnsState(graph, bits);
}

enum class Direction { Forward, Inverse };

/// One step of a circuit in time order.
struct CircuitOp {
    bool two_qubit = false;
    int k = 0;
    int l = 0;
    Matrix4 matrix4{};
    Matrix2 matrix2{};
};

/// Operations of cycles [begin, end) with the single-qubit gates that precede
/// each cycle. `include_final` appends the gates after the last cycle.
inline std::vector<CircuitOp> circuit_ops(const Circuit& c, int begin, int end, bool include_final) {
    if (begin < 0 || end > c.depth() || begin > end) {
        throw std::invalid_argument("cycle range [" + std::to_string(begin) + "," + std::to_string(end) +
                                    ") outside circuit depth " + std::to_string(c.depth()));
    }
    std::vector<CircuitOp> ops;
    auto singles = [&](int moment) {
        for (const auto& s : c.single_qubit_gates) {
            if (s.moment == moment) ops.push_back({false, s.qubit, 0, {}, s.matrix});
        }
    };
    for (int m = begin; m < end; ++m) {
        singles(m);
        for (const auto& g : c.cycles[static_cast<std::size_t>(m)]) ops.push_back({true, g.k, g.l, g.matrix, {}});
    }
    if (include_final) {
        singles(c.depth());
        for (const auto& [q, m] : c.trailing) ops.push_back({false, q, 0, {}, m});
    }
    return ops;
}

/// Forward applies the ops in order; Inverse applies their adjoints in
/// reverse, so that the result is U^dagger |state>.
inline void evolve(TnsState& state, const Circuit& c, int begin, int end, Direction dir, bool include_final,
                   double tolerance = kDefaultSvdTolerance) {
    auto ops = circuit_ops(c, begin, end, include_final);
    if (dir == Direction::Inverse) std::reverse(ops.begin(), ops.end());
    for (const auto& op : ops) {
        if (op.two_qubit) {
            const Matrix4 m = dir == Direction::Forward ? op.matrix4 : dagger(op.matrix4);
            state.apply_gate(gate_split(m, tolerance), op.k, op.l, true, tolerance);
        } else {
            state.apply_single(op.k, dir == Direction::Forward ? op.matrix2 : dagger(op.matrix2));
        }
    }
}

inline void evolve(TnsState& state, const Circuit& c, int begin, int end, Direction dir,
                   double tolerance = kDefaultSvdTolerance) {
    evolve(state, c, begin, end, dir, end == c.depth(), tolerance);
}

struct TwoSidedStates {
    TnsState phi;  ///< cycles [0, split) applied to |in>
    TnsState psi;  ///< cycles [split, d) applied inversely to |out>
};

inline int default_split_cycle(const Circuit& c) { return c.depth() / 2; }

inline TwoSidedStates two_sided_evolve(const Circuit& c, std::string_view in_bits, std::string_view out_bits,
                                       int split_cycle, double tolerance = kDefaultSvdTolerance) {
    if (split_cycle < 0 || split_cycle > c.depth()) {
        throw std::invalid_argument("split cycle " + std::to_string(split_cycle) + " outside [0, " +
                                    std::to_string(c.depth()) + "]");
    }
    TwoSidedStates out{TnsState(c.graph, in_bits), TnsState(c.graph, out_bits)};
    const bool final_on_phi = split_cycle == c.depth();
    evolve(out.phi, c, 0, split_cycle, Direction::Forward, final_on_phi, tolerance);
    evolve(out.psi, c, split_cycle, c.depth(), Direction::Inverse, !final_on_phi, tolerance);
    return out;
}

}  // namespace tnsim
