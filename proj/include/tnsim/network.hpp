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
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tnsim/path_search.hpp"
#include "tnsim/tensor.hpp"
#include "tnsim/tns.hpp"

namespace tnsim {

/// Edge of a closed network. Both endpoint tensors carry an axis labelled
/// with the edge id.
struct NetworkEdge {
    int a = 0;
    int b = 0;
    std::size_t extent = 1;
};

struct TensorNetwork {
    std::vector<Tensor> nodes;
    std::map<int, NetworkEdge> edges;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
};

class NetworkError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Throws NetworkError unless every axis is matched to exactly one partner.
inline void check_network(const TensorNetwork& net) {
    const int n = net.num_nodes();
    std::vector<std::size_t> matched(static_cast<std::size_t>(n), 0);
    for (const auto& [id, e] : net.edges) {
        const std::string name = "edge " + std::to_string(id);
        if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n || e.a == e.b) throw NetworkError(name + " has invalid endpoints");
        for (int v : {e.a, e.b}) {
            const auto ax = net.nodes[static_cast<std::size_t>(v)].find_axis(id);
            if (!ax) throw NetworkError(name + " has no axis on node " + std::to_string(v));
            if (net.nodes[static_cast<std::size_t>(v)].dim(*ax) != e.extent) {
                throw NetworkError(name + " extent disagrees with node " + std::to_string(v));
            }
            ++matched[static_cast<std::size_t>(v)];
        }
    }
    for (int v = 0; v < n; ++v) {
        const Tensor& t = net.nodes[static_cast<std::size_t>(v)];
        if (!t.labeled()) throw NetworkError("node " + std::to_string(v) + " has unlabelled axes");
        if (matched[static_cast<std::size_t>(v)] != t.rank()) {
            throw NetworkError("node " + std::to_string(v) + " has an axis without a partner");
        }
    }
}

/// Closed network for <psi|phi>. Each node sums its physical index against
/// the conjugated psi node; the phi and psi bonds along one graph edge merge
/// into a single axis with index i_phi * bond_psi + i_psi.
inline TensorNetwork build_overlap_network(const TnsState& phi, const TnsState& psi) {
    if (!(phi.graph() == psi.graph())) throw std::invalid_argument("overlap of states on different graphs");
    const CircuitGraph& g = phi.graph();
    TensorNetwork net;
    for (int q = 0; q < g.num_qubits(); ++q) {
        const Tensor& a = phi.node(q);
        const Tensor b = psi.node(q).conj();
        Tensor c = contract_pair(a.with_labels({}), b.with_labels({}), {{0, 0}});
        const auto& inc = g.incident_edges(q);
        const std::size_t m = inc.size();
        // c axes: phi bonds 0..m-1, then psi bonds m..2m-1, in node label order.
        std::vector<std::size_t> perm, dims;
        std::vector<AxisLabel> labels;
        for (std::size_t j = 0; j < m; ++j) {
            perm.push_back(j);
            perm.push_back(m + j);
            dims.push_back(c.dim(j) * c.dim(m + j));
            labels.push_back(a.labels()[j + 1]);
        }
        Tensor merged = c.permuted(perm).reshaped(std::move(dims));
        merged.set_labels(std::move(labels));
        net.nodes.push_back(std::move(merged));
    }
    for (int id = 0; id < static_cast<int>(g.num_edges()); ++id) {
        auto [a, b] = g.edges()[static_cast<std::size_t>(id)];
        net.edges[id] = {a, b, phi.bond_dim(id) * psi.bond_dim(id)};
    }
    check_network(net);
    return net;
}

/// Symbolic view used by the path search.
inline path::NetworkShape shape_of(const TensorNetwork& net) {
    std::vector<path::ShapeEdge> edges;
    for (const auto& [id, e] : net.edges) edges.push_back({e.a, e.b, e.extent});
    return path::NetworkShape(net.num_nodes(), std::move(edges));
}

struct CutPlan {
    std::vector<int> cut_edges;
    std::uint64_t slice_count = 1;
};

inline CutPlan make_cut_plan(const TensorNetwork& net, std::vector<int> cut_edges) {
    CutPlan plan;
    for (std::size_t i = 0; i < cut_edges.size(); ++i) {
        const int id = cut_edges[i];
        if (!net.edges.contains(id)) throw std::invalid_argument("cut edge " + std::to_string(id) + " is not in the network");
        if (std::find(cut_edges.begin(), cut_edges.begin() + static_cast<std::ptrdiff_t>(i), id) !=
            cut_edges.begin() + static_cast<std::ptrdiff_t>(i)) {
            throw std::invalid_argument("cut edge " + std::to_string(id) + " listed twice");
        }
        const Score count = checked_mul(plan.slice_count, net.edges.at(id).extent);
        if (count > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("slice count exceeds 64 bits");
        plan.slice_count = static_cast<std::uint64_t>(count);
    }
    plan.cut_edges = std::move(cut_edges);
    return plan;
}

/// Fixed index value per cut edge; the first cut is the most significant digit.
inline std::vector<std::size_t> decode_slice(const TensorNetwork& net, const CutPlan& plan, std::uint64_t slice_index) {
    if (slice_index >= plan.slice_count) {
        throw std::out_of_range("slice " + std::to_string(slice_index) + " outside [0, " +
                                std::to_string(plan.slice_count) + ")");
    }
    std::vector<std::size_t> values(plan.cut_edges.size());
    for (std::size_t i = plan.cut_edges.size(); i-- > 0;) {
        const std::size_t extent = net.edges.at(plan.cut_edges[i]).extent;
        values[i] = static_cast<std::size_t>(slice_index % extent);
        slice_index /= extent;
    }
    return values;
}

inline TensorNetwork slice_network(const TensorNetwork& net, const CutPlan& plan, std::uint64_t slice_index) {
    const auto values = decode_slice(net, plan, slice_index);
    TensorNetwork out = net;
    for (std::size_t i = 0; i < plan.cut_edges.size(); ++i) {
        const int id = plan.cut_edges[i];
        const NetworkEdge e = out.edges.at(id);
        for (int v : {e.a, e.b}) {
            Tensor& t = out.nodes[static_cast<std::size_t>(v)];
            t = t.sliced(t.axis_of(id), values[i]);
        }
        out.edges.erase(id);
    }
    return out;
}

struct ContractionStats {
    std::size_t peak_rank = 0;
    Score multiplies = 0;
};

/// Absorbs the nodes one at a time in path order.
inline Complex contract_along_path(const TensorNetwork& net, std::span<const int> path,
                                   ContractionStats* stats = nullptr) {
    const int n = net.num_nodes();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    if (path.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("path is not a permutation of the nodes");
    for (int v : path) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
            throw std::invalid_argument("path is not a permutation of the nodes");
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
    ContractionStats local;
    Tensor acc = net.nodes[static_cast<std::size_t>(path[0])];
    local.peak_rank = acc.rank();
    for (std::size_t i = 1; i < path.size(); ++i) {
        const Tensor& next = net.nodes[static_cast<std::size_t>(path[i])];
        const auto pairs = shared_label_pairs(acc, next);
        local.multiplies = checked_add(local.multiplies, contraction_cost(acc.dims(), next.dims(), pairs));
        acc = contract_pair(acc, next, pairs);
        local.peak_rank = std::max(local.peak_rank, acc.rank());
    }
    if (acc.rank() != 0) throw NetworkError("network is not closed");
    if (stats) *stats = local;
    return acc.data()[0];
}

/// Raised when no plan within the cut budget brings one slice under the cap.
class CapUnachievable : public std::runtime_error {
   public:
    CapUnachievable(const std::string& what, CutPlan best) : std::runtime_error(what), best_plan(std::move(best)) {}
    CutPlan best_plan;
};

struct CutOptions {
    std::size_t max_cuts = 24;
    std::size_t max_states = std::size_t{1} << 20;
};

namespace detail {

inline path::NetworkShape shape_without(const TensorNetwork& net, const std::vector<int>& removed) {
    std::vector<path::ShapeEdge> edges;
    for (const auto& [id, e] : net.edges) {
        if (std::find(removed.begin(), removed.end(), id) == removed.end()) edges.push_back({e.a, e.b, e.extent});
    }
    return path::NetworkShape(net.num_nodes(), std::move(edges));
}

/// Peak rank of the best path under the cap, or nullopt if none was found.
inline std::optional<std::size_t> fits_cap(const path::NetworkShape& shape, std::size_t cap, std::size_t max_states) {
    if (shape.max_rank() > cap) return std::nullopt;
    path::SearchOptions opt;
    opt.max_rank = cap;
    opt.max_states = max_states;
    try {
        return path::find_optimal_path(shape, opt).peak_rank;
    } catch (const path::SearchExhausted&) {
        return std::nullopt;
    } catch (const path::SearchBudgetExceeded&) {
        return std::nullopt;
    }
}

struct Separator {
    std::vector<int> edges;
    std::size_t imbalance = 0;
    std::size_t layer = 0;
};

/// Edge sets crossing breadth-first layer boundaries from a peripheral node,
/// thinnest first.
inline std::vector<Separator> layer_separators(const TensorNetwork& net) {
    const auto n = static_cast<std::size_t>(net.num_nodes());
    std::vector<std::vector<int>> adj(n);
    for (const auto& [id, e] : net.edges) {
        adj[static_cast<std::size_t>(e.a)].push_back(e.b);
        adj[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    auto bfs = [&](int src) {
        std::vector<int> dist(n, -1);
        std::deque<int> queue{src};
        dist[static_cast<std::size_t>(src)] = 0;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : adj[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
        return dist;
    };
    // Two sweeps give an approximately peripheral start node.
    auto far = [&](const std::vector<int>& dist) {
        return static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
    };
    const auto dist = bfs(far(bfs(far(bfs(0)))));
    const int depth = *std::max_element(dist.begin(), dist.end());

    std::vector<Separator> out;
    for (int layer = 0; layer < depth; ++layer) {
        Separator s;
        s.layer = static_cast<std::size_t>(layer);
        std::size_t inside = 0;
        for (std::size_t v = 0; v < n; ++v) inside += dist[v] >= 0 && dist[v] <= layer;
        const std::size_t outside = n - inside;
        s.imbalance = inside > outside ? inside - outside : outside - inside;
        for (const auto& [id, e] : net.edges) {
            const bool a_in = dist[static_cast<std::size_t>(e.a)] <= layer;
            const bool b_in = dist[static_cast<std::size_t>(e.b)] <= layer;
            if (a_in != b_in) s.edges.push_back(id);
        }
        const bool balanced = 4 * inside >= n && 4 * outside >= n;
        if (balanced || n < 8) out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const Separator& x, const Separator& y) {
        if (x.edges.size() != y.edges.size()) return x.edges.size() < y.edges.size();
        if (x.imbalance != y.imbalance) return x.imbalance < y.imbalance;
        return x.layer < y.layer;
    });
    return out;
}

}  // namespace detail

/// Explicit edge list, returned as given after validation.
inline CutPlan plan_cuts(const TensorNetwork& net, const std::vector<int>& explicit_edges) {
    return make_cut_plan(net, explicit_edges);
}

/// Adds edges from the thinnest layer separators one at a time until a single
/// slice admits a contraction path under `target_max_rank`.
inline CutPlan plan_cuts(const TensorNetwork& net, std::size_t target_max_rank, const CutOptions& opt = {}) {
    check_network(net);
    std::vector<int> cuts;
    if (detail::fits_cap(detail::shape_without(net, cuts), target_max_rank, opt.max_states)) {
        return make_cut_plan(net, cuts);
    }
    for (const auto& sep : detail::layer_separators(net)) {
        for (int id : sep.edges) {
            if (std::find(cuts.begin(), cuts.end(), id) != cuts.end()) continue;
            if (cuts.size() >= opt.max_cuts) break;
            cuts.push_back(id);
            if (detail::fits_cap(detail::shape_without(net, cuts), target_max_rank, opt.max_states)) {
                return make_cut_plan(net, cuts);
            }
        }
    }
    throw CapUnachievable("no cut plan with at most " + std::to_string(opt.max_cuts) +
                              " edges brings a slice under rank cap " + std::to_string(target_max_rank),
                          make_cut_plan(net, cuts));
}

}  // namespace tnsim
