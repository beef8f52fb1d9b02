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

// Linear contraction-order search. A path absorbs one node at a time into a
// growing intermediate; its score is the summed multiply count. The search is
// best-first over partial paths, finalizing each node subset at most once:
// the cost of absorbing a node depends only on the subset already absorbed,
// so the cheapest path into a subset extends to the cheapest path overall.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tnsim/score.hpp"

namespace tnsim::path {

struct ShapeEdge {
    int a = 0;
    int b = 0;
    std::uint64_t extent = 1;
};

/// Symbolic network: node count and edge extents, no tensor data.
class NetworkShape {
   public:
    NetworkShape() = default;

    NetworkShape(int num_nodes, std::vector<ShapeEdge> edges) : n_(num_nodes), edges_(std::move(edges)) {
        if (num_nodes < 1) throw std::invalid_argument("network needs at least one node");
        incident_.assign(static_cast<std::size_t>(n_), {});
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            if (e.a < 0 || e.b < 0 || e.a >= n_ || e.b >= n_ || e.a == e.b) {
                throw std::invalid_argument("invalid network edge (" + std::to_string(e.a) + "," +
                                            std::to_string(e.b) + ")");
            }
            if (e.extent < 1) throw std::invalid_argument("edge extent must be >= 1");
            incident_[static_cast<std::size_t>(e.a)].push_back(static_cast<int>(i));
            incident_[static_cast<std::size_t>(e.b)].push_back(static_cast<int>(i));
        }
    }

    int num_nodes() const { return n_; }
    const std::vector<ShapeEdge>& edges() const { return edges_; }
    const ShapeEdge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }
    const std::vector<int>& incident(int v) const { return incident_.at(static_cast<std::size_t>(v)); }
    std::size_t rank(int v) const { return incident(v).size(); }

    int other_end(int edge_id, int v) const {
        const auto& e = edge(edge_id);
        return e.a == v ? e.b : e.a;
    }

    bool adjacent(int a, int b) const {
        for (int e : incident(a)) {
            if (other_end(e, a) == b) return true;
        }
        return false;
    }

    std::size_t max_rank() const {
        std::size_t m = 0;
        for (int v = 0; v < n_; ++v) m = std::max(m, rank(v));
        return m;
    }

    /// Nodes with fewer edges than the maximum; all nodes if the graph is regular.
    std::vector<int> boundary() const {
        const std::size_t m = max_rank();
        std::vector<int> out;
        for (int v = 0; v < n_; ++v) {
            if (rank(v) < m) out.push_back(v);
        }
        if (out.empty()) {
            out.resize(static_cast<std::size_t>(n_));
            std::iota(out.begin(), out.end(), 0);
        }
        return out;
    }

    /// Connected components, each sorted, ordered by smallest member.
    std::vector<std::vector<int>> components() const {
        std::vector<int> comp(static_cast<std::size_t>(n_), -1);
        std::vector<std::vector<int>> out;
        for (int s = 0; s < n_; ++s) {
            if (comp[static_cast<std::size_t>(s)] >= 0) continue;
            std::vector<int> members{s}, stack{s};
            comp[static_cast<std::size_t>(s)] = static_cast<int>(out.size());
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int e : incident(v)) {
                    int w = other_end(e, v);
                    if (comp[static_cast<std::size_t>(w)] < 0) {
                        comp[static_cast<std::size_t>(w)] = static_cast<int>(out.size());
                        members.push_back(w);
                        stack.push_back(w);
                    }
                }
            }
            std::sort(members.begin(), members.end());
            out.push_back(std::move(members));
        }
        return out;
    }

    /// Subnetwork induced by `nodes`, renumbered in the given order.
    NetworkShape induced(std::span<const int> nodes) const {
        std::vector<int> index(static_cast<std::size_t>(n_), -1);
        for (std::size_t i = 0; i < nodes.size(); ++i) index[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
        std::vector<ShapeEdge> edges;
        for (const auto& e : edges_) {
            const int a = index[static_cast<std::size_t>(e.a)], b = index[static_cast<std::size_t>(e.b)];
            if (a >= 0 && b >= 0) edges.push_back({a, b, e.extent});
        }
        return NetworkShape(static_cast<int>(nodes.size()), std::move(edges));
    }

   private:
    int n_ = 0;
    std::vector<ShapeEdge> edges_;
    std::vector<std::vector<int>> incident_;
};

/// Order-free set of node indexes.
class NodeSet {
   public:
    NodeSet() = default;
    explicit NodeSet(int num_nodes) : words_((static_cast<std::size_t>(num_nodes) + 63) / 64, 0) {}

    bool contains(int v) const {
        return (words_[static_cast<std::size_t>(v) / 64] >> (static_cast<unsigned>(v) % 64)) & 1U;
    }
    void insert(int v) { words_[static_cast<std::size_t>(v) / 64] |= std::uint64_t{1} << (static_cast<unsigned>(v) % 64); }

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

    std::size_t hash() const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

   private:
    std::vector<std::uint64_t> words_;
};

struct NodeSetHash {
    std::size_t operator()(const NodeSet& s) const { return s.hash(); }
};

/// Partial path with its accumulated score and connectivity marker:
/// isolated == -1 when the absorbed nodes induce a connected subgraph,
/// otherwise the single node hanging off the connected part.
struct PathState {
    std::vector<int> path;
    Score score = 0;
    int isolated = -1;
    NodeSet members;
};

inline PathState single_node_state(const NetworkShape& net, int v) {
    PathState s;
    s.path = {v};
    s.members = NodeSet(net.num_nodes());
    s.members.insert(v);
    return s;
}

/// Open-axis summary of the intermediate for a node subset.
struct Frontier {
    Score product = 1;  ///< product of open edge extents
    std::size_t rank = 0;
};

inline Frontier frontier_of(const NetworkShape& net, const NodeSet& members) {
    Frontier f;
    for (const auto& e : net.edges()) {
        if (members.contains(e.a) != members.contains(e.b)) {
            f.product = checked_mul(f.product, e.extent);
            ++f.rank;
        }
    }
    return f;
}

struct Absorption {
    Score cost = 0;
    std::size_t new_rank = 0;
    bool touches = false;  ///< next shares at least one edge with the subset
};

inline Absorption absorption(const NetworkShape& net, const NodeSet& members, const Frontier& f, int next) {
    Absorption a;
    Score free_product = 1;
    std::size_t shared = 0, free = 0;
    for (int e : net.incident(next)) {
        if (members.contains(net.other_end(e, next))) {
            ++shared;
        } else {
            free_product = checked_mul(free_product, net.edge(e).extent);
            ++free;
        }
    }
    a.cost = checked_mul(f.product, free_product);
    a.new_rank = f.rank - shared + free;
    a.touches = shared > 0;
    return a;
}

/// Cost of absorbing `next` into the intermediate of `members`.
inline Score score_increment(const NetworkShape& net, const NodeSet& members, int next) {
    if (members.contains(next)) throw std::invalid_argument("node already on the path");
    return absorption(net, members, frontier_of(net, members), next).cost;
}

/// Score of a full or partial path, evaluated step by step.
inline Score path_score(const NetworkShape& net, std::span<const int> path) {
    if (path.empty()) return 0;
    NodeSet members(net.num_nodes());
    members.insert(path[0]);
    Score total = 0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        total = checked_add(total, score_increment(net, members, path[i]));
        members.insert(path[i]);
    }
    return total;
}

/// Largest intermediate rank along a path.
inline std::size_t path_peak_rank(const NetworkShape& net, std::span<const int> path) {
    NodeSet members(net.num_nodes());
    std::size_t peak = 0;
    for (int v : path) {
        members.insert(v);
        peak = std::max(peak, frontier_of(net, members).rank);
    }
    return peak;
}

class InvalidPathError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// -1 if the path's nodes induce a connected subgraph; otherwise the single
/// isolated node. Two lone nodes report the later one.
inline int connectivity(std::span<const int> path, const NetworkShape& net) {
    if (path.empty()) throw InvalidPathError("empty path");
    NodeSet members(net.num_nodes());
    for (int v : path) {
        if (v < 0 || v >= net.num_nodes() || members.contains(v)) throw InvalidPathError("path repeats or leaves the network");
        members.insert(v);
    }
    // Component sizes within the induced subgraph.
    std::vector<int> comp(static_cast<std::size_t>(net.num_nodes()), -1);
    std::vector<std::vector<int>> comps;
    for (int s : path) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        std::vector<int> group{s}, stack{s};
        comp[static_cast<std::size_t>(s)] = static_cast<int>(comps.size());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : net.incident(v)) {
                int w = net.other_end(e, v);
                if (members.contains(w) && comp[static_cast<std::size_t>(w)] < 0) {
                    comp[static_cast<std::size_t>(w)] = static_cast<int>(comps.size());
                    group.push_back(w);
                    stack.push_back(w);
                }
            }
        }
        comps.push_back(std::move(group));
    }
    if (comps.size() == 1) return -1;
    if (comps.size() == 2) {
        const bool first_single = comps[0].size() == 1, second_single = comps[1].size() == 1;
        if (first_single && second_single) {
            return path.back();
        }
        if (first_single) return comps[0][0];
        if (second_single) return comps[1][0];
    }
    throw InvalidPathError("path splits into more than a connected part plus one isolated node");
}

/// Rank cap for find_optimal_path. kAutoRank derives the cap from a
/// treewidth bound and raises it until a path exists.
inline constexpr std::size_t kAutoRank = 0;
inline constexpr std::size_t kUnlimitedRank = std::numeric_limits<std::size_t>::max();

struct SearchOptions {
    std::size_t max_rank = kAutoRank;
    /// Start nodes. Empty means the network boundary, unless seed_all is set.
    std::vector<int> seeds;
    bool seed_all = false;
    /// Keep partial paths connected up to one isolated node.
    bool connectivity_rule = true;
    /// Ceiling on queued plus finalized states.
    std::size_t max_states = std::size_t{1} << 23;
};

/// Candidate next nodes for a partial path, in ascending order.
inline std::vector<int> neighbours(const PathState& st, const NetworkShape& net, std::size_t max_rank,
                                   bool connectivity_rule = true) {
    const Frontier f = frontier_of(net, st.members);
    std::vector<int> out;
    for (int q = 0; q < net.num_nodes(); ++q) {
        if (st.members.contains(q)) continue;
        const Absorption a = absorption(net, st.members, f, q);
        if (max_rank != kUnlimitedRank && a.new_rank > max_rank) continue;
        if (connectivity_rule && st.isolated >= 0) {
            // q must join the isolated node to the rest of the path.
            bool to_isolated = net.adjacent(q, st.isolated);
            bool to_main = false;
            for (int e : net.incident(q)) {
                int w = net.other_end(e, q);
                if (w != st.isolated && st.members.contains(w)) to_main = true;
            }
            if (!(to_isolated && to_main)) continue;
        }
        out.push_back(q);
    }
    return out;
}

class SearchExhausted : public std::runtime_error {
   public:
    SearchExhausted(const std::string& what, std::vector<int> largest) : std::runtime_error(what), largest_subset(std::move(largest)) {}
    std::vector<int> largest_subset;
};

class SearchBudgetExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct SearchResult {
    std::vector<int> path;
    Score score = 0;
    std::size_t rank_cap = kUnlimitedRank;  ///< cap the returned path was found under
    std::size_t peak_rank = 0;
    std::size_t states_popped = 0;
    std::size_t states_pushed = 0;
};

/// Upper bound on treewidth from min-degree elimination.
inline std::size_t treewidth_upper_bound(const NetworkShape& net) {
    const int n = net.num_nodes();
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (const auto& e : net.edges()) {
        adj[static_cast<std::size_t>(e.a)].insert(e.b);
        adj[static_cast<std::size_t>(e.b)].insert(e.a);
    }
    std::vector<bool> gone(static_cast<std::size_t>(n), false);
    std::size_t width = 0;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[static_cast<std::size_t>(v)]) continue;
            if (best < 0 || adj[static_cast<std::size_t>(v)].size() < adj[static_cast<std::size_t>(best)].size()) best = v;
        }
        const auto nb = adj[static_cast<std::size_t>(best)];
        width = std::max(width, nb.size());
        for (int a : nb) {
            adj[static_cast<std::size_t>(a)].erase(best);
            for (int b : nb) {
                if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
            }
        }
        gone[static_cast<std::size_t>(best)] = true;
        adj[static_cast<std::size_t>(best)].clear();
    }
    return width;
}

namespace detail {

/// Heap order: lower score first, then longer path, then lexicographically
/// smaller path. Returns true when `a` should be popped after `b`.
struct PopsAfter {
    bool operator()(const PathState& a, const PathState& b) const {
        if (a.score != b.score) return a.score > b.score;
        if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
        return a.path > b.path;
    }
};

inline std::string describe(const std::vector<int>& nodes) {
    std::string s = "{";
    for (std::size_t i = 0; i < nodes.size(); ++i) s += (i ? "," : "") + std::to_string(nodes[i]);
    return s + "}";
}

/// One best-first search on a connected network with a fixed cap.
inline SearchResult search_connected(const NetworkShape& net, std::span<const int> seeds, std::size_t cap,
                                     const SearchOptions& opt) {
    const auto n = static_cast<std::size_t>(net.num_nodes());
    std::priority_queue<PathState, std::vector<PathState>, PopsAfter> queue;
    std::unordered_set<NodeSet, NodeSetHash> finalized;
    SearchResult result;
    result.rank_cap = cap;

    for (int s : seeds) {
        if (cap != kUnlimitedRank && net.rank(s) > cap) continue;
        queue.push(single_node_state(net, s));
        ++result.states_pushed;
    }

    std::vector<int> largest;
    Score last_popped = 0;
    while (!queue.empty()) {
        PathState st = queue.top();
        queue.pop();
        // Best-first with non-negative costs: pops never decrease in score.
        assert(st.score >= last_popped);
        last_popped = st.score;
        if (finalized.contains(st.members)) continue;
        finalized.insert(st.members);
        ++result.states_popped;
        if (st.path.size() > largest.size()) largest = st.path;

        if (st.path.size() == n) {
            result.path = std::move(st.path);
            result.score = st.score;
            result.peak_rank = path_peak_rank(net, result.path);
            return result;
        }

        const Frontier f = frontier_of(net, st.members);
        for (int q : neighbours(st, net, cap, opt.connectivity_rule)) {
            PathState next;
            next.members = st.members;
            next.members.insert(q);
            if (finalized.contains(next.members)) continue;
            const Absorption a = absorption(net, st.members, f, q);
            next.path = st.path;
            next.path.push_back(q);
            next.score = checked_add(st.score, a.cost);
            if (st.isolated >= 0) {
                next.isolated = -1;  // neighbours() only admits joining nodes
            } else {
                next.isolated = a.touches ? -1 : q;
            }
            queue.push(std::move(next));
            ++result.states_pushed;
        }
        if (queue.size() + finalized.size() > opt.max_states) {
            throw SearchBudgetExceeded("path search exceeded its state budget of " + std::to_string(opt.max_states) +
                                       " states");
        }
    }
    std::sort(largest.begin(), largest.end());
    throw SearchExhausted("no full contraction path under rank cap " + std::to_string(cap) +
                              "; largest subset reached: " + describe(largest),
                          largest);
}

inline SearchResult search_component(const NetworkShape& net, std::span<const int> seeds, const SearchOptions& opt) {
    if (opt.max_rank != kAutoRank) {
        if (opt.max_rank < net.max_rank()) {
            throw std::invalid_argument("rank cap " + std::to_string(opt.max_rank) +
                                        " is below the largest node rank " + std::to_string(net.max_rank()));
        }
        return search_connected(net, seeds, opt.max_rank, opt);
    }
    std::size_t cap = std::max(treewidth_upper_bound(net) + 1, net.max_rank());
    const std::size_t limit = net.edges().size();
    while (true) {
        try {
            return search_connected(net, seeds, cap >= limit ? kUnlimitedRank : cap, opt);
        } catch (const SearchExhausted&) {
            if (cap >= limit) throw;
            ++cap;
        }
    }
}

}  // namespace detail

/// Best-first search for the cheapest linear contraction path. Disconnected
/// networks are searched per component and the paths concatenated.
inline SearchResult find_optimal_path(const NetworkShape& net, const SearchOptions& opt = {}) {
    std::vector<int> seeds = opt.seeds;
    if (opt.seed_all) {
        seeds.resize(static_cast<std::size_t>(net.num_nodes()));
        std::iota(seeds.begin(), seeds.end(), 0);
    } else if (seeds.empty()) {
        seeds = net.boundary();
    }
    for (int s : seeds) {
        if (s < 0 || s >= net.num_nodes()) throw std::invalid_argument("seed node out of range");
    }

    const auto comps = net.components();
    if (comps.size() == 1) {
        return detail::search_component(net, seeds, opt);
    }

    SearchResult total;
    total.rank_cap = 0;
    for (const auto& comp : comps) {
        const NetworkShape sub = net.induced(comp);
        std::vector<int> local_seeds;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (std::find(seeds.begin(), seeds.end(), comp[i]) != seeds.end()) local_seeds.push_back(static_cast<int>(i));
        }
        if (local_seeds.empty()) local_seeds = sub.boundary();
        SearchResult r = detail::search_component(sub, local_seeds, opt);
        for (int v : r.path) total.path.push_back(comp[static_cast<std::size_t>(v)]);
        total.rank_cap = std::max(total.rank_cap, r.rank_cap);
        total.states_popped += r.states_popped;
        total.states_pushed += r.states_pushed;
    }
    total.score = path_score(net, total.path);
    total.peak_rank = path_peak_rank(net, total.path);
    return total;
}

/// Global minimum over all N! absorption orders; ties go to the
/// lexicographically first order. Evaluated without the search machinery.
inline std::pair<std::vector<int>, Score> exhaustive_path_oracle(const NetworkShape& net) {
    const int n = net.num_nodes();
    if (n > 10) throw std::invalid_argument("exhaustive path oracle is limited to 10 nodes");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> best;
    Score best_score = kScoreMax;
    std::vector<char> in(static_cast<std::size_t>(n));
    do {
        std::fill(in.begin(), in.end(), 0);
        in[static_cast<std::size_t>(order[0])] = 1;
        Score total = 0;
        for (int i = 1; i < n && total < best_score; ++i) {
            const int q = order[static_cast<std::size_t>(i)];
            Score step = 1;
            for (const auto& e : net.edges()) {
                const bool a_in = in[static_cast<std::size_t>(e.a)] != 0, b_in = in[static_cast<std::size_t>(e.b)] != 0;
                if (a_in != b_in || e.a == q || e.b == q) step = checked_mul(step, e.extent);
            }
            total = checked_add(total, step);
            in[static_cast<std::size_t>(q)] = 1;
        }
        if (total < best_score) {
            best_score = total;
            best = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return {best, best_score};
}

}  // namespace tnsim::path
