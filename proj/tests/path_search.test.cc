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

#include "tnsim/path_search.hpp"

#include <numeric>
#include <random>
#include <set>

#include "gtest/gtest.h"

#include "support/test_util.hpp"

using namespace tnsim;
using namespace tnsim::path;

static NetworkShape chain(int n, std::uint64_t extent) {
    std::vector<ShapeEdge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, extent});
    return NetworkShape(n, std::move(edges));
}

static SearchOptions unpruned() {
    SearchOptions o;
    o.max_rank = kUnlimitedRank;
    o.seed_all = true;
    o.connectivity_rule = false;
    return o;
}

// Components of the induced subgraph, by union-find.
static int components_oracle(const NetworkShape& net, const std::vector<int>& nodes, std::vector<int>* sizes) {
    std::vector<int> parent(static_cast<std::size_t>(net.num_nodes()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    std::set<int> in(nodes.begin(), nodes.end());
    for (const auto& e : net.edges()) {
        if (in.count(e.a) && in.count(e.b)) parent[static_cast<std::size_t>(find(e.a))] = find(e.b);
    }
    std::map<int, int> count;
    for (int v : nodes) ++count[find(v)];
    if (sizes) {
        sizes->clear();
        for (auto [root, c] : count) sizes->push_back(c);
    }
    return static_cast<int>(count.size());
}

TEST(path_search, score_increment_examples) {
    // Node 1 has axes {2, 2}; node 0 shares one extent-2 axis with it.
    NetworkShape net(3, {{0, 1, 2}, {1, 2, 2}, {0, 2, 2}});
    NodeSet s(3);
    s.insert(0);
    EXPECT_EQ(score_increment(net, s, 1), Score{8});
    // No shared edge: full outer product of both frontiers.
    NetworkShape apart(4, {{0, 1, 2}, {2, 3, 4}});
    NodeSet t(4);
    t.insert(0);
    EXPECT_EQ(score_increment(apart, t, 2), Score{8});
    EXPECT_THROW(score_increment(apart, t, 0), std::invalid_argument);
}

TEST(path_search, chain_of_four) {
    const NetworkShape net = chain(4, 2);
    const auto [oracle_path, oracle_score] = exhaustive_path_oracle(net);
    EXPECT_EQ(oracle_score, Score{10});
    EXPECT_EQ(find_optimal_path(net, unpruned()).score, oracle_score);
    EXPECT_EQ(find_optimal_path(net).score, oracle_score);
}

TEST(path_search, single_node) {
    const NetworkShape net(1, {});
    const SearchResult r = find_optimal_path(net);
    EXPECT_EQ(r.path, std::vector<int>{0});
    EXPECT_EQ(r.score, Score{0});
    EXPECT_EQ(exhaustive_path_oracle(net).second, Score{0});
}

TEST(path_search, pair_tie_goes_to_lexicographic_first) {
    const NetworkShape net(2, {{0, 1, 4}});
    EXPECT_EQ(exhaustive_path_oracle(net).first, (std::vector<int>{0, 1}));
    EXPECT_EQ(find_optimal_path(net, unpruned()).path, (std::vector<int>{0, 1}));
}

TEST(path_search, three_node_path_graph) {
    const NetworkShape net = chain(3, 2);
    EXPECT_EQ(find_optimal_path(net, unpruned()).score, exhaustive_path_oracle(net).second);
}

TEST(path_search, matches_exhaustive_on_random_networks) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 6;
        const NetworkShape net = tnsim::testing::random_shape(rng, n, 0.35, {2, 4});
        const auto want = exhaustive_path_oracle(net);
        const SearchResult got = find_optimal_path(net, unpruned());
        ASSERT_EQ(got.score, want.second) << "n=" << n << " trial " << trial;
        EXPECT_EQ(path_score(net, got.path), got.score);
    }
}

TEST(path_search, exhaustive_guard) {
    EXPECT_THROW(exhaustive_path_oracle(chain(11, 2)), std::invalid_argument);
}

TEST(path_search, connectivity_examples) {
    const NetworkShape net = chain(4, 2);
    EXPECT_EQ(connectivity(std::vector<int>{2}, net), -1);
    EXPECT_EQ(connectivity(std::vector<int>{0, 3}, net), 3);
    EXPECT_EQ(connectivity(std::vector<int>{0, 1, 3}, net), 3);
    EXPECT_EQ(connectivity(std::vector<int>{1, 2, 0}, net), -1);
    const NetworkShape longer = chain(7, 2);
    EXPECT_THROW(connectivity(std::vector<int>{0, 2, 4}, longer), InvalidPathError);
    EXPECT_THROW(connectivity(std::vector<int>{0, 1, 3, 4}, longer), InvalidPathError);
    EXPECT_THROW(connectivity(std::vector<int>{}, longer), InvalidPathError);
}

TEST(path_search, connectivity_matches_union_find_on_trajectories) {
    std::mt19937_64 rng(52);
    const NetworkShape net = tnsim::testing::grid_shape(3, 4, 2);
    int complete = 0, split = 0;
    for (int trial = 0; trial < 200; ++trial) {
        PathState st = single_node_state(net, static_cast<int>(rng() % 12));
        while (true) {
            // An empty candidate list is a dead end, which the search prunes.
            const auto cand = neighbours(st, net, kUnlimitedRank, true);
            if (cand.empty()) break;
            const int q = cand[rng() % cand.size()];
            st.path.push_back(q);
            st.members.insert(q);
            st.isolated = connectivity(st.path, net);
            std::vector<int> sizes;
            const int comps = components_oracle(net, st.path, &sizes);
            ASSERT_LE(comps, 2);
            if (comps == 1) {
                EXPECT_EQ(st.isolated, -1);
            } else {
                ++split;
                EXPECT_NE(st.isolated, -1);
                std::vector<int> lone{st.isolated};
                EXPECT_EQ(components_oracle(net, lone, nullptr), 1);
                EXPECT_TRUE(sizes[0] == 1 || sizes[1] == 1);
            }
        }
        complete += st.path.size() == 12u;
    }
    EXPECT_GT(complete, 0);
    EXPECT_GT(split, 0);
}

// Brute-force restatement of the neighbour predicate.
static std::vector<int> neighbours_oracle(const std::vector<int>& path, int isolated, const NetworkShape& net,
                                          std::size_t cap) {
    std::vector<int> out;
    for (int q = 0; q < net.num_nodes(); ++q) {
        if (std::find(path.begin(), path.end(), q) != path.end()) continue;
        std::vector<int> next = path;
        next.push_back(q);
        int open = 0;
        for (const auto& e : net.edges()) {
            const bool a = std::find(next.begin(), next.end(), e.a) != next.end();
            const bool b = std::find(next.begin(), next.end(), e.b) != next.end();
            open += a != b;
        }
        if (static_cast<std::size_t>(open) > cap) continue;
        if (isolated >= 0 && components_oracle(net, next, nullptr) != 1) continue;
        out.push_back(q);
    }
    return out;
}

TEST(path_search, neighbours_match_predicate_on_reachable_states) {
    const NetworkShape net = tnsim::testing::grid_shape(3, 3, 2);
    std::vector<PathState> frontier;
    for (int v = 0; v < 9; ++v) frontier.push_back(single_node_state(net, v));
    std::size_t checked = 0;
    while (!frontier.empty()) {
        std::vector<PathState> next_layer;
        for (const PathState& st : frontier) {
            const auto got = neighbours(st, net, 4, true);
            ASSERT_EQ(got, neighbours_oracle(st.path, st.isolated, net, 4));
            ++checked;
            for (int q : got) {
                PathState n = st;
                n.path.push_back(q);
                n.members.insert(q);
                n.isolated = connectivity(n.path, net);
                next_layer.push_back(std::move(n));
            }
        }
        frontier = std::move(next_layer);
    }
    EXPECT_GT(checked, 300u);
}

TEST(path_search, last_missing_node_is_the_only_candidate) {
    const NetworkShape net = tnsim::testing::grid_shape(2, 3, 2);
    PathState st = single_node_state(net, 0);
    for (int v : {1, 2, 3, 4}) {
        st.path.push_back(v);
        st.members.insert(v);
    }
    EXPECT_EQ(neighbours(st, net, kUnlimitedRank), std::vector<int>{5});
}

TEST(path_search, cap_too_small_reports_largest_subset) {
    const NetworkShape net = tnsim::testing::grid_shape(3, 3, 2);
    SearchOptions o;
    o.max_rank = 4;
    o.seeds = {0};
    // Rank 4 suffices for a 3x3 grid; rank 2 is below the node rank.
    EXPECT_NO_THROW(find_optimal_path(net, o));
    o.max_rank = 2;
    EXPECT_THROW(find_optimal_path(net, o), std::invalid_argument);
    const NetworkShape big = tnsim::testing::grid_shape(4, 4, 2);
    o.max_rank = 4;
    try {
        find_optimal_path(big, o);
        FAIL() << "expected exhaustion";
    } catch (const SearchExhausted& e) {
        EXPECT_FALSE(e.largest_subset.empty());
        EXPECT_NE(std::string(e.what()).find("largest subset"), std::string::npos);
    }
}

TEST(path_search, state_budget) {
    const NetworkShape net = tnsim::testing::grid_shape(4, 4, 4);
    SearchOptions o = unpruned();
    o.max_states = 100;
    EXPECT_THROW(find_optimal_path(net, o), SearchBudgetExceeded);
}

TEST(path_search, auto_cap_returns_a_path) {
    for (auto [r, c] : {std::pair{3, 3}, std::pair{4, 4}, std::pair{5, 5}}) {
        const NetworkShape net = tnsim::testing::grid_shape(r, c, 4);
        const SearchResult res = find_optimal_path(net);
        EXPECT_EQ(res.path.size(), static_cast<std::size_t>(r * c));
        EXPECT_LE(res.peak_rank, res.rank_cap);
        EXPECT_EQ(path_score(net, res.path), res.score);
    }
}

TEST(path_search, disconnected_networks_are_concatenated) {
    const NetworkShape net(5, {{0, 1, 2}, {2, 3, 2}, {3, 4, 2}});
    const SearchResult r = find_optimal_path(net);
    EXPECT_EQ(r.path.size(), 5u);
    EXPECT_EQ(r.score, path_score(net, r.path));
}

TEST(path_search, deterministic) {
    std::mt19937_64 rng(53);
    const NetworkShape net = tnsim::testing::random_shape(rng, 12, 0.2, {2, 4});
    EXPECT_EQ(find_optimal_path(net).path, find_optimal_path(net).path);
}

TEST(path_search, treewidth_bound_examples) {
    EXPECT_EQ(treewidth_upper_bound(chain(5, 2)), 1u);
    EXPECT_EQ(treewidth_upper_bound(tnsim::testing::grid_shape(3, 3, 2)), 3u);
    const NetworkShape k4(4, {{0, 1, 2}, {0, 2, 2}, {0, 3, 2}, {1, 2, 2}, {1, 3, 2}, {2, 3, 2}});
    EXPECT_EQ(treewidth_upper_bound(k4), 3u);
}

TEST(path_search, score_is_monotone_along_paths) {
    std::mt19937_64 rng(54);
    const NetworkShape net = tnsim::testing::random_shape(rng, 8, 0.3, {2, 4});
    std::vector<int> order(8);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Score prev = 0;
    for (std::size_t m = 1; m <= order.size(); ++m) {
        const Score s = path_score(net, std::span<const int>(order.data(), m));
        EXPECT_GE(s, prev);
        prev = s;
    }
}
