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
#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "tnsim/circuit.hpp"
#include "tnsim/network.hpp"
#include "tnsim/path_search.hpp"
#include "tnsim/tns.hpp"

namespace tnsim {

struct AmplitudeOptions {
    /// Cycles before the split evolve |in>; the rest evolve <out|. -1 picks d/2.
    int split_cycle = -1;
    /// Explicit cut edges. When unset, cuts are planned against max_rank.
    std::optional<std::vector<int>> cut_edges;
    /// Rank cap for cut planning and path search; kAutoRank derives it.
    std::size_t max_rank = path::kAutoRank;
    unsigned workers = 1;
    double tolerance = kDefaultSvdTolerance;
    CutOptions cut_options;
    std::size_t max_search_states = std::size_t{1} << 23;
};

struct AmplitudeResult {
    Complex amplitude{};
    std::size_t peak_rank = 0;
    Score multiplies = 0;
    std::uint64_t slice_count = 1;
    std::vector<int> cut_edges;
    std::vector<int> path;
    Score path_score = 0;
    EvolutionStats phi_stats;
    EvolutionStats psi_stats;
    double wall_time_ms = 0.0;
};

/// Sums the slices with up to `workers` threads. Partial results are kept
/// per slice and added in slice order, so the sum does not depend on timing.
inline Complex contract_slices(const TensorNetwork& net, const CutPlan& plan, std::span<const int> path,
                               unsigned workers, ContractionStats* stats = nullptr) {
    std::vector<Complex> values(plan.slice_count);
    std::vector<ContractionStats> per_slice(plan.slice_count);
    auto run = [&](std::uint64_t first, std::uint64_t stride) {
        for (std::uint64_t s = first; s < plan.slice_count; s += stride) {
            values[s] = contract_along_path(slice_network(net, plan, s), path, &per_slice[s]);
        }
    };
    const auto count = static_cast<std::uint64_t>(std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(
                                                                        std::min<std::uint64_t>(plan.slice_count, 1024)))));
    if (count == 1) {
        run(0, 1);
    } else {
        std::vector<std::exception_ptr> errors(count);
        std::vector<std::thread> threads;
        for (std::uint64_t w = 0; w < count; ++w) {
            threads.emplace_back([&, w] {
                try {
                    run(w, count);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    Complex total{};
    ContractionStats combined;
    for (std::uint64_t s = 0; s < plan.slice_count; ++s) {
        total += values[s];
        combined.peak_rank = std::max(combined.peak_rank, per_slice[s].peak_rank);
        combined.multiplies = checked_add(combined.multiplies, per_slice[s].multiplies);
    }
    if (stats) *stats = combined;
    return total;
}

/// <out| U |in> through two tensor network states and their overlap.
inline AmplitudeResult compute_amplitude(const Circuit& circuit, std::string_view in_bits, std::string_view out_bits,
                                         const AmplitudeOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    validate(circuit);
    const Circuit fused = fuse_single_qubit_gates(circuit);
    const int split = opt.split_cycle < 0 ? default_split_cycle(fused) : opt.split_cycle;
    const TwoSidedStates states = two_sided_evolve(fused, in_bits, out_bits, split, opt.tolerance);
    const TensorNetwork net = build_overlap_network(states.phi, states.psi);

    CutPlan plan;
    if (opt.cut_edges) {
        plan = plan_cuts(net, *opt.cut_edges);
    } else if (opt.max_rank != path::kAutoRank) {
        plan = plan_cuts(net, opt.max_rank, opt.cut_options);
    }

    // Slices share one structure, so one search on slice 0 serves them all.
    const TensorNetwork first = slice_network(net, plan, 0);
    path::SearchOptions search;
    search.max_rank = opt.max_rank;
    search.max_states = opt.max_search_states;
    const path::NetworkShape shape = shape_of(first);
    if (search.max_rank != path::kAutoRank && search.max_rank < shape.max_rank()) search.max_rank = shape.max_rank();
    const path::SearchResult found = path::find_optimal_path(shape, search);

    AmplitudeResult result;
    ContractionStats cstats;
    result.amplitude = contract_slices(net, plan, found.path, std::max(1U, opt.workers), &cstats);
    result.peak_rank = cstats.peak_rank;
    result.multiplies = cstats.multiplies;
    result.slice_count = plan.slice_count;
    result.cut_edges = plan.cut_edges;
    result.path = found.path;
    result.path_score = found.score;
    result.phi_stats = states.phi.stats();
    result.psi_stats = states.psi.stats();
    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace tnsim
