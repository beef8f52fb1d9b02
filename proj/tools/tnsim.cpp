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

// Command-line front end. Every subcommand writes JSON-lines records (or CSV
// with --format csv) to stdout or -o FILE. Failures exit nonzero after a
// single {"error": ...} line on stderr.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tnsim/tnsim.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace tnsim;

class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Collects records and writes them in input order.
class Emitter {
   public:
    Emitter(std::string path, std::string format) : path_(std::move(path)), format_(std::move(format)) {}

    void add(json record) { records_.push_back(std::move(record)); }

    void flush() {
        std::ofstream file;
        std::ostream* out = &std::cout;
        if (!path_.empty()) {
            file.open(path_, std::ios::binary);
            if (!file) throw std::runtime_error("cannot write " + path_);
            out = &file;
        }
        if (format_ == "csv") {
            write_csv(*out);
        } else {
            for (const auto& r : records_) *out << r.dump() << "\n";
        }
    }

   private:
    static std::string cell(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_array()) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + cell(v[i]);
            return s;
        }
        return v.dump();
    }

    void write_csv(std::ostream& out) const {
        if (records_.empty()) return;
        std::vector<std::string> keys;
        for (const auto& [k, v] : records_.front().items()) keys.push_back(k);
        for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
        out << "\n";
        for (const auto& r : records_) {
            for (std::size_t i = 0; i < keys.size(); ++i) {
                out << (i ? "," : "") << (r.contains(keys[i]) ? cell(r.at(keys[i])) : "");
            }
            out << "\n";
        }
    }

    std::string path_;
    std::string format_;
    std::vector<json> records_;
};

struct LatticeArgs {
    std::string lattice = "sycamore-like";
    int size = 0;
    int rows = 0;
    int cols = 0;
};

CircuitGraph build_lattice(const LatticeArgs& a) {
    LatticeKind kind;
    if (a.lattice == "square") {
        kind = LatticeKind::Square;
    } else if (a.lattice == "sycamore-like" || a.lattice == "sycamore") {
        kind = LatticeKind::SycamoreLike;
    } else {
        throw UsageError("unknown lattice \"" + a.lattice + "\"; expected square or sycamore-like");
    }
    if (a.rows > 0 || a.cols > 0) {
        if (a.rows < 2 || a.cols < 2) throw UsageError("--rows and --cols must both be at least 2");
        if (a.size > 0 && a.size != a.rows * a.cols) throw UsageError("--size disagrees with --rows x --cols");
        return generate_lattice(kind, a.rows, a.cols);
    }
    if (a.size <= 0) throw UsageError("give --size or --rows and --cols");
    if (kind == LatticeKind::SycamoreLike) return sycamore_like_lattice(a.size);
    const int side = static_cast<int>(std::lround(std::sqrt(a.size)));
    if (side * side != a.size) throw UsageError("square --size must be a perfect square; otherwise give --rows and --cols");
    return generate_lattice(kind, side, side);
}

GateKind parse_family(const std::string& name) {
    const auto kind = gate_kind_from_name(name);
    if (!kind) throw UsageError("unknown gate family \"" + name + "\"");
    return *kind;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json path_json(const std::vector<int>& v) {
    json a = json::array();
    for (int x : v) a.push_back(x);
    return a;
}

/// "auto" or a comma/space separated list of edge ids.
std::optional<std::vector<int>> parse_cuts(const std::string& text) {
    if (text.empty() || text == "auto") return std::nullopt;
    std::vector<int> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        std::stringstream inner(token);
        std::string part;
        while (inner >> part) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(part, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != part.size()) throw UsageError("--cuts must be auto or a list of edge ids, got \"" + part + "\"");
            out.push_back(v);
        }
    }
    return out;
}

std::string random_bitstring(std::mt19937_64& rng, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (auto& ch : s) ch = static_cast<char>('0' + static_cast<int>(rng() % 2));
    return s;
}

struct ContractionArgs {
    std::string cuts = "auto";
    int max_rank = 0;
    int split_cycle = -1;
    bool timing = false;
};

AmplitudeOptions amplitude_options(const ContractionArgs& a, unsigned workers) {
    AmplitudeOptions o;
    o.cut_edges = parse_cuts(a.cuts);
    if (a.max_rank < 0) throw UsageError("--max-rank must be non-negative");
    o.max_rank = a.max_rank == 0 ? path::kAutoRank : static_cast<std::size_t>(a.max_rank);
    o.split_cycle = a.split_cycle;
    o.workers = workers;
    return o;
}

json amplitude_record(const std::string& in, const std::string& out, const AmplitudeResult& r, bool timing) {
    json j;
    j["in"] = in;
    j["out"] = out;
    j["amplitude"] = complex_json(r.amplitude);
    j["peak_rank"] = r.peak_rank;
    j["multiplies"] = score_to_string(r.multiplies);
    j["slice_count"] = r.slice_count;
    j["cut_edges"] = path_json(r.cut_edges);
    j["path"] = path_json(r.path);
    j["path_score"] = score_to_string(r.path_score);
    if (timing) j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

void print_error(const std::string& type, const std::string& message) {
    json e;
    e["error"] = {{"type", type}, {"message", message}};
    std::cerr << e.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-amplitude simulation of random quantum circuits with tensor network states"};
    app.fallthrough();  // global options may follow the subcommand
    app.require_subcommand(1);
    app.set_config("--config", "", "Preload flags from a TOML or INI file");
    unsigned workers = 1;
    app.add_option("--workers", workers, "Worker threads for slice contraction")
        ->envname("TNSIM_WORKERS")
        ->check(CLI::Range(1U, 1024U));
    std::string output_path, format = "json";

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output_path, "Write records to FILE instead of stdout");
        sub->add_option("--format", format, "Record format")->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_lattice = [](CLI::App* sub, LatticeArgs& l) {
        sub->add_option("--lattice", l.lattice, "square or sycamore-like")->capture_default_str();
        sub->add_option("--size", l.size, "Qubit count (sycamore-like: 53, 54, 60, 66, 72, 104)");
        sub->add_option("--rows", l.rows, "Lattice rows");
        sub->add_option("--cols", l.cols, "Lattice columns");
    };
    auto add_contraction = [](CLI::App* sub, ContractionArgs& c) {
        sub->add_option("--cuts", c.cuts, "auto, or comma-separated edge ids to cut")->capture_default_str();
        sub->add_option("--max-rank", c.max_rank, "Rank cap for cut planning and path search (0 = automatic)");
        sub->add_option("--split-cycle", c.split_cycle, "Cycles evolved on the input side (default d/2)");
        sub->add_flag("--timing", c.timing, "Include wall_time_ms in records");
    };

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random circuit");
    LatticeArgs gen_lattice;
    int gen_depth = 8;
    std::uint64_t gen_seed = 0;
    std::string gen_gate = "fsim", gen_activation;
    double gen_theta = std::numbers::pi / 2, gen_phi = std::numbers::pi / 6;
    bool gen_no_single = false;
    add_lattice(gen, gen_lattice);
    gen->add_option("--depth", gen_depth, "Number of cycles")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
    gen->add_option("--gate", gen_gate, "Two-qubit gate family: cz, iswap or fsim")->capture_default_str();
    gen->add_option("--theta", gen_theta, "fSim swap angle");
    gen->add_option("--phi", gen_phi, "fSim phase angle");
    gen->add_option("--activation", gen_activation, "Edge colour pattern per cycle, e.g. ABCDCDAB");
    gen->add_flag("--no-single-qubit", gen_no_single, "Omit single-qubit layers");
    add_output(gen);

    // amplitude
    auto* amp = app.add_subcommand("amplitude", "Compute <out|U|in> amplitudes");
    std::string circuit_path, in_bits;
    std::vector<std::string> out_bits;
    ContractionArgs amp_args;
    amp->add_option("-c,--circuit", circuit_path, "Circuit file")->required()->check(CLI::ExistingFile);
    amp->add_option("--in", in_bits, "Input bitstring (default all zeros)");
    amp->add_option("--out", out_bits, "Output bitstring(s)")->required();
    add_contraction(amp, amp_args);
    add_output(amp);

    // verify
    auto* ver = app.add_subcommand("verify", "Compare amplitudes against a second computation");
    int ver_samples = 10;
    std::uint64_t ver_seed = 0;
    bool ver_oracle = false;
    double ver_tol = 1e-10;
    ContractionArgs ver_args;
    ver->add_option("-c,--circuit", circuit_path, "Circuit file")->required()->check(CLI::ExistingFile);
    ver->add_option("--in", in_bits, "Input bitstring (default all zeros)");
    ver->add_option("--samples", ver_samples, "Random output bitstrings")->capture_default_str();
    ver->add_option("--seed", ver_seed, "Seed for the output bitstrings")->capture_default_str();
    ver->add_flag("--oracle", ver_oracle, "Compare with the state-vector simulator (default: split 0 vs d)");
    ver->add_option("--tolerance", ver_tol, "Largest accepted |difference|")->capture_default_str();
    add_contraction(ver, ver_args);
    add_output(ver);

    // path
    auto* pth = app.add_subcommand("path", "Plan cuts and a contraction path without contracting");
    ContractionArgs path_args;
    std::string path_out;
    pth->add_option("-c,--circuit", circuit_path, "Circuit file")->required()->check(CLI::ExistingFile);
    pth->add_option("--in", in_bits, "Input bitstring (default all zeros)");
    pth->add_option("--out", path_out, "Output bitstring (default all zeros)");
    add_contraction(pth, path_args);
    add_output(pth);

    // estimate-workload
    auto* est = app.add_subcommand("estimate-workload", "Fidelity and required samples under an error model");
    ErrorModel model = kSycamoreErrors;
    LatticeArgs est_lattice;
    std::string est_depths;
    std::uint64_t est_seed = 0;
    est->add_option("-c,--circuit", circuit_path, "Circuit file (otherwise generated)");
    est->add_option("--e1", model.e1, "Single-qubit gate error")->capture_default_str();
    est->add_option("--e2", model.e2, "Two-qubit gate error")->capture_default_str();
    est->add_option("--eq", model.eq, "Readout error per qubit")->capture_default_str();
    add_lattice(est, est_lattice);
    est->add_option("--depths", est_depths, "Depth or range, e.g. 5-11, for generated circuits");
    est->add_option("--seed", est_seed, "Seed for generated circuits")->capture_default_str();
    add_output(est);

    // bench
    auto* bench = app.add_subcommand("bench", "Time amplitude computations");
    int bench_samples = 3;
    std::uint64_t bench_seed = 0;
    ContractionArgs bench_args;
    bench->add_option("-c,--circuit", circuit_path, "Circuit file")->required()->check(CLI::ExistingFile);
    bench->add_option("--samples", bench_samples, "Random output bitstrings")->capture_default_str();
    bench->add_option("--seed", bench_seed, "Seed for the output bitstrings")->capture_default_str();
    add_contraction(bench, bench_args);
    add_output(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    }

    try {
        Emitter emit(output_path, format);
        if (*gen) {
            RqcOptions opt;
            opt.depth = gen_depth;
            opt.seed = gen_seed;
            opt.gate = parse_family(gen_gate);
            opt.fsim_theta = gen_theta;
            opt.fsim_phi = gen_phi;
            if (!gen_activation.empty()) opt.activation = parse_activation(gen_activation);
            if (gen_no_single) opt.single_qubit = SingleQubitSet::None;
            const Circuit c = generate_rqc(build_lattice(gen_lattice), opt);
            if (output_path.empty()) {
                std::cout << serialize_circuit(c);
            } else {
                save_circuit(c, output_path);
                json j;
                j["circuit"] = output_path;
                j["num_qubits"] = c.num_qubits();
                j["edges"] = c.graph.num_edges();
                j["depth"] = c.depth();
                j["two_qubit_gates"] = c.num_two_qubit_gates();
                j["single_qubit_gates"] = c.single_qubit_gates.size();
                std::cout << j.dump() << "\n";
            }
            return 0;
        }

        if (*amp) {
            const Circuit c = load_circuit(circuit_path);
            const std::string in = in_bits.empty() ? std::string(static_cast<std::size_t>(c.num_qubits()), '0') : in_bits;
            const AmplitudeOptions opt = amplitude_options(amp_args, workers);
            for (const auto& out : out_bits) {
                emit.add(amplitude_record(in, out, compute_amplitude(c, in, out, opt), amp_args.timing));
            }
        } else if (*ver) {
            const Circuit c = load_circuit(circuit_path);
            const std::string in = in_bits.empty() ? std::string(static_cast<std::size_t>(c.num_qubits()), '0') : in_bits;
            AmplitudeOptions opt = amplitude_options(ver_args, workers);
            std::mt19937_64 rng(ver_seed);
            double worst = 0.0;
            for (int s = 0; s < ver_samples; ++s) {
                const std::string out = random_bitstring(rng, c.num_qubits());
                const AmplitudeResult r = compute_amplitude(c, in, out, opt);
                Complex reference;
                if (ver_oracle) {
                    reference = oracle::amplitude_oracle(c, in, out);
                } else {
                    AmplitudeOptions other = opt;
                    other.split_cycle = opt.split_cycle == 0 ? c.depth() : 0;
                    reference = compute_amplitude(c, in, out, other).amplitude;
                }
                worst = std::max(worst, std::abs(r.amplitude - reference));
            }
            json j;
            j["samples"] = ver_samples;
            j["reference"] = ver_oracle ? "oracle" : "split";
            j["max_abs_diff"] = worst;
            j["tolerance"] = ver_tol;
            j["pass"] = worst <= ver_tol;
            emit.add(j);
            emit.flush();
            if (worst > ver_tol) {
                print_error("verification", "max |difference| " + std::to_string(worst) + " exceeds tolerance");
                return 1;
            }
            return 0;
        } else if (*pth) {
            const Circuit c = fuse_single_qubit_gates(load_circuit(circuit_path));
            const std::string zeros(static_cast<std::size_t>(c.num_qubits()), '0');
            const std::string in = in_bits.empty() ? zeros : in_bits;
            const std::string out = path_out.empty() ? zeros : path_out;
            const AmplitudeOptions opt = amplitude_options(path_args, workers);
            const int split = opt.split_cycle < 0 ? default_split_cycle(c) : opt.split_cycle;
            const TwoSidedStates st = two_sided_evolve(c, in, out, split);
            const TensorNetwork net = build_overlap_network(st.phi, st.psi);
            const CutPlan plan = opt.cut_edges ? plan_cuts(net, *opt.cut_edges)
                                 : opt.max_rank != path::kAutoRank ? plan_cuts(net, opt.max_rank)
                                                                   : CutPlan{};
            path::SearchOptions so;
            so.max_rank = opt.max_rank;
            const path::NetworkShape shape = shape_of(slice_network(net, plan, 0));
            if (so.max_rank != path::kAutoRank && so.max_rank < shape.max_rank()) so.max_rank = shape.max_rank();
            const auto t0 = std::chrono::steady_clock::now();
            const path::SearchResult r = path::find_optimal_path(shape, so);
            json j;
            j["num_nodes"] = shape.num_nodes();
            j["num_edges"] = shape.edges().size();
            j["cut_edges"] = path_json(plan.cut_edges);
            j["slice_count"] = plan.slice_count;
            j["rank_cap"] = r.rank_cap == path::kUnlimitedRank ? json(nullptr) : json(r.rank_cap);
            j["peak_rank"] = r.peak_rank;
            j["path"] = path_json(r.path);
            j["score"] = score_to_string(r.score);
            j["states_popped"] = r.states_popped;
            if (path_args.timing) {
                j["wall_time_ms"] =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            }
            emit.add(j);
        } else if (*est) {
            std::vector<std::pair<int, Circuit>> circuits;
            if (!circuit_path.empty()) {
                const Circuit c = load_circuit(circuit_path);
                circuits.emplace_back(c.depth(), c);
            } else {
                if (est_depths.empty()) throw UsageError("give -c FILE or --depths");
                int lo = 0, hi = 0;
                const auto dash = est_depths.find('-');
                try {
                    lo = std::stoi(est_depths.substr(0, dash));
                    hi = dash == std::string::npos ? lo : std::stoi(est_depths.substr(dash + 1));
                } catch (const std::exception&) {
                    throw UsageError("--depths must look like 8 or 5-11");
                }
                if (lo < 1 || hi < lo) throw UsageError("--depths must be a non-empty range of positive depths");
                if (est_lattice.size == 0 && est_lattice.rows == 0) est_lattice.size = 53;
                const CircuitGraph g = build_lattice(est_lattice);
                for (int d = lo; d <= hi; ++d) {
                    RqcOptions opt;
                    opt.depth = d;
                    opt.seed = est_seed;
                    circuits.emplace_back(d, generate_rqc(g, opt));
                }
            }
            for (const auto& [d, c] : circuits) {
                const WorkloadEstimate w = estimate_workload(c, model);
                json j;
                j["num_qubits"] = c.num_qubits();
                j["depth"] = d;
                j["single_qubit_gates"] = w.single_qubit_gates;
                j["two_qubit_gates"] = w.two_qubit_gates;
                j["log_fidelity"] = w.log_fidelity;
                j["fidelity"] = w.fidelity;
                j["samples_exact"] = w.samples_exact;
                j["samples"] = w.samples;
                j["sigma"] = w.sigma;
                j["log10_depth"] = std::log10(static_cast<double>(d));
                j["log10_samples"] = std::log10(static_cast<double>(w.samples));
                emit.add(j);
            }
        } else if (*bench) {
            const Circuit c = load_circuit(circuit_path);
            const std::string in(static_cast<std::size_t>(c.num_qubits()), '0');
            const AmplitudeOptions opt = amplitude_options(bench_args, workers);
            std::mt19937_64 rng(bench_seed);
            for (int s = 0; s < bench_samples; ++s) {
                const std::string out = random_bitstring(rng, c.num_qubits());
                emit.add(amplitude_record(in, out, compute_amplitude(c, in, out, opt), true));
            }
        }
        emit.flush();
    } catch (const UsageError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const CircuitFormatError& e) {
        print_error("circuit_format", e.what());
        return 1;
    } catch (const CapUnachievable& e) {
        print_error("cap_unachievable", std::string(e.what()) + "; best plan cuts " +
                                            std::to_string(e.best_plan.cut_edges.size()) + " edges");
        return 1;
    } catch (const path::SearchExhausted& e) {
        print_error("search_exhausted", e.what());
        return 1;
    } catch (const path::SearchBudgetExceeded& e) {
        print_error("search_budget", e.what());
        return 1;
    } catch (const WorkloadOverflow& e) {
        print_error("workload_overflow", e.what());
        return 1;
    } catch (const std::bad_alloc&) {
        print_error("out_of_memory", "allocation failed; try cutting more edges or a smaller circuit");
        return 1;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return 1;
    }
    return 0;
}
