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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tnsim/circuit.hpp"

namespace tnsim {

/// Malformed or invalid circuit document.
class CircuitFormatError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

using ojson = nlohmann::ordered_json;

template <std::size_t N>
ojson complex_array_to_json(const std::array<Complex, N>& m) {
    ojson arr = ojson::array();
    for (const auto& v : m) arr.push_back(ojson::array({v.real(), v.imag()}));
    return arr;
}

template <std::size_t N>
std::array<Complex, N> complex_array_from_json(const ojson& j, const std::string& where) {
    if (!j.is_array() || j.size() != N) {
        throw CircuitFormatError(where + ": matrix must be a list of " + std::to_string(N) + " [re, im] pairs");
    }
    std::array<Complex, N> m{};
    for (std::size_t i = 0; i < N; ++i) {
        const auto& e = j[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw CircuitFormatError(where + ": matrix entry " + std::to_string(i) + " must be [re, im]");
        }
        m[i] = Complex(e[0].get<double>(), e[1].get<double>());
    }
    return m;
}

inline int qubit_from_json(const ojson& j, int n, const std::string& where) {
    if (!j.is_number_integer()) {
        throw CircuitFormatError(where + ": qubit index must be an integer");
    }
    const auto q = j.get<long long>();
    if (q < 0 || q >= n) {
        throw CircuitFormatError(where + ": qubit index " + std::to_string(q) + " out of range for " +
                                 std::to_string(n) + " qubits");
    }
    return static_cast<int>(q);
}

inline const ojson& require(const ojson& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw CircuitFormatError(where + ": missing \"" + key + "\"");
    }
    return obj.at(key);
}

}  // namespace detail

inline std::string serialize_circuit(const Circuit& c) {
    using detail::ojson;
    ojson doc;
    doc["num_qubits"] = c.num_qubits();
    ojson edges = ojson::array();
    for (auto [a, b] : c.graph.edges()) edges.push_back(ojson::array({a, b}));
    doc["edges"] = std::move(edges);

    ojson cycles = ojson::array();
    for (const auto& cycle : c.cycles) {
        ojson gates_json = ojson::array();
        for (const auto& g : cycle) {
            ojson gj;
            gj["pair"] = ojson::array({g.k, g.l});
            gj["gate"] = std::string(gate_kind_name(g.kind));
            if (g.kind == GateKind::FSim) {
                gj["params"] = ojson{{"theta", g.theta}, {"phi", g.phi}};
            } else if (g.kind == GateKind::Matrix) {
                gj["matrix"] = detail::complex_array_to_json(g.matrix);
            }
            gates_json.push_back(std::move(gj));
        }
        cycles.push_back(std::move(gates_json));
    }
    doc["cycles"] = std::move(cycles);

    ojson singles = ojson::array();
    for (const auto& s : c.single_qubit_gates) {
        ojson sj;
        sj["qubit"] = s.qubit;
        sj["moment"] = s.moment;
        sj["matrix"] = detail::complex_array_to_json(s.matrix);
        singles.push_back(std::move(sj));
    }
    doc["single_qubit"] = std::move(singles);

    if (!c.trailing.empty()) {
        ojson trailing = ojson::array();
        for (const auto& [q, m] : c.trailing) {
            trailing.push_back(ojson{{"qubit", q}, {"matrix", detail::complex_array_to_json(m)}});
        }
        doc["trailing"] = std::move(trailing);
    }
    return doc.dump() + "\n";
}

inline Circuit parse_circuit(std::string_view text) {
    using detail::ojson;
    ojson doc;
    try {
        doc = ojson::parse(text.begin(), text.end());
    } catch (const ojson::parse_error& e) {
        throw CircuitFormatError("circuit syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw CircuitFormatError("circuit document must be a JSON object");
    }

    const auto& nq = detail::require(doc, "num_qubits", "circuit");
    if (!nq.is_number_integer() || nq.get<long long>() < 1) {
        throw CircuitFormatError("circuit: num_qubits must be a positive integer");
    }
    const int n = static_cast<int>(nq.get<long long>());

    std::vector<Edge> edges;
    const auto& ej = detail::require(doc, "edges", "circuit");
    if (!ej.is_array()) throw CircuitFormatError("circuit: edges must be a list");
    for (std::size_t i = 0; i < ej.size(); ++i) {
        const std::string where = "edge " + std::to_string(i);
        if (!ej[i].is_array() || ej[i].size() != 2) throw CircuitFormatError(where + ": must be [i, j]");
        edges.emplace_back(detail::qubit_from_json(ej[i][0], n, where), detail::qubit_from_json(ej[i][1], n, where));
    }

    Circuit c;
    try {
        c.graph = CircuitGraph(n, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw CircuitFormatError(std::string("circuit graph: ") + e.what());
    }

    const auto& cj = detail::require(doc, "cycles", "circuit");
    if (!cj.is_array()) throw CircuitFormatError("circuit: cycles must be a list");
    for (std::size_t ci = 0; ci < cj.size(); ++ci) {
        if (!cj[ci].is_array()) throw CircuitFormatError("cycle " + std::to_string(ci) + ": must be a list");
        std::vector<Gate> cycle;
        for (std::size_t gi = 0; gi < cj[ci].size(); ++gi) {
            const auto& gj = cj[ci][gi];
            const std::string where = "cycle " + std::to_string(ci) + " gate " + std::to_string(gi);
            const auto& pair = detail::require(gj, "pair", where);
            if (!pair.is_array() || pair.size() != 2) throw CircuitFormatError(where + ": pair must be [k, l]");
            const int k = detail::qubit_from_json(pair[0], n, where);
            const int l = detail::qubit_from_json(pair[1], n, where);
            const auto& name = detail::require(gj, "gate", where);
            if (!name.is_string()) throw CircuitFormatError(where + ": gate name must be a string");
            const auto kind = gate_kind_from_name(name.get<std::string>());
            if (!kind) throw CircuitFormatError(where + ": unknown gate name \"" + name.get<std::string>() + "\"");

            Gate g;
            if (*kind == GateKind::Matrix) {
                g = make_gate(k, l, detail::complex_array_from_json<16>(detail::require(gj, "matrix", where), where));
            } else if (*kind == GateKind::FSim) {
                const auto& params = detail::require(gj, "params", where);
                const auto& theta = detail::require(params, "theta", where + " params");
                const auto& phi = detail::require(params, "phi", where + " params");
                if (!theta.is_number() || !phi.is_number()) {
                    throw CircuitFormatError(where + ": fsim params must be numbers");
                }
                g = make_gate(k, l, GateKind::FSim, theta.get<double>(), phi.get<double>());
            } else {
                g = make_gate(k, l, *kind);
            }
            g.cycle = static_cast<int>(ci);
            cycle.push_back(g);
        }
        c.cycles.push_back(std::move(cycle));
    }

    if (doc.contains("single_qubit")) {
        const auto& sj = doc.at("single_qubit");
        if (!sj.is_array()) throw CircuitFormatError("circuit: single_qubit must be a list");
        for (std::size_t i = 0; i < sj.size(); ++i) {
            const std::string where = "single_qubit " + std::to_string(i);
            SingleQubitGate s;
            s.qubit = detail::qubit_from_json(detail::require(sj[i], "qubit", where), n, where);
            const auto& mom = detail::require(sj[i], "moment", where);
            if (!mom.is_number_integer()) throw CircuitFormatError(where + ": moment must be an integer");
            s.moment = static_cast<int>(mom.get<long long>());
            s.matrix = detail::complex_array_from_json<4>(detail::require(sj[i], "matrix", where), where);
            c.single_qubit_gates.push_back(s);
        }
    }
    if (doc.contains("trailing")) {
        const auto& tj = doc.at("trailing");
        if (!tj.is_array()) throw CircuitFormatError("circuit: trailing must be a list");
        for (std::size_t i = 0; i < tj.size(); ++i) {
            const std::string where = "trailing " + std::to_string(i);
            const int q = detail::qubit_from_json(detail::require(tj[i], "qubit", where), n, where);
            c.trailing[q] = detail::complex_array_from_json<4>(detail::require(tj[i], "matrix", where), where);
        }
    }

    try {
        validate(c);
    } catch (const std::invalid_argument& e) {
        throw CircuitFormatError(e.what());
    }
    return c;
}

inline Circuit load_circuit(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open circuit file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_circuit(buf.str());
}

inline void save_circuit(const Circuit& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write circuit file " + path);
    }
    out << serialize_circuit(c);
}

}  // namespace tnsim
