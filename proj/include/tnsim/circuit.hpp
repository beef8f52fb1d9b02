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
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tnsim/tensor.hpp"

namespace tnsim {

using Matrix2 = std::array<Complex, 4>;   // row-major (out, in)
using Matrix4 = std::array<Complex, 16>;  // row-major (s_k' s_l', s_k s_l), s_k most significant

inline Matrix2 matmul(const Matrix2& a, const Matrix2& b) {
    Matrix2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) c[2 * i + j] += a[2 * i + k] * b[2 * k + j];
    return c;
}

inline Matrix4 matmul(const Matrix4& a, const Matrix4& b) {
    Matrix4 c{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) c[4 * i + j] += a[4 * i + k] * b[4 * k + j];
    return c;
}

/// a acts on the first (more significant) qubit.
inline Matrix4 kron(const Matrix2& a, const Matrix2& b) {
    Matrix4 c{};
    for (int i0 = 0; i0 < 2; ++i0)
        for (int i1 = 0; i1 < 2; ++i1)
            for (int j0 = 0; j0 < 2; ++j0)
                for (int j1 = 0; j1 < 2; ++j1) c[4 * (2 * i0 + i1) + (2 * j0 + j1)] = a[2 * i0 + j0] * b[2 * i1 + j1];
    return c;
}

template <std::size_t N>
std::array<Complex, N> dagger(const std::array<Complex, N>& m) {
    constexpr int n = N == 4 ? 2 : 4;
    std::array<Complex, N> d{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[n * i + j] = std::conj(m[n * j + i]);
    return d;
}

template <std::size_t N>
double unitarity_error(const std::array<Complex, N>& m) {
    constexpr int n = N == 4 ? 2 : 4;
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Complex acc{};
            for (int k = 0; k < n; ++k) acc += std::conj(m[n * k + i]) * m[n * k + j];
            err = std::max(err, std::abs(acc - Complex(i == j ? 1.0 : 0.0, 0.0)));
        }
    }
    return err;
}

template <std::size_t N>
bool all_finite(const std::array<Complex, N>& m) {
    return std::all_of(m.begin(), m.end(),
                       [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

namespace gates {

inline Matrix2 identity2() { return {1, 0, 0, 1}; }

inline Matrix2 hadamard() {
    const double h = 1.0 / std::numbers::sqrt2;
    return {h, h, h, -h};
}

inline Matrix2 pauli_x() { return {0, 1, 1, 0}; }

/// sqrt(X), sqrt(Y), sqrt(W) with W = (X + Y) / sqrt(2).
inline Matrix2 sqrt_x() {
    const Complex a(0.5, 0.5), b(0.5, -0.5);
    return {a, b, b, a};
}

inline Matrix2 sqrt_y() {
    const Complex a(0.5, 0.5);
    return {a, -a, a, a};
}

inline Matrix2 sqrt_w() {
    const Complex a(0.5, 0.5);
    const Complex w = std::polar(1.0, std::numbers::pi / 4);
    const Complex b = Complex(0.5, -0.5) * std::conj(w);
    const Complex c = Complex(0.5, -0.5) * w;
    return {a, b, c, a};
}

inline Matrix4 identity4() {
    Matrix4 m{};
    for (int i = 0; i < 4; ++i) m[5 * i] = 1;
    return m;
}

inline Matrix4 cz() {
    Matrix4 m = identity4();
    m[15] = -1;
    return m;
}

inline Matrix4 cnot() {
    Matrix4 m{};
    m[0] = m[5] = 1;
    m[4 * 2 + 3] = m[4 * 3 + 2] = 1;
    return m;
}

inline Matrix4 swap() {
    Matrix4 m{};
    m[0] = m[15] = 1;
    m[4 * 1 + 2] = m[4 * 2 + 1] = 1;
    return m;
}

inline Matrix4 iswap() {
    Matrix4 m{};
    m[0] = m[15] = 1;
    m[4 * 1 + 2] = m[4 * 2 + 1] = Complex(0, 1);
    return m;
}

inline Matrix4 fsim(double theta, double phi) {
    Matrix4 m{};
    m[0] = 1;
    m[5] = m[10] = std::cos(theta);
    m[4 * 1 + 2] = m[4 * 2 + 1] = Complex(0, -std::sin(theta));
    m[15] = std::polar(1.0, -phi);
    return m;
}

}  // namespace gates

enum class GateKind { Matrix, Identity, CZ, CNOT, Swap, ISwap, FSim };

inline std::string_view gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::Matrix: return "matrix";
        case GateKind::Identity: return "identity";
        case GateKind::CZ: return "cz";
        case GateKind::CNOT: return "cnot";
        case GateKind::Swap: return "swap";
        case GateKind::ISwap: return "iswap";
        case GateKind::FSim: return "fsim";
    }
    return "matrix";
}

inline std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (GateKind k : {GateKind::Matrix, GateKind::Identity, GateKind::CZ, GateKind::CNOT, GateKind::Swap,
                       GateKind::ISwap, GateKind::FSim}) {
        if (gate_kind_name(k) == name) return k;
    }
    if (name == "cx") return GateKind::CNOT;
    if (name == "id") return GateKind::Identity;
    return std::nullopt;
}

/// Matrix of a named gate. fSim reads both angles; the others ignore them.
inline Matrix4 named_gate_matrix(GateKind kind, double theta = 0.0, double phi = 0.0) {
    switch (kind) {
        case GateKind::Identity: return gates::identity4();
        case GateKind::CZ: return gates::cz();
        case GateKind::CNOT: return gates::cnot();
        case GateKind::Swap: return gates::swap();
        case GateKind::ISwap: return gates::iswap();
        case GateKind::FSim: return gates::fsim(theta, phi);
        case GateKind::Matrix: break;
    }
    throw std::invalid_argument("matrix gates have no named matrix");
}

using Edge = std::pair<int, int>;

/// Connected simple graph over qubits 0..N-1. Edges are stored with
/// first < second and sorted; an edge's id is its position.
class CircuitGraph {
   public:
    CircuitGraph() = default;

    CircuitGraph(int num_qubits, std::vector<Edge> edges) : num_qubits_(num_qubits) {
        if (num_qubits < 1) {
            throw std::invalid_argument("graph needs at least one qubit");
        }
        for (auto& [a, b] : edges) {
            if (a < 0 || b < 0 || a >= num_qubits || b >= num_qubits) {
                throw std::invalid_argument("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                            ") references a qubit out of range");
            }
            if (a == b) {
                throw std::invalid_argument("self-loop on qubit " + std::to_string(a));
            }
            if (a > b) std::swap(a, b);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
            auto dup = *std::adjacent_find(edges.begin(), edges.end());
            throw std::invalid_argument("duplicate edge (" + std::to_string(dup.first) + "," +
                                        std::to_string(dup.second) + ")");
        }
        edges_ = std::move(edges);
        incident_.assign(static_cast<std::size_t>(num_qubits), {});
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            incident_[static_cast<std::size_t>(edges_[e].first)].push_back(static_cast<int>(e));
            incident_[static_cast<std::size_t>(edges_[e].second)].push_back(static_cast<int>(e));
        }
        if (!connected()) {
            throw std::invalid_argument("qubit connectivity graph is disconnected");
        }
    }

    int num_qubits() const { return num_qubits_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t num_edges() const { return edges_.size(); }
    const Edge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }

    /// Edge ids incident to a qubit, ascending.
    const std::vector<int>& incident_edges(int q) const { return incident_.at(static_cast<std::size_t>(q)); }
    int degree(int q) const { return static_cast<int>(incident_edges(q).size()); }

    int other_end(int edge_id, int q) const {
        const auto& e = edge(edge_id);
        return e.first == q ? e.second : e.first;
    }

    std::optional<int> edge_id(int a, int b) const {
        if (a > b) std::swap(a, b);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, b});
        if (it == edges_.end() || *it != Edge{a, b}) return std::nullopt;
        return static_cast<int>(it - edges_.begin());
    }

    bool has_edge(int a, int b) const { return edge_id(a, b).has_value(); }

    int max_degree() const {
        int m = 0;
        for (int q = 0; q < num_qubits_; ++q) m = std::max(m, degree(q));
        return m;
    }

    /// Qubits with fewer neighbours than the best-connected qubit. A regular
    /// graph has no such qubit, in which case every qubit counts.
    std::vector<int> boundary() const {
        const int dmax = max_degree();
        std::vector<int> out;
        for (int q = 0; q < num_qubits_; ++q) {
            if (degree(q) < dmax) out.push_back(q);
        }
        if (out.empty()) {
            for (int q = 0; q < num_qubits_; ++q) out.push_back(q);
        }
        return out;
    }

    friend bool operator==(const CircuitGraph& a, const CircuitGraph& b) {
        return a.num_qubits_ == b.num_qubits_ && a.edges_ == b.edges_;
    }

   private:
    bool connected() const {
        std::vector<bool> seen(static_cast<std::size_t>(num_qubits_), false);
        std::vector<int> stack{0};
        seen[0] = true;
        int count = 1;
        while (!stack.empty()) {
            int q = stack.back();
            stack.pop_back();
            for (int e : incident_edges(q)) {
                int r = other_end(e, q);
                if (!seen[static_cast<std::size_t>(r)]) {
                    seen[static_cast<std::size_t>(r)] = true;
                    ++count;
                    stack.push_back(r);
                }
            }
        }
        return count == num_qubits_;
    }

    int num_qubits_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incident_;
};

struct Gate {
    int k = 0;
    int l = 1;
    Matrix4 matrix = gates::identity4();
    int cycle = 0;
    GateKind kind = GateKind::Matrix;
    double theta = 0.0;  // fSim only
    double phi = 0.0;    // fSim only

    friend bool operator==(const Gate&, const Gate&) = default;
};

inline Gate make_gate(int k, int l, GateKind kind, double theta = 0.0, double phi = 0.0) {
    Gate g;
    g.k = k;
    g.l = l;
    g.kind = kind;
    g.theta = theta;
    g.phi = phi;
    g.matrix = named_gate_matrix(kind, theta, phi);
    return g;
}

inline Gate make_gate(int k, int l, const Matrix4& matrix) {
    Gate g;
    g.k = k;
    g.l = l;
    g.matrix = matrix;
    return g;
}

/// A 2x2 unitary on `qubit`, applied before the two-qubit gates of cycle
/// `moment`; moment == depth means after the last cycle.
struct SingleQubitGate {
    int qubit = 0;
    int moment = 0;
    Matrix2 matrix = gates::identity2();

    friend bool operator==(const SingleQubitGate&, const SingleQubitGate&) = default;
};

struct Circuit {
    CircuitGraph graph;
    std::vector<std::vector<Gate>> cycles;
    std::vector<SingleQubitGate> single_qubit_gates;
    /// Per-qubit unitaries left over by fusion on qubits that no two-qubit
    /// gate touches. Applied after the last cycle.
    std::map<int, Matrix2> trailing;

    int num_qubits() const { return graph.num_qubits(); }
    int depth() const { return static_cast<int>(cycles.size()); }

    std::size_t num_two_qubit_gates() const {
        std::size_t n = 0;
        for (const auto& c : cycles) n += c.size();
        return n;
    }

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Checks every structural invariant; throws std::invalid_argument naming
/// the offending gate.
inline void validate(const Circuit& c, double unitary_tol = 1e-10) {
    const int n = c.num_qubits();
    for (std::size_t ci = 0; ci < c.cycles.size(); ++ci) {
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (const auto& g : c.cycles[ci]) {
            const std::string where = "cycle " + std::to_string(ci) + " gate on (" + std::to_string(g.k) + "," +
                                      std::to_string(g.l) + ")";
            if (g.k < 0 || g.l < 0 || g.k >= n || g.l >= n) {
                throw std::invalid_argument(where + ": qubit index out of range");
            }
            if (g.k == g.l) {
                throw std::invalid_argument(where + ": both legs on the same qubit");
            }
            if (!c.graph.has_edge(g.k, g.l)) {
                throw std::invalid_argument(where + ": pair (" + std::to_string(g.k) + "," + std::to_string(g.l) +
                                            ") is not a graph edge");
            }
            for (int q : {g.k, g.l}) {
                if (used[static_cast<std::size_t>(q)]) {
                    throw std::invalid_argument(where + ": qubit " + std::to_string(q) +
                                                " appears twice in one cycle");
                }
                used[static_cast<std::size_t>(q)] = true;
            }
            if (g.cycle != static_cast<int>(ci)) {
                throw std::invalid_argument(where + ": cycle index mismatch");
            }
            if (!all_finite(g.matrix)) {
                throw std::invalid_argument(where + ": non-finite matrix entry");
            }
            if (unitarity_error(g.matrix) > unitary_tol) {
                throw std::invalid_argument(where + ": matrix is not unitary");
            }
        }
    }
    for (const auto& s : c.single_qubit_gates) {
        if (s.qubit < 0 || s.qubit >= n) {
            throw std::invalid_argument("single-qubit gate: qubit index " + std::to_string(s.qubit) +
                                        " out of range");
        }
        if (s.moment < 0 || s.moment > c.depth()) {
            throw std::invalid_argument("single-qubit gate on qubit " + std::to_string(s.qubit) + ": moment " +
                                        std::to_string(s.moment) + " out of range");
        }
        if (!all_finite(s.matrix) || unitarity_error(s.matrix) > unitary_tol) {
            throw std::invalid_argument("single-qubit gate on qubit " + std::to_string(s.qubit) +
                                        " is not a finite unitary");
        }
    }
    for (const auto& [q, m] : c.trailing) {
        if (q < 0 || q >= n) {
            throw std::invalid_argument("trailing gate qubit " + std::to_string(q) + " out of range");
        }
        if (!all_finite(m) || unitarity_error(m) > unitary_tol) {
            throw std::invalid_argument("trailing gate on qubit " + std::to_string(q) + " is not unitary");
        }
    }
}

/// Two-qubit gate factored as sum_s P[k', k, s] Q[l', l, s].
struct SplitGate {
    Tensor p;  ///< (2, 2, rank): (s_k', s_k, s)
    Tensor q;  ///< (2, 2, rank): (s_l', s_l, s)
    std::size_t rank = 0;
    bool unitary = true;  ///< false when the input failed the unitarity check
};

/// Operator-Schmidt split of a two-qubit matrix; each factor absorbs sqrt(s).
inline SplitGate gate_split(const Matrix4& m, double tolerance = kDefaultSvdTolerance) {
    if (!all_finite(m)) {
        throw std::invalid_argument("gate matrix has non-finite entries");
    }
    // Regroup O[(k' l'), (k l)] as M[(k' k), (l' l)].
    Tensor regrouped({2, 2, 2, 2});
    for (std::size_t kp = 0; kp < 2; ++kp)
        for (std::size_t lp = 0; lp < 2; ++lp)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    regrouped.at({kp, k, lp, l}) = m[4 * (2 * kp + lp) + (2 * k + l)];

    SvdResult svd = svd_factorize(regrouped, {0, 1}, tolerance);
    const std::size_t r = svd.kept_rank;
    SplitGate out;
    out.rank = r;
    out.unitary = unitarity_error(m) <= 1e-10;
    out.p = Tensor({2, 2, r});
    out.q = Tensor({2, 2, r});
    for (std::size_t s = 0; s < r; ++s) {
        const double root = std::sqrt(svd.singular_values[s]);
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) {
                out.p.at({a, b, s}) = svd.u.at({a, b, s}) * root;
                out.q.at({a, b, s}) = svd.v.at({s, a, b}) * root;
            }
        }
    }
    return out;
}

inline SplitGate gate_split(const Gate& g, double tolerance = kDefaultSvdTolerance) {
    return gate_split(g.matrix, tolerance);
}

/// Rebuilds the 4x4 matrix from a split; used to check reconstruction.
inline Matrix4 reconstruct(const SplitGate& sg) {
    Matrix4 m{};
    for (std::size_t kp = 0; kp < 2; ++kp)
        for (std::size_t lp = 0; lp < 2; ++lp)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) {
                    Complex acc{};
                    for (std::size_t s = 0; s < sg.rank; ++s) acc += sg.p.at({kp, k, s}) * sg.q.at({lp, l, s});
                    m[4 * (2 * kp + lp) + (2 * k + l)] = acc;
                }
    return m;
}

/// Folds every single-qubit gate into a neighbouring two-qubit gate: the
/// next one on that qubit, else the previous one, else a trailing unitary.
inline Circuit fuse_single_qubit_gates(const Circuit& c) {
    Circuit out;
    out.graph = c.graph;
    out.cycles = c.cycles;
    out.trailing = c.trailing;
    if (c.single_qubit_gates.empty()) {
        return out;
    }
    const int n = c.num_qubits();
    const int d = c.depth();

    std::vector<std::vector<const SingleQubitGate*>> by_moment(static_cast<std::size_t>(d + 1));
    for (const auto& s : c.single_qubit_gates) {
        by_moment.at(static_cast<std::size_t>(s.moment)).push_back(&s);
    }

    std::vector<Matrix2> pending(static_cast<std::size_t>(n), gates::identity2());
    std::vector<bool> has_pending(static_cast<std::size_t>(n), false);
    // (cycle, index in cycle) of the last two-qubit gate touching each qubit.
    std::vector<std::optional<std::pair<int, std::size_t>>> last_gate(static_cast<std::size_t>(n));

    for (int m = 0; m <= d; ++m) {
        for (const SingleQubitGate* s : by_moment[static_cast<std::size_t>(m)]) {
            auto q = static_cast<std::size_t>(s->qubit);
            pending[q] = matmul(s->matrix, pending[q]);
            has_pending[q] = true;
        }
        if (m == d) break;
        auto& cycle = out.cycles[static_cast<std::size_t>(m)];
        for (std::size_t gi = 0; gi < cycle.size(); ++gi) {
            Gate& g = cycle[gi];
            auto k = static_cast<std::size_t>(g.k), l = static_cast<std::size_t>(g.l);
            if (has_pending[k] || has_pending[l]) {
                g.matrix = matmul(g.matrix, kron(pending[k], pending[l]));
                g.kind = GateKind::Matrix;
                g.theta = g.phi = 0.0;
                pending[k] = pending[l] = gates::identity2();
                has_pending[k] = has_pending[l] = false;
            }
            last_gate[k] = last_gate[l] = std::pair{m, gi};
        }
    }

    for (int q = 0; q < n; ++q) {
        auto qi = static_cast<std::size_t>(q);
        if (!has_pending[qi]) continue;
        if (last_gate[qi]) {
            auto [ci, gi] = *last_gate[qi];
            Gate& g = out.cycles[static_cast<std::size_t>(ci)][gi];
            const Matrix4 local =
                g.k == q ? kron(pending[qi], gates::identity2()) : kron(gates::identity2(), pending[qi]);
            g.matrix = matmul(local, g.matrix);
            g.kind = GateKind::Matrix;
            g.theta = g.phi = 0.0;
        } else {
            auto it = out.trailing.find(q);
            out.trailing[q] = it == out.trailing.end() ? pending[qi] : matmul(it->second, pending[qi]);
        }
    }
    return out;
}

/// Parses a bitstring whose i-th character is the value of qubit i.
inline std::vector<int> parse_bitstring(std::string_view bits, int num_qubits) {
    if (static_cast<int>(bits.size()) != num_qubits) {
        throw std::invalid_argument("bitstring has " + std::to_string(bits.size()) + " characters, expected " +
                                    std::to_string(num_qubits));
    }
    std::vector<int> out;
    out.reserve(bits.size());
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument(std::string("bitstring contains non-binary character '") + ch + "'");
        }
        out.push_back(ch - '0');
    }
    return out;
}

enum class LatticeKind { Square, SycamoreLike };

/// Square: nearest neighbours on a rows x cols grid. Sycamore-like: rows are
/// staggered and each qubit couples diagonally to two qubits in the next row,
/// so interior qubits have degree 4 and corners may have degree 1.
inline CircuitGraph generate_lattice(LatticeKind kind, int rows, int cols) {
    if (rows < 2 || cols < 2) {
        throw std::invalid_argument("lattice needs at least 2 rows and 2 columns");
    }
    std::vector<Edge> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (kind == LatticeKind::Square) {
                if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
                if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
            } else if (r + 1 < rows) {
                edges.emplace_back(id(r, c), id(r + 1, c));
                const int c2 = r % 2 == 0 ? c - 1 : c + 1;
                if (c2 >= 0 && c2 < cols) edges.emplace_back(id(r, c), id(r + 1, c2));
            }
        }
    }
    return CircuitGraph(rows * cols, std::move(edges));
}

/// Rows x cols of the sycamore-like layouts at the processor sizes used for
/// benchmarking (54, 60, 66, 72, 104 qubits).
inline std::optional<std::pair<int, int>> sycamore_like_shape(int num_qubits) {
    switch (num_qubits) {
        case 54: return std::pair{9, 6};
        case 60: return std::pair{10, 6};
        case 66: return std::pair{11, 6};
        case 72: return std::pair{12, 6};
        case 104: return std::pair{13, 8};
        default: return std::nullopt;
    }
}

/// Drops one qubit and renumbers the ones above it.
inline CircuitGraph remove_qubit(const CircuitGraph& g, int qubit) {
    if (qubit < 0 || qubit >= g.num_qubits()) {
        throw std::invalid_argument("qubit to remove is out of range");
    }
    std::vector<Edge> edges;
    for (auto [a, b] : g.edges()) {
        if (a == qubit || b == qubit) continue;
        edges.emplace_back(a > qubit ? a - 1 : a, b > qubit ? b - 1 : b);
    }
    return CircuitGraph(g.num_qubits() - 1, std::move(edges));
}

/// Sycamore-like lattice by qubit count. 53 is the 54-qubit layout with
/// qubit 3 removed, matching a device with one inoperable qubit.
inline CircuitGraph sycamore_like_lattice(int num_qubits) {
    if (num_qubits == 53) {
        return remove_qubit(sycamore_like_lattice(54), 3);
    }
    const auto shape = sycamore_like_shape(num_qubits);
    if (!shape) {
        throw std::invalid_argument("no sycamore-like layout with " + std::to_string(num_qubits) +
                                    " qubits; use 53, 54, 60, 66, 72 or 104, or give rows and columns");
    }
    return generate_lattice(LatticeKind::SycamoreLike, shape->first, shape->second);
}

/// Proper edge colouring. Uses alternating-path recolouring, which reaches
/// max-degree colours on bipartite graphs; otherwise opens a new colour.
inline std::vector<int> edge_coloring(const CircuitGraph& g) {
    const int n = g.num_qubits();
    const int max_colors = 2 * std::max(1, g.max_degree()) + 1;
    std::vector<std::vector<int>> at(static_cast<std::size_t>(n), std::vector<int>(max_colors, -1));
    std::vector<int> color(g.num_edges(), -1);
    auto slot = [&](int v, int c) -> int& { return at[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)]; };
    auto free_color = [&](int v) {
        for (int c = 0; c < max_colors; ++c)
            if (slot(v, c) < 0) return c;
        throw std::logic_error("edge colouring ran out of colours");
    };
    auto assign = [&](int e, int c) {
        color[static_cast<std::size_t>(e)] = c;
        slot(g.edge(e).first, c) = e;
        slot(g.edge(e).second, c) = e;
    };
    auto unassign = [&](int e) {
        int c = color[static_cast<std::size_t>(e)];
        slot(g.edge(e).first, c) = -1;
        slot(g.edge(e).second, c) = -1;
        color[static_cast<std::size_t>(e)] = -1;
    };

    for (int e = 0; e < static_cast<int>(g.num_edges()); ++e) {
        const auto [u, v] = g.edge(e);
        const int a = free_color(u);
        if (slot(v, a) < 0) {
            assign(e, a);
            continue;
        }
        const int b = free_color(v);
        // Walk the a/b alternating path from v and swap its colours.
        std::vector<int> path;
        int x = v, want = a;
        while (slot(x, want) >= 0) {
            int pe = slot(x, want);
            path.push_back(pe);
            x = g.other_end(pe, x);
            want = want == a ? b : a;
        }
        bool reaches_u = false;
        for (int pe : path) reaches_u = reaches_u || g.edge(pe).first == u || g.edge(pe).second == u;
        if (reaches_u) {
            int fresh = 0;
            while (slot(u, fresh) >= 0 || slot(v, fresh) >= 0) ++fresh;
            assign(e, fresh);
            continue;
        }
        std::vector<int> old(path.size());
        for (std::size_t i = 0; i < path.size(); ++i) {
            old[i] = color[static_cast<std::size_t>(path[i])];
            unassign(path[i]);
        }
        for (std::size_t i = 0; i < path.size(); ++i) assign(path[i], old[i] == a ? b : a);
        assign(e, a);
    }
    return color;
}

enum class SingleQubitSet { SqrtXYW, None };

struct RqcOptions {
    int depth = 1;
    std::uint64_t seed = 0;
    GateKind gate = GateKind::FSim;
    double fsim_theta = std::numbers::pi / 2;
    double fsim_phi = std::numbers::pi / 6;
    /// Colour class activated at each cycle, repeated. Empty selects
    /// "ABCDCDAB" for four colours and 0, 1, ..., k-1 otherwise.
    std::vector<int> activation;
    SingleQubitSet single_qubit = SingleQubitSet::SqrtXYW;
};

/// Parses an activation pattern such as "ABCDCDAB".
inline std::vector<int> parse_activation(std::string_view pattern) {
    std::vector<int> out;
    for (char ch : pattern) {
        if (ch < 'A' || ch > 'Z') {
            throw std::invalid_argument("activation pattern must be upper-case letters");
        }
        out.push_back(ch - 'A');
    }
    return out;
}

inline Circuit generate_rqc(const CircuitGraph& graph, const RqcOptions& opt) {
    if (opt.depth < 1) {
        throw std::invalid_argument("circuit depth must be >= 1");
    }
    if (opt.gate != GateKind::FSim && opt.gate != GateKind::CZ && opt.gate != GateKind::ISwap) {
        throw std::invalid_argument("unsupported gate family for random circuits: " +
                                    std::string(gate_kind_name(opt.gate)));
    }
    const auto colors = edge_coloring(graph);
    const int num_colors = colors.empty() ? 1 : *std::max_element(colors.begin(), colors.end()) + 1;
    std::vector<int> activation = opt.activation;
    if (activation.empty()) {
        if (num_colors == 4) {
            activation = parse_activation("ABCDCDAB");
        } else {
            for (int c = 0; c < num_colors; ++c) activation.push_back(c);
        }
    }
    for (int a : activation) {
        if (a < 0 || a >= num_colors) {
            throw std::invalid_argument("activation pattern names colour " + std::to_string(a) + " but the graph has " +
                                        std::to_string(num_colors));
        }
    }

    std::mt19937_64 rng(opt.seed);
    const std::array<Matrix2, 3> rotations{gates::sqrt_x(), gates::sqrt_y(), gates::sqrt_w()};

    Circuit c;
    c.graph = graph;
    for (int m = 0; m <= opt.depth; ++m) {
        if (opt.single_qubit == SingleQubitSet::SqrtXYW) {
            for (int q = 0; q < graph.num_qubits(); ++q) {
                c.single_qubit_gates.push_back({q, m, rotations[rng() % rotations.size()]});
            }
        }
        if (m == opt.depth) break;
        const int active = activation[static_cast<std::size_t>(m) % activation.size()];
        std::vector<Gate> cycle;
        for (std::size_t e = 0; e < colors.size(); ++e) {
            if (colors[e] != active) continue;
            const auto [a, b] = graph.edge(static_cast<int>(e));
            Gate g = make_gate(a, b, opt.gate, opt.fsim_theta, opt.fsim_phi);
            g.cycle = m;
            cycle.push_back(g);
        }
        c.cycles.push_back(std::move(cycle));
    }
    return c;
}

}  // namespace tnsim
