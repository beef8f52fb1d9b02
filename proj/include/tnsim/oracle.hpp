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

// Brute-force Schrodinger simulator. It works on the circuit IR alone and
// shares no code with the tensor kernels, so it can serve as ground truth.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tnsim/circuit.hpp"

namespace tnsim::oracle {

inline constexpr int kDefaultQubitCap = 26;

/// 2^N amplitudes; qubit 0 is the least significant bit of the index.
class StateVector {
   public:
    StateVector(int num_qubits, std::uint64_t basis_index, int cap = kDefaultQubitCap) : n_(num_qubits) {
        if (num_qubits < 1 || num_qubits > cap) {
            throw std::invalid_argument("state vector size " + std::to_string(num_qubits) +
                                        " qubits exceeds the oracle cap of " + std::to_string(cap));
        }
        amps_.assign(std::size_t{1} << num_qubits, Complex{});
        amps_.at(basis_index) = 1.0;
    }

    int num_qubits() const { return n_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex amplitude(std::uint64_t index) const { return amps_.at(index); }

    double norm() const {
        double acc = 0.0;
        for (const auto& a : amps_) acc += std::norm(a);
        return std::sqrt(acc);
    }

    void apply(int q, const Matrix2& m) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) continue;
            const Complex a0 = amps_[i], a1 = amps_[i | bit];
            amps_[i] = m[0] * a0 + m[1] * a1;
            amps_[i | bit] = m[2] * a0 + m[3] * a1;
        }
    }

    /// Matrix index is 2*bit(k) + bit(l).
    void apply(int k, int l, const Matrix4& m) {
        const std::size_t bk = std::size_t{1} << k, bl = std::size_t{1} << l;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & (bk | bl)) continue;
            const std::size_t idx[4] = {i, i | bl, i | bk, i | bk | bl};
            Complex in[4], out[4];
            for (int j = 0; j < 4; ++j) in[j] = amps_[idx[j]];
            for (int r = 0; r < 4; ++r) {
                out[r] = 0;
                for (int c = 0; c < 4; ++c) out[r] += m[4 * r + c] * in[c];
            }
            for (int j = 0; j < 4; ++j) amps_[idx[j]] = out[j];
        }
    }

   private:
    int n_;
    std::vector<Complex> amps_;
};

inline std::uint64_t basis_index(std::string_view bits, int num_qubits) {
    std::uint64_t idx = 0;
    const auto b = parse_bitstring(bits, num_qubits);
    for (int q = 0; q < num_qubits; ++q) {
        if (b[static_cast<std::size_t>(q)]) idx |= std::uint64_t{1} << q;
    }
    return idx;
}

inline void apply_moment(StateVector& sv, const Circuit& c, int moment) {
    for (const auto& s : c.single_qubit_gates) {
        if (s.moment == moment) sv.apply(s.qubit, s.matrix);
    }
}

inline void apply_cycle(StateVector& sv, const Circuit& c, int cycle) {
    for (const auto& g : c.cycles.at(static_cast<std::size_t>(cycle))) sv.apply(g.k, g.l, g.matrix);
}

inline StateVector full_state_evolve(const Circuit& c, std::string_view in_bits, int cap = kDefaultQubitCap) {
    StateVector sv(c.num_qubits(), basis_index(in_bits, c.num_qubits()), cap);
    for (int m = 0; m < c.depth(); ++m) {
        apply_moment(sv, c, m);
        apply_cycle(sv, c, m);
    }
    apply_moment(sv, c, c.depth());
    for (const auto& [q, m] : c.trailing) sv.apply(q, m);
    return sv;
}

inline Complex amplitude_oracle(const Circuit& c, std::string_view in_bits, std::string_view out_bits,
                                int cap = kDefaultQubitCap) {
    const StateVector sv = full_state_evolve(c, in_bits, cap);
    return sv.amplitude(basis_index(out_bits, c.num_qubits()));
}

}  // namespace tnsim::oracle
