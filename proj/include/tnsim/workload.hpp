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

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "tnsim/circuit.hpp"

namespace tnsim {

/// Per-gate and readout error probabilities.
struct ErrorModel {
    double e1 = 0.0;  ///< single-qubit gate
    double e2 = 0.0;  ///< two-qubit gate
    double eq = 0.0;  ///< readout, per measured qubit

    void validate() const {
        for (double e : {e1, e2, eq}) {
            if (!(e >= 0.0 && e < 1.0)) throw std::invalid_argument("error rates must lie in [0, 1)");
        }
    }
};

/// Rates reported for the Sycamore device.
inline constexpr ErrorModel kSycamoreErrors{0.0016, 0.0062, 0.038};

struct WorkloadEstimate {
    double log_fidelity = 0.0;
    double fidelity = 1.0;
    double samples_exact = 9.0;  ///< (3/F)^2 before rounding
    std::uint64_t samples = 9;   ///< smallest integer >= (3/F)^2
    double sigma = 1.0 / 3.0;    ///< 1/sqrt(samples)
    std::size_t single_qubit_gates = 0;
    std::size_t two_qubit_gates = 0;
    std::size_t measured_qubits = 0;
};

class WorkloadOverflow : public std::overflow_error {
   public:
    WorkloadOverflow(const std::string& what, double log_f) : std::overflow_error(what), log_fidelity(log_f) {}
    double log_fidelity;
};

/// Fidelity from counts, accumulated in the log domain.
inline WorkloadEstimate estimate_workload(std::size_t single_qubit_gates, std::size_t two_qubit_gates,
                                          std::size_t measured_qubits, const ErrorModel& model) {
    model.validate();
    WorkloadEstimate w;
    w.single_qubit_gates = single_qubit_gates;
    w.two_qubit_gates = two_qubit_gates;
    w.measured_qubits = measured_qubits;
    w.log_fidelity = static_cast<double>(single_qubit_gates) * std::log1p(-model.e1) +
                     static_cast<double>(two_qubit_gates) * std::log1p(-model.e2) +
                     static_cast<double>(measured_qubits) * std::log1p(-model.eq);
    w.fidelity = std::exp(w.log_fidelity);
    const double f2 = w.fidelity * w.fidelity;
    if (!(f2 > 0.0) || 9.0 / f2 >= 0x1p63) {
        throw WorkloadOverflow("fidelity too small for a finite sample count (ln F = " + std::to_string(w.log_fidelity) + ")",
                               w.log_fidelity);
    }
    w.samples_exact = 9.0 / f2;
    w.samples = static_cast<std::uint64_t>(std::ceil(w.samples_exact));
    w.sigma = 1.0 / std::sqrt(static_cast<double>(w.samples));
    return w;
}

/// Every gate in the circuit counts once; all qubits are read out.
inline WorkloadEstimate estimate_workload(const Circuit& c, const ErrorModel& model) {
    return estimate_workload(c.single_qubit_gates.size() + c.trailing.size(),
                             static_cast<std::size_t>(c.num_two_qubit_gates()),
                             static_cast<std::size_t>(c.num_qubits()), model);
}

}  // namespace tnsim
