// Copyright 2026 The ephq Authors
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

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ephq/common.hpp"

namespace ephq {

enum class GateKind : uint8_t {
    phase_shift,       ///< diag(1, e^{iθ})
    controlled_phase,  ///< diag(1, 1, 1, e^{iθ}); symmetric in its qubits
    rx,
    ry,
    rz,                ///< diag(e^{-iθ/2}, e^{iθ/2})
    hadamard,
    pauli_x,
    pauli_y,
    pauli_z,
    cnot,              ///< q0 controls, q1 is flipped
    swap,
};

/// One gate. `controls` is a bit mask of additional control qubits; it is
/// empty for every gate a builder emits and is set when a circuit is run
/// under QPE control.
struct Gate {
    GateKind kind = GateKind::hadamard;
    int q0 = 0;
    int q1 = -1;
    double angle = 0.0;
    uint64_t controls = 0;

    bool operator==(const Gate &) const = default;
};

Gate phase_shift(int q, double theta);
Gate controlled_phase(int c, int t, double theta);
Gate rx(int q, double theta);
Gate ry(int q, double theta);
Gate rz(int q, double theta);
Gate hadamard(int q);
Gate pauli_x(int q);
Gate pauli_y(int q);
Gate pauli_z(int q);
Gate cnot(int c, int t);
Gate swap_gate(int a, int b);

int gate_arity(GateKind kind);
/// Diagonal in the computational basis.
bool is_diagonal(GateKind kind);
const char *gate_name(GateKind kind);
/// Inverse of gate_name; throws std::invalid_argument for unknown names.
GateKind gate_kind_from_name(const std::string &name);
bool has_angle(GateKind kind);

/// The 2x2 or 4x4 matrix of a gate without its extra controls. For
/// two-qubit gates the row index is b0 + 2 b1 with b0 the bit of q0.
Eigen::MatrixXcd gate_matrix(const Gate &g);

/// Largest state the engine allocates unless raised; 28 qubits is 4 GiB.
int max_qubits();
void set_max_qubits(int n);

/// Worker threads for the gate kernels; 1 when built without OpenMP.
int thread_count();
void set_thread_count(int n);

/// Dense amplitudes over n qubits. Qubit q is bit q of the basis index.
class StateVector {
  public:
    /// The computational basis state |basis>.
    explicit StateVector(int n_qubits, uint64_t basis = 0);
    /// Takes ownership of amplitudes; the length must be a power of two.
    static StateVector from_amplitudes(std::vector<cplx> amplitudes);

    int n_qubits() const { return n_qubits_; }
    size_t size() const { return amps_.size(); }
    cplx &operator[](size_t i) { return amps_[i]; }
    const cplx &operator[](size_t i) const { return amps_[i]; }
    std::vector<cplx> &amplitudes() { return amps_; }
    const std::vector<cplx> &amplitudes() const { return amps_; }
    cplx *data() { return amps_.data(); }
    const cplx *data() const { return amps_.data(); }

    double norm() const;
    void normalize();

  private:
    StateVector() = default;
    int n_qubits_ = 0;
    std::vector<cplx> amps_;
};

void apply_gate(StateVector &psi, const Gate &g);
void apply_gates(StateVector &psi, std::span<const Gate> gates);

enum class QftDirection { forward, inverse };

/// Forward: |j> -> N^{-1/2} Σ_k e^{2πi jk/N} |k> on the register, whose
/// value is read little-endian from its qubits. Column m of this matrix is
/// the momentum eigenvector of p̃_m in the grid convention.
std::vector<Gate> qft_gates(QubitRange reg, QftDirection direction = QftDirection::forward);
void qft_register(StateVector &psi, QubitRange reg,
                  QftDirection direction = QftDirection::forward);

/// Marginal distribution of the register value.
std::vector<double> probabilities(const StateVector &psi, QubitRange reg);
/// <a|b>
cplx inner(const StateVector &a, const StateVector &b);
/// |high> ⊗ |low>: `low` occupies the low-order qubits.
StateVector tensor_product(const StateVector &low, const StateVector &high);

/// Writes amplitudes as little-endian interleaved float64 (re, im).
void dump_binary(const StateVector &psi, const std::string &path);

}  // namespace ephq
