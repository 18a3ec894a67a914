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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ephq/statevector.hpp"

namespace ephq {

/// Ordered gate list plus a classically tracked global phase φ. The
/// operator a circuit stands for is e^{iφ} times the product of its gates.
class Circuit {
  public:
    explicit Circuit(int n_qubits = 0) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    const std::vector<Gate> &gates() const { return gates_; }
    size_t size() const { return gates_.size(); }
    double global_phase() const { return global_phase_; }

    /// Throws std::out_of_range if the gate touches a qubit >= n_qubits.
    void add(const Gate &g);
    void add_global_phase(double phi);
    /// Appends `other`'s gates and phase; other.n_qubits() must not exceed ours.
    void append(const Circuit &other);
    void reserve(size_t n) { gates_.reserve(n); }

  private:
    int n_qubits_;
    std::vector<Gate> gates_;
    double global_phase_ = 0.0;
};

/// Gates only; the tracked phase is left out.
void apply_circuit(StateVector &psi, const Circuit &c);
/// Gates followed by the tracked phase.
void apply_circuit_with_phase(StateVector &psi, const Circuit &c);

/// Dense matrix of the circuit, by default including e^{iφ}. Limited to 12
/// qubits.
Eigen::MatrixXcd circuit_unitary(const Circuit &c, bool include_global_phase = true);

/// Every gate gains `control` as an extra control and the tracked phase
/// becomes PhaseShift(control, φ). The result spans n_qubits qubits.
Circuit controlled_by(const Circuit &c, int control, int n_qubits);

struct ResourceCount {
    std::map<GateKind, int> per_kind;
    int total = 0;
    int two_qubit = 0;
    /// Greedy layering: each gate starts once all its qubits are free.
    int depth = 0;

    int count(GateKind kind) const;
};

ResourceCount resource_count(const Circuit &c);

/// Text form, one gate per line:
///
///     # qubits <n>
///     # global_phase <phi>
///     <NAME> <q>[,<q2>] [<angle>]
///
/// NAME is one of PH CPH RX RY RZ H X Y Z CNOT SWAP; angles are written
/// with 17 significant digits. Other lines starting with '#' are comments.
std::string export_circuit(const Circuit &c);
Circuit parse_circuit(std::string_view text);

/// A circuit prepared for repeated application: runs of consecutive
/// diagonal gates are merged into one phase table over the qubits they
/// touch.
class CompiledCircuit {
  public:
    explicit CompiledCircuit(const Circuit &c, int max_block_qubits = 16);

    int n_qubits() const { return n_qubits_; }
    double global_phase() const { return global_phase_; }
    /// Number of passes over the state per application.
    size_t pass_count() const { return ops_.size(); }
    /// Gates only, like apply_circuit.
    void apply(StateVector &psi) const;

  private:
    struct DiagonalBlock {
        std::vector<int> qubits;
        std::vector<cplx> table;
        /// For each byte of the state index, the block index contributed by it.
        std::vector<std::vector<uint32_t>> byte_maps;
    };
    struct Op {
        bool diagonal = false;
        Gate gate;
        int block = -1;
    };
    void apply_block(StateVector &psi, const DiagonalBlock &b) const;

    int n_qubits_;
    double global_phase_;
    std::vector<Op> ops_;
    std::vector<DiagonalBlock> blocks_;
};

}  // namespace ephq
