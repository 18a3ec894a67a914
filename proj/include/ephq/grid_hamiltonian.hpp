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

#include "ephq/model.hpp"
#include "ephq/statevector.hpp"

namespace ephq {

/// The model Hamiltonian on the system qubits of a layout, in the grid
/// representation the circuits simulate:
///
///     H = Σ t_ij (c†_i c_j + h.c.) + Σ_n ω_n (P̃_n² + X̃_n²)/2
///       + Σ K_nm X̃_n X̃_m / sqrt(ω_n ω_m) + Σ g_ijn (c†_i c_j [+ h.c.]) X̃_n / sqrt(ω_n)
///
/// applied matrix-free. Ancilla qubits are not part of its space.
class GridHamiltonian {
  public:
    GridHamiltonian(const EPModel &model, const QubitLayout &layout);

    int n_qubits() const { return n_qubits_; }
    size_t dimension() const { return size_t(1) << n_qubits_; }

    void apply(const Eigen::VectorXcd &in, Eigen::VectorXcd &out) const;
    void apply(const Eigen::VectorXd &in, Eigen::VectorXd &out) const;

    /// <ψ|H|ψ> for a state over exactly the system qubits.
    double expectation(const StateVector &psi) const;

    /// Dense matrix; at most 12 qubits.
    Eigen::MatrixXd dense() const;

    /// Diagonal entry for basis state i (potential and coupling terms).
    double diagonal(uint64_t i) const { return diag_[i]; }

  private:
    template <class Vec>
    void apply_impl(const Vec &in, Vec &out) const;

    struct Hop {
        int i, j;
        double t;
        std::vector<std::pair<QubitRange, double>> couplings;  // (register, g / sqrt(ω))
    };

    int n_qubits_;
    int n_x_;
    double spacing_;
    std::vector<QubitRange> registers_;
    std::vector<double> kinetic_scale_;  // ω_n / 2
    Eigen::MatrixXd momentum_sq_;
    std::vector<double> diag_;
    std::vector<Hop> hops_;
};

}  // namespace ephq
