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

#include <functional>
#include <vector>

#include "ephq/circuit.hpp"
#include "ephq/model.hpp"

namespace ephq {

// Builders act on the integer value x of an n-qubit register (qubit
// reg[r] carries bit r) and take a dimensionless angle θ. Callers fold grid
// spacings, coefficients and time steps into θ. A width of -1 means "just
// wide enough for the qubits used".

/// exp(-iθ (x - 2^{n-1})²): n phase shifts and n(n-1)/2 controlled phases,
/// with the constant part of the square kept in the tracked phase.
Circuit phase_x2(QubitRange reg, double theta, int n_qubits = -1);

/// exp(-iθ k²) in the momentum basis, k the signed momentum index of
/// basis vector m: inverse QFT, diagonal phases, QFT.
Circuit phase_p2(QubitRange reg, double theta, int n_qubits = -1);

/// The diagonal part of phase_p2 alone: |m> -> exp(-iθ k_m²)|m>.
Circuit momentum_phase(QubitRange reg, double theta, int n_qubits = -1);

/// exp(-iθ (x_a - 2^{n-1})(x_b - 2^{n-1})) for two registers of equal size:
/// n² controlled phases and 2n phase shifts.
Circuit phase_xx(QubitRange a, QubitRange b, double theta, int n_qubits = -1);

/// exp(-iθ n_e (x - 2^{n-1})) with n_e the occupation of qubit e.
Circuit ep_density_coupling(int e, QubitRange reg, double theta, int n_qubits = -1);

/// exp(-iθ (c†_i c_j + c†_j c_i)) under the Jordan-Wigner encoding.
Circuit jw_hopping(int i, int j, double theta, int n_qubits = -1);

struct PhononTerm {
    QubitRange reg;
    double theta = 0.0;
};

/// exp(-i (c†_i c_j + c†_j c_i)(θ0 + Σ θ_n (x_n - 2^{n-1}))). The phonon
/// dependence enters through controlled rotations on the last qubit of the
/// parity ladder, so the Jordan-Wigner string is built once.
Circuit hopping_with_phonons(int i, int j, double theta0, const std::vector<PhononTerm> &terms,
                             int n_qubits = -1);

/// Angle conversions for a grid of n_x qubits and spacing Δ = sqrt(2π/2^n_x).
struct TrotterAngles {
    static double mode(double omega, double dt, double spacing);
    static double density(double g, double omega, double dt, double spacing);
    static double phonon_pair(double k, double omega_n, double omega_m, double dt, double spacing);
};

/// One Trotter step for exp(-iH dt). Term order: kinetic P̃² of every mode,
/// potential X̃², phonon-phonon X̃X̃, density couplings, then hoppings (with
/// their off-diagonal phonon couplings) layered so that terms in one layer
/// touch disjoint qubit spans. Order 2 runs the first four groups and the
/// leading hopping layers at dt/2 around a full step of the last term.
Circuit trotter_step(const EPModel &model, const QubitLayout &layout, double dt, int order);

/// Same model with hoppings and couplings removed: Σ_n ω_n (P̃_n² + X̃_n²)/2.
EPModel phonon_part(const EPModel &model);

}  // namespace ephq
