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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ephq/circuit.hpp"
#include "ephq/model.hpp"

namespace ephq {

/// Parameters of the N_S-step Gaussian ansatz on one n_x-qubit register.
/// Step s applies exp(-iρ_p P̃²), exp(-iρ_x X̃²), then Rx(θx) Ry(θy) Rz(θz)
/// on every qubit of the register.
struct VariationalParams {
    int n_x = 0;
    int steps = 0;
    /// Per step: ρ_p, ρ_x, then (θx, θy, θz) for qubits 0..n_x-1.
    std::vector<double> values;

    VariationalParams() = default;
    VariationalParams(int n_x, int steps);

    static int per_step(int n_x) { return 2 + 3 * n_x; }
    size_t size() const { return values.size(); }
    double &rho_p(int s) { return values[index(s)]; }
    double &rho_x(int s) { return values[index(s) + 1]; }
    double &theta(int s, int q, int axis) { return values[index(s) + 2 + 3 * q + axis]; }
    double rho_p(int s) const { return values[index(s)]; }
    double rho_x(int s) const { return values[index(s) + 1]; }
    double theta(int s, int q, int axis) const { return values[index(s) + 2 + 3 * q + axis]; }
    bool is_rotation(size_t k) const { return k % static_cast<size_t>(per_step(n_x)) >= 2; }

  private:
    size_t index(int s) const { return static_cast<size_t>(s * per_step(n_x)); }
};

/// The ansatz as gates on `reg`; applied to the register's basis state 0.
Circuit ansatz_circuit(const VariationalParams &p, QubitRange reg, int n_qubits = -1);

/// |<φ_v|χ_0>|² with χ_0 the sampled ground state normalized on the grid,
/// computed by running ansatz_circuit on the statevector engine.
double ansatz_fidelity(const VariationalParams &p);

struct PrepOptions {
    double target = 0.998;
    int max_restarts = 8;
    int max_sweeps = 4000;
    /// Sweeps stop once a full sweep gains less than this.
    double min_gain = 1e-10;
};

struct PrepResult {
    VariationalParams params;
    double fidelity = 0.0;
    bool reached_target = false;
    int restarts = 0;
    int sweeps = 0;
};

/// Maximizes the fidelity with the grid ground state by sequential
/// coordinate ascent: rotation angles are solved exactly from three
/// evaluations (the objective is sinusoidal in each), quadratic-phase
/// angles by a bracketing scan followed by golden-section search. Each
/// restart draws uniform random parameters from a seeded generator; the
/// best objective never decreases. Stops at the target or when the restart
/// budget is spent, in which case reached_target is false.
PrepResult optimize_gaussian(int n_x, int steps, uint64_t seed, const PrepOptions &options = {});

/// Prepares (|site 0> - sgn(t)|site 1>)/sqrt(2), the single-electron ground
/// state of t (c†_0 c_1 + h.c.), on electron qubits e0 and e1.
Circuit electron_ground_2site(double t, int e0 = 0, int e1 = 1, int n_qubits = -1);

/// Electron ground state of the hopping on a 2-orbital model times the
/// ansatz state on every phonon register. Requires p.n_x == model.n_x().
StateVector assemble_input(const EPModel &model, const QubitLayout &layout,
                           const VariationalParams &p);

/// Text form: `n_x = ..`, `steps = ..`, then `value.<k> = ..` lines.
std::string format_params(const VariationalParams &p, double fidelity = -1.0);
VariationalParams parse_params(std::string_view text);
VariationalParams load_params(const std::string &path);

}  // namespace ephq
