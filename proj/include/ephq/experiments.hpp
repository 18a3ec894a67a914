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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ephq/ed_oracle.hpp"
#include "ephq/model.hpp"
#include "ephq/qpe.hpp"
#include "ephq/stateprep.hpp"

namespace ephq {

inline constexpr const char *kVersion = "0.1.0";

/// Ordered key/value pairs written as `# key = value` header lines.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// "# ephq <version>", "# command: <name>", then one line per entry.
std::string csv_header(const std::string &command, const ConfigEcho &config);

/// Columns: n_x, n, energy, energy_residual, overlap_deficit,
/// commutator_residual, epsilon_bound; one row per level of every grid.
std::string run_truncation_study(const std::vector<int> &n_x_list);

struct SweepConfig {
    std::vector<double> alphas{0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
    int n_sites = 2;
    double t = 1.0;
    double omega = 1.0;
    int n_x = 6;
    int prep_steps = 6;
    uint64_t seed = 1;
    /// Ansatz parameters to use instead of optimizing.
    std::optional<VariationalParams> params;
    PolaronSchedule schedule;
    PhononConfig phonon;
    int n_cut = 60;
    /// Concurrent α points; each holds its own joint state.
    int threads = 1;

    ConfigEcho echo() const;
};

struct SweepRow {
    double alpha = 0.0;
    double e_qpe = 0.0;
    double e_ed = 0.0;
    double sigma = 0.0;
    std::vector<double> z_qpe;
    std::vector<double> z_ed;
    /// Empty on success.
    std::string error;
};

struct SweepResult {
    SweepConfig config;
    double prep_fidelity = 0.0;
    std::vector<SweepRow> rows;
};

/// For each α: Fock-space reference, prepared input, two-pass QPE energy
/// and phonon distribution of the conditioned state. Rows come back in the
/// order of config.alphas; a failing α keeps its error text and the sweep
/// continues.
/// Throws ResourceCapError before any work when the widest QPE register
/// would exceed max_qubits().
SweepResult run_polaron_sweep(const SweepConfig &config);

/// Columns: alpha, E_qpe, E_ed, abs_err, Z0_qpe, Z0_ed, status.
std::string format_sweep_csv(const SweepResult &r);
/// Columns: alpha, n, Z_qpe, Z_ed.
std::string format_distribution_csv(const SweepResult &r);

enum class CouplingRange { local, all_to_all };

struct ResourceConfig {
    std::vector<int> sites{2, 4, 8};
    int n_x = 6;
    double dt = 0.05;
    int order = 2;
    double t = 1.0;
    double omega = 1.0;
    double g = 1.0;

    ConfigEcho echo() const;
};

/// Holstein chain (local) or every electron density coupled to every mode.
EPModel resource_model(int n_sites, CouplingRange range, const ResourceConfig &config);

/// The electron-phonon coupling gates of one first-order step, in model
/// order: density terms as ep_density_coupling, off-diagonal ones as
/// hopping_with_phonons without the bare hopping.
Circuit coupling_circuit(const EPModel &model, const QubitLayout &layout, double dt);

struct ResourceRow {
    CouplingRange range = CouplingRange::local;
    int n_sites = 0;
    int qubits = 0;
    int phonon_qubits = 0;
    /// Whole Trotter step.
    int gates = 0;
    int two_qubit = 0;
    int depth = 0;
    /// Coupling gates alone.
    int coupling_two_qubit = 0;
    int coupling_depth = 0;
};

struct ResourceTable {
    std::vector<ResourceRow> rows;
    /// Log-log slopes against N of the coupling gates.
    double local_depth_exponent = 0.0;
    double all_to_all_two_qubit_exponent = 0.0;
};

ResourceTable run_resources(const ResourceConfig &config);
/// Columns: coupling, N, qubits, phonon_qubits, gates, two_qubit, depth,
/// coupling_two_qubit, coupling_depth, followed by comment lines with the fitted exponents.
std::string format_resources_csv(const ResourceConfig &config, const ResourceTable &t);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

/// Reference rows from holstein_ed, convergence-checked.
std::vector<GoldenRow> golden_rows(const std::vector<double> &alphas, int n_cut, double t = 1.0,
                                   double omega = 1.0);

}  // namespace ephq
