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
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ephq/circuit.hpp"
#include "ephq/model.hpp"

namespace ephq {

/// How the controlled powers are simulated. `gate_level` runs the full
/// circuit (ancilla Hadamards, every gate under ancilla control, inverse QFT).
/// `sliced_powers` writes block a of the joint state as U^a|ψ>/sqrt(2^n) and
/// then runs the same inverse QFT; both give the same state.
enum class QpeBackend { automatic, gate_level, sliced_powers };

struct QpeConfig {
    int n_ancilla = 8;
    /// Evolution time of U; U^{2^k} is controlled by ancilla k.
    double t0 = 1.0;
    /// Energies are read in [e_off, e_off + 2π/t0).
    double e_off = 0.0;
    double dt = 0.05;
    int order = 2;
    QpeBackend backend = QpeBackend::automatic;
    /// Mass in the top bin at or above this raises SpectrumWindowError.
    double window_threshold = 1e-3;
    /// When false the tracked phase of U is dropped instead of becoming an
    /// ancilla phase shift.
    bool promote_global_phase = true;

    double bin_width() const;
    /// Throws std::invalid_argument for non-positive t0, dt, or an ancilla
    /// count outside [1, 16].
    void validate() const;
};

class SpectrumWindowError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// U = exp(+i (H - E_off) t0) on the system qubits.
class Evolution {
  public:
    virtual ~Evolution() = default;
    virtual int n_qubits() const = 0;
    /// One application of U, phase included.
    virtual void apply(StateVector &psi) const = 0;
    /// Gate form with the phase tracked, or nullptr when there is none.
    virtual const Circuit *circuit() const { return nullptr; }
};

/// Trotterized U: ceil(t0/dt) steps of trotter_step at step -t0/steps, with
/// the phase -E_off t0 added to the tracked phase.
class TrotterEvolution : public Evolution {
  public:
    TrotterEvolution(const EPModel &model, const QubitLayout &layout, const QpeConfig &cfg);

    int n_qubits() const override { return circuit_.n_qubits(); }
    void apply(StateVector &psi) const override;
    const Circuit *circuit() const override { return &circuit_; }
    int steps() const { return steps_; }

  private:
    int steps_;
    Circuit step_;
    Circuit circuit_;
    CompiledCircuit compiled_;
    double phase_;
};

/// U from a dense Hermitian matrix, exactly.
class DenseEvolution : public Evolution {
  public:
    DenseEvolution(const Eigen::MatrixXcd &h, const QpeConfig &cfg);

    int n_qubits() const override { return n_qubits_; }
    void apply(StateVector &psi) const override;

  private:
    int n_qubits_;
    Eigen::MatrixXcd u_;
};

struct EnergyDistribution {
    std::vector<double> energies;  ///< bin centres
    std::vector<double> probabilities;
    double bin_width = 0.0;

    size_t argmax() const;
};

struct QpeRun {
    EnergyDistribution distribution;
    /// System state conditioned on the ancilla reading `postselect_bin`,
    /// when one was requested and it has nonzero weight.
    std::optional<StateVector> postselected;
};

/// QPE with exact ancilla marginals. Ancillas sit above the system qubits.
/// Throws SpectrumWindowError when the top bin holds window_threshold or
/// more.
QpeRun run_qpe(const StateVector &input, const Evolution &u, const QpeConfig &cfg,
               std::optional<size_t> postselect_bin = std::nullopt);

/// Picks the post-selection bin once the distribution is known.
using BinChooser = std::function<size_t(const EnergyDistribution &)>;
QpeRun run_qpe(const StateVector &input, const Evolution &u, const QpeConfig &cfg, const BinChooser &choose);

/// run_qpe with a Trotterized evolution of the model.
EnergyDistribution qpe_distribution(const StateVector &input, const EPModel &model,
                                    const QubitLayout &layout, const QpeConfig &cfg);

struct EnergyEstimate {
    double energy = 0.0;
    double sigma = 0.0;
    /// Probability in the cluster around the argmax.
    double cluster_mass = 0.0;
    /// Set when the cluster holds less than half of the probability.
    bool no_dominant_peak = false;
};

/// Weighted mean over the bins within 2 of the argmax; σ is half a bin.
EnergyEstimate estimate_energy(const EnergyDistribution &d);

/// Bounds on the spectrum of the single-electron sector.
struct SpectrumBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// lower = Σ ω/2 - max row sum of |t| - max over sites of (g/√ω)²/(2ω),
/// the sum of the separate minima of hopping, oscillators and the density
/// shift. upper is `lower` plus a window that covers low-lying states.
SpectrumBounds spectrum_bounds(const EPModel &model);

struct PolaronSchedule {
    int coarse_ancilla = 8;
    double coarse_dt = 0.05;
    int fine_ancilla = 10;
    double fine_width = 2.0;
    /// Fraction of the fine window below the coarse estimate.
    double fine_below = 0.3;
    double fine_dt = 0.03;
    int order = 2;
};

struct PolaronEnergy {
    EnergyEstimate estimate;
    EnergyDistribution coarse;
    EnergyDistribution fine;
    QpeConfig coarse_config;
    QpeConfig fine_config;
    /// Input conditioned on the fine-pass argmax bin.
    StateVector polaron{1};
};

/// Two-pass energy estimate. The coarse pass reads a window from the
/// spectrum bounds, the input is conditioned on the argmax of the lowest
/// peak holding at least 1% of the mass, and a narrower fine pass around
/// that energy gives the estimate.
PolaronEnergy polaron_energy(const StateVector &input, const EPModel &model, const QubitLayout &layout,
                             const PolaronSchedule &schedule = {});

struct PhononConfig {
    int n_ancilla = 7;
    double dt = 0.005;
    int order = 2;
    int cutoff = 20;
};

/// Z(n) for n = 0..cutoff by QPE with the phonon part of the model; bin b
/// is total phonon number b. Requires every mode to share one ω.
std::vector<double> phonon_distribution(const StateVector &polaron, const EPModel &model,
                                        const QubitLayout &layout, const PhononConfig &cfg = {});

}  // namespace ephq
