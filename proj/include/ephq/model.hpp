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

#include <string>
#include <string_view>
#include <vector>

#include "ephq/common.hpp"

namespace ephq {

/// t_ij (c†_i c_j + c†_j c_i).
struct Hopping {
    int i = 0;
    int j = 0;
    double t = 0.0;
};

/// One oscillator: P²/2 + ω² X²/2 in unit-mass coordinates.
struct PhononMode {
    int site = 0;
    double omega = 1.0;
};

/// Electron-phonon coupling to the displacement X of `mode`.
///
/// For i != j the entry stands for g (c†_i c_j + c†_j c_i) X; for i == j it
/// stands for the density term g c†_i c_i X (not doubled).
struct DensityCoupling {
    int i = 0;
    int j = 0;
    int mode = 0;
    double g = 0.0;
};

/// K_nm X_n X_m between two distinct modes.
struct PhononCoupling {
    int n = 0;
    int m = 0;
    double k = 0.0;
};

enum class Boundary { open, periodic };

/// Lattice electron-phonon Hamiltonian H = H_e + H_p + H_ep for spinless
/// electrons. Immutable after construction.
class EPModel {
  public:
    EPModel(int n_orbitals, int n_x, std::vector<Hopping> hoppings,
            std::vector<PhononMode> modes,
            std::vector<DensityCoupling> density_couplings = {},
            std::vector<PhononCoupling> phonon_couplings = {});

    int n_orbitals() const { return n_orbitals_; }
    int n_modes() const { return static_cast<int>(modes_.size()); }
    /// Qubits per oscillator register.
    int n_x() const { return n_x_; }

    const std::vector<Hopping> &hoppings() const { return hoppings_; }
    const std::vector<PhononMode> &modes() const { return modes_; }
    const std::vector<DensityCoupling> &density_couplings() const {
        return density_couplings_;
    }
    const std::vector<PhononCoupling> &phonon_couplings() const {
        return phonon_couplings_;
    }

  private:
    int n_orbitals_;
    int n_x_;
    std::vector<Hopping> hoppings_;
    std::vector<PhononMode> modes_;
    std::vector<DensityCoupling> density_couplings_;
    std::vector<PhononCoupling> phonon_couplings_;
};

/// H = t Σ_<ij> (c†_i c_j + h.c.) + g Σ_i c†_i c_i X_i + Σ_i P_i²/2 + ω² X_i²/2
struct HolsteinModel {
    int n_sites = 2;
    double t = 1.0;
    double omega = 1.0;
    double g = 0.0;
    int n_x = 6;
    Boundary boundary = Boundary::open;
};

/// Dimensionless coupling g² / (2 ω² t). Throws for t <= 0 or ω <= 0.
double coupling_alpha(const HolsteinModel &h);

/// Inverse of coupling_alpha: the model with g = sqrt(2 α ω² t).
HolsteinModel holstein_from_alpha(int n_sites, double t, double omega,
                                  double alpha, int n_x);

/// Nearest-neighbour bonds of the chain; a periodic chain adds (0, n-1) when
/// n_sites > 2.
std::vector<std::pair<int, int>> chain_bonds(int n_sites, Boundary boundary);

EPModel holstein_to_ep(const HolsteinModel &h);

/// Qubit assignment: electron qubits first (Jordan-Wigner order), then one
/// n_x-qubit register per mode, then ancillas.
class QubitLayout {
  public:
    QubitLayout(int n_orbitals, int n_modes, int n_x, int n_ancilla = 0);
    static QubitLayout for_model(const EPModel &model, int n_ancilla = 0);

    int n_orbitals() const { return n_orbitals_; }
    int n_modes() const { return n_modes_; }
    int n_x() const { return n_x_; }
    int n_ancilla() const { return n_ancilla_; }

    int electron(int orbital) const;
    QubitRange electrons() const { return {0, n_orbitals_}; }
    QubitRange phonon(int mode) const;
    QubitRange phonons() const { return {n_orbitals_, n_modes_ * n_x_}; }
    QubitRange ancilla() const { return {system_qubits(), n_ancilla_}; }

    /// Electron and phonon qubits, excluding ancillas.
    int system_qubits() const { return n_orbitals_ + n_modes_ * n_x_; }
    int total_qubits() const { return system_qubits() + n_ancilla_; }

    bool matches(const EPModel &model) const;

  private:
    int n_orbitals_;
    int n_modes_;
    int n_x_;
    int n_ancilla_;
};

/// Reads a Holstein model description.
///
/// Grammar: one `key = value` pair per line, `#` starts a comment, blank
/// lines are ignored. Keys: sites, t, omega, g, alpha, n_x, boundary
/// (open|periodic). Giving both g and alpha is an error; alpha is converted
/// with holstein_from_alpha.
HolsteinModel parse_model(std::string_view text);
HolsteinModel load_model_file(const std::string &path);
std::string format_model(const HolsteinModel &h);

}  // namespace ephq
