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
#include <map>
#include <string>
#include <vector>

#include "ephq/model.hpp"

namespace ephq {

/// Single-electron Holstein basis: electron site × phonon occupations
/// (n_0..n_{S-1}) with Σ n_i <= n_cut. Index order: electron site major,
/// then occupation tuples in lexicographic order.
class FockBasis {
  public:
    FockBasis(int n_sites, int n_cut);

    int n_sites() const { return n_sites_; }
    int n_cut() const { return n_cut_; }
    size_t dimension() const { return occupations_.size() * static_cast<size_t>(n_sites_); }
    size_t phonon_configs() const { return occupations_.size(); }

    int electron_site(size_t index) const;
    const std::vector<int> &occupations(size_t index) const;
    int total_phonons(size_t index) const;
    /// Index of (site, occupations); -1 when outside the cutoff.
    long index_of(int site, const std::vector<int> &occ) const;

  private:
    int n_sites_;
    int n_cut_;
    std::vector<std::vector<int>> occupations_;
    std::vector<int> totals_;
    std::map<std::vector<int>, long> lookup_;
};

/// n_sites · C(n_cut + n_sites, n_sites)
size_t fock_dimension(int n_sites, int n_cut);

struct LanczosResult {
    double value = 0.0;
    Eigen::VectorXd vector;
    int iterations = 0;
    double residual = 0.0;
};

/// Lowest eigenpair of a real symmetric operator by Lanczos with full
/// reorthogonalization. The start vector is a fixed pseudo-random vector
/// unless one is given. Throws ConvergenceError when the residual
/// ||Hv - λv|| stays above tol after max_iter steps.
LanczosResult lanczos_ground(const std::function<void(const Eigen::VectorXd &, Eigen::VectorXd &)> &op,
                             size_t dimension, double tol = 1e-10, int max_iter = 600,
                             const Eigen::VectorXd *start = nullptr);

/// Deterministic start vector: uniform entries in [0.5, 1.5) from a fixed
/// Mersenne Twister seed.
Eigen::VectorXd deterministic_start(size_t dimension, uint32_t seed = 12345);

struct HolsteinEdResult {
    double energy = 0.0;
    Eigen::VectorXd ground;
    /// Z(n), n = 0..n_cut: weight of the total-phonon-number-n sector.
    std::vector<double> z;
    int n_cut = 0;
    /// |E(n_cut) - E(n_cut + 5)|, or -1 when not checked.
    double cutoff_delta = -1.0;
    bool cutoff_converged = false;
    int iterations = 0;
};

/// Ground state of the single-electron Holstein model in the Fock basis:
///
///     H = t Σ_<ij> (c†_i c_j + h.c.) + ω Σ_i (b†_i b_i + 1/2)
///       + g / sqrt(2ω) Σ_i c†_i c_i (b_i + b†_i)
///
/// which equals the model's H with X_i = (b_i + b†_i)/sqrt(2ω). With
/// check_cutoff the run is repeated at n_cut + 5.
HolsteinEdResult holstein_ed(const HolsteinModel &h, int n_cut, bool check_cutoff = true);

struct GridEdResult {
    double energy = 0.0;
    Eigen::VectorXd ground;  ///< over the system qubits of the model's layout
    int iterations = 0;
};

/// Ground state in the single-electron sector of the grid Hamiltonian the
/// circuits simulate (n_x qubits per site). Dimension capped at 2^22.
GridEdResult grid_ed(const HolsteinModel &h, int n_x);

/// Golden data: one row per α with E0 and Z(0..n_max).
struct GoldenRow {
    double alpha = 0.0;
    double energy = 0.0;
    std::vector<double> z;
};

std::string format_golden(const std::vector<GoldenRow> &rows, const std::string &header);
std::vector<GoldenRow> parse_golden(const std::string &text);
std::vector<GoldenRow> load_golden(const std::string &path);

}  // namespace ephq
