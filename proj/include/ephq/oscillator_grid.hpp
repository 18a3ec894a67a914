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
#include <vector>

#include "ephq/common.hpp"

namespace ephq {

/// Fourier-grid discretization of one harmonic oscillator.
///
/// Positions x̃_i = (i - N/2)Δ for i in [0, N), momenta
/// p̃_m = [((m + N/2) mod N) - N/2]Δ, with Δ = sqrt(2π/N) so that the
/// position and momentum grids span the same interval [-L, L).
struct GridSpec {
    int n_x = 0;  ///< qubits per register; 0 when size is not a power of two
    int size = 0;
    double spacing = 0.0;
    double half_width = 0.0;
};

/// Grid stored on an n_x-qubit register, 1 <= n_x <= 16.
GridSpec make_grid(int n_x);

/// Grid of arbitrary even size. Used by the truncation diagnostics, which
/// scan grid sizes between powers of two.
GridSpec make_grid_of_size(int size);

double x_eigenvalue(const GridSpec &grid, int i);
double p_eigenvalue(const GridSpec &grid, int m);
/// The signed integer k with p̃_m = kΔ.
int momentum_index(const GridSpec &grid, int m);

struct SampledHermiteGauss {
    int level = 0;
    /// sqrt(Δ) φ_n(x̃_i) for each grid point.
    std::vector<double> amplitudes;
};

SampledHermiteGauss sampled_hg(const GridSpec &grid, int n);

/// Columns 0..levels-1 hold the sampled Hermite-Gauss vectors.
Eigen::MatrixXd sampled_hg_table(const GridSpec &grid, int levels);

/// Hermite-Gauss function φ_n(x) evaluated with the scaled three-term
/// recursion; safe for n in the thousands.
double hermite_gauss(int n, double x);

struct GridOperators {
    Eigen::MatrixXd position;      ///< X̃, diagonal
    Eigen::MatrixXcd momentum;     ///< P̃ = Σ_m p̃_m |p_m><p_m|
    Eigen::MatrixXd momentum_sq;   ///< P̃², real symmetric
    Eigen::MatrixXcd hamiltonian;  ///< P̃²/2 + X̃²/2
};

GridOperators operator_matrices(const GridSpec &grid);

/// P̃² alone; cheaper than operator_matrices when only the kinetic term is
/// needed.
Eigen::MatrixXd momentum_squared_matrix(const GridSpec &grid);

enum class Precision {
    automatic,  ///< quad for grids up to 256 points, double above
    double_precision,
    quad,
};

/// Per-level deviations of the truncated oscillator from the exact one.
struct TruncationReport {
    GridSpec grid;
    Precision precision = Precision::double_precision;
    std::vector<double> energies;
    std::vector<double> energy_residual;      ///< |Ẽ_n - (n + 1/2)|
    std::vector<double> overlap_deficit;      ///< |1 - |<φ̃_n|χ_n>||
    std::vector<double> commutator_residual;  ///< ||([X̃,P̃] - i)|φ̃_n>||
};

/// Dense diagonalization of H̃_h. Eigenvectors are sign-fixed so that their
/// largest-magnitude entry is positive. Requires size <= 4096.
TruncationReport truncation_report(const GridSpec &grid,
                                   Precision precision = Precision::automatic);

/// 10 exp[-(0.51 N_x - 0.765 N_ph)], clamped to at most 1.
double epsilon_bound(double grid_size, double n_ph);

/// Largest N_ph with epsilon_bound(grid_size, N_ph) <= eps; 0 if none.
int max_nph(int grid_size, double eps);

/// Number of leading levels whose commutator residual stays below eps.
int measured_nph(const TruncationReport &report, double eps);

struct ErrorLawFit {
    double eps = 0.0;
    /// (N_ph, minimal grid size reaching it)
    std::vector<std::pair<int, int>> points;
    double slope = 0.0;
    double intercept = 0.0;
};

/// Scans even grid sizes in [min_size, max_size] (double precision),
/// extracts the minimal size supporting each N_ph at accuracy eps and fits
/// size = slope * N_ph + intercept by least squares.
ErrorLawFit fit_error_law(double eps, int min_size, int max_size, int step = 2);

}  // namespace ephq
