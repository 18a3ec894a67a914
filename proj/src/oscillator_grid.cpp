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

#include "ephq/oscillator_grid.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <stdexcept>
#include <boost/math/constants/constants.hpp>
#include <cmath>

#include "float128_eigen.hpp"

namespace ephq {

namespace {

using boost::multiprecision::float128;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

template <class R>
R pi_v() {
    return boost::math::constants::pi<R>();
}

/// φ_n(x) by the normalized three-term recursion. The running pair is
/// rescaled whenever it grows large, with the scale carried in log form so
/// that the Gaussian seed never underflows.
template <class R>
R hermite_gauss_impl(int n, R x) {
    using std::exp;
    using std::log;
    using std::sqrt;
    R log_scale = -x * x / 2 - log(pi_v<R>()) / 4;
    R prev = 0;
    R cur = 1;
    const R big = R(1e150);
    for (int k = 0; k < n; ++k) {
        R next = sqrt(R(2) / R(k + 1)) * x * cur - sqrt(R(k) / R(k + 1)) * prev;
        prev = cur;
        cur = next;
        if (abs(cur) > big) {
            cur /= big;
            prev /= big;
            log_scale += log(big);
        }
    }
    if (cur == 0) {
        return 0;
    }
    return cur * exp(log_scale);
}

template <class R>
struct GridData {
    int size;
    R spacing;
    std::vector<R> x;
    std::vector<R> cos_table;  // cos(2π j / N)
    std::vector<R> sin_table;
};

template <class R>
GridData<R> grid_data(const GridSpec &grid) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    GridData<R> d;
    d.size = grid.size;
    d.spacing = sqrt(R(2) * pi_v<R>() / R(grid.size));
    d.x.resize(grid.size);
    d.cos_table.resize(grid.size);
    d.sin_table.resize(grid.size);
    for (int i = 0; i < grid.size; ++i) {
        d.x[i] = R(i - grid.size / 2) * d.spacing;
        R angle = R(2) * pi_v<R>() * R(i) / R(grid.size);
        d.cos_table[i] = cos(angle);
        d.sin_table[i] = sin(angle);
    }
    return d;
}

/// First rows of the circulant momentum matrices: P̃ = A + iB and P̃².
/// Entry (i, j) depends on (i - j) mod N only.
template <class R>
void momentum_circulants(const GridData<R> &d, std::vector<R> &re, std::vector<R> &im,
                         std::vector<R> &sq) {
    const int n = d.size;
    re.assign(n, R(0));
    im.assign(n, R(0));
    sq.assign(n, R(0));
    for (int diff = 0; diff < n; ++diff) {
        R a = 0, b = 0, c = 0;
        for (int k = -n / 2; k < n / 2; ++k) {
            int j = static_cast<int>(((static_cast<long long>(diff) * k) % n + n) % n);
            R kr = R(k);
            a += kr * d.cos_table[j];
            b += kr * d.sin_table[j];
            c += kr * kr * d.cos_table[j];
        }
        re[diff] = a * d.spacing / R(n);
        im[diff] = b * d.spacing / R(n);
        sq[diff] = c * d.spacing * d.spacing / R(n);
    }
}

template <class R>
using Mat = Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>;
template <class R>
using Vec = Eigen::Matrix<R, Eigen::Dynamic, 1>;

template <class R>
Mat<R> circulant(const std::vector<R> &row) {
    const int n = static_cast<int>(row.size());
    Mat<R> m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = row[((i - j) % n + n) % n];
        }
    }
    return m;
}

template <class R>
TruncationReport truncation_report_impl(const GridSpec &grid, Precision tag) {
    using std::abs;
    using std::sqrt;
    const int n = grid.size;
    auto d = grid_data<R>(grid);
    std::vector<R> re, im, sq;
    momentum_circulants(d, re, im, sq);
    Mat<R> a = circulant(re);
    Mat<R> b = circulant(im);
    Mat<R> h = circulant(sq) / R(2);
    Vec<R> x(n);
    for (int i = 0; i < n; ++i) {
        x(i) = d.x[i];
        h(i, i) += d.x[i] * d.x[i] / R(2);
    }

    Eigen::SelfAdjointEigenSolver<Mat<R>> solver(h);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError(fmt::format("truncation_report: diagonalization failed for N_x={}", n));
    }
    Mat<R> vecs = solver.eigenvectors();
    for (int col = 0; col < n; ++col) {
        Eigen::Index arg = 0;
        vecs.col(col).cwiseAbs().maxCoeff(&arg);
        if (vecs(arg, col) < 0) {
            vecs.col(col) = -vecs.col(col);
        }
    }

    Mat<R> chi(n, n);
    const R sqrt_spacing = sqrt(d.spacing);
    for (int level = 0; level < n; ++level) {
        for (int i = 0; i < n; ++i) {
            chi(i, level) = sqrt_spacing * hermite_gauss_impl<R>(level, d.x[i]);
        }
    }

    Mat<R> x_vecs = x.asDiagonal() * vecs;
    Mat<R> comm_re = x.asDiagonal() * (a * vecs) - a * x_vecs;
    Mat<R> comm_im = x.asDiagonal() * (b * vecs) - b * x_vecs - vecs;

    TruncationReport report;
    report.grid = grid;
    report.precision = tag;
    report.energies.resize(n);
    report.energy_residual.resize(n);
    report.overlap_deficit.resize(n);
    report.commutator_residual.resize(n);
    for (int level = 0; level < n; ++level) {
        R energy = solver.eigenvalues()(level);
        R overlap = abs(vecs.col(level).dot(chi.col(level)));
        R comm = sqrt(comm_re.col(level).squaredNorm() + comm_im.col(level).squaredNorm());
        report.energies[level] = static_cast<double>(energy);
        report.energy_residual[level] = static_cast<double>(abs(energy - (R(level) + R(1) / R(2))));
        report.overlap_deficit[level] = static_cast<double>(abs(R(1) - overlap));
        report.commutator_residual[level] = static_cast<double>(comm);
    }
    return report;
}

}  // namespace

GridSpec make_grid(int n_x) {
    if (n_x < 1 || n_x > 16) {
        throw std::invalid_argument(fmt::format("make_grid: n_x={} outside [1, 16]", n_x));
    }
    return make_grid_of_size(1 << n_x);
}

GridSpec make_grid_of_size(int size) {
    if (size < 2 || size % 2 != 0) {
        throw std::invalid_argument(fmt::format("make_grid_of_size: size={} must be even and >= 2", size));
    }
    GridSpec g;
    g.size = size;
    g.n_x = is_power_of_two(size) ? std::countr_zero(static_cast<unsigned>(size)) : 0;
    g.spacing = std::sqrt(2.0 * kPi / size);
    g.half_width = size * g.spacing / 2.0;
    return g;
}

double x_eigenvalue(const GridSpec &grid, int i) {
    if (i < 0 || i >= grid.size) {
        throw std::out_of_range(fmt::format("x_eigenvalue: index {} outside [0, {})", i, grid.size));
    }
    return (i - grid.size / 2) * grid.spacing;
}

int momentum_index(const GridSpec &grid, int m) {
    if (m < 0 || m >= grid.size) {
        throw std::out_of_range(fmt::format("p_eigenvalue: index {} outside [0, {})", m, grid.size));
    }
    return (m + grid.size / 2) % grid.size - grid.size / 2;
}

double p_eigenvalue(const GridSpec &grid, int m) { return momentum_index(grid, m) * grid.spacing; }

double hermite_gauss(int n, double x) {
    if (n < 0) {
        throw std::invalid_argument("hermite_gauss: negative level");
    }
    return hermite_gauss_impl<double>(n, x);
}

SampledHermiteGauss sampled_hg(const GridSpec &grid, int n) {
    if (n < 0 || n >= grid.size) {
        throw std::out_of_range(fmt::format("sampled_hg: level {} outside [0, {})", n, grid.size));
    }
    SampledHermiteGauss out;
    out.level = n;
    out.amplitudes.resize(grid.size);
    const double scale = std::sqrt(grid.spacing);
    for (int i = 0; i < grid.size; ++i) {
        out.amplitudes[i] = scale * hermite_gauss_impl<double>(n, x_eigenvalue(grid, i));
    }
    return out;
}

Eigen::MatrixXd sampled_hg_table(const GridSpec &grid, int levels) {
    if (levels < 0 || levels > grid.size) {
        throw std::out_of_range("sampled_hg_table: level count out of range");
    }
    Eigen::MatrixXd table(grid.size, levels);
    for (int n = 0; n < levels; ++n) {
        auto v = sampled_hg(grid, n);
        table.col(n) = Eigen::Map<Eigen::VectorXd>(v.amplitudes.data(), grid.size);
    }
    return table;
}

Eigen::MatrixXd momentum_squared_matrix(const GridSpec &grid) {
    auto d = grid_data<double>(grid);
    std::vector<double> re, im, sq;
    momentum_circulants(d, re, im, sq);
    return circulant(sq);
}

GridOperators operator_matrices(const GridSpec &grid) {
    auto d = grid_data<double>(grid);
    std::vector<double> re, im, sq;
    momentum_circulants(d, re, im, sq);
    const int n = grid.size;
    GridOperators ops;
    ops.position = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        ops.position(i, i) = d.x[i];
    }
    ops.momentum.resize(n, n);
    Eigen::MatrixXd a = circulant(re);
    Eigen::MatrixXd b = circulant(im);
    ops.momentum.real() = a;
    ops.momentum.imag() = b;
    ops.momentum_sq = circulant(sq);
    ops.hamiltonian = (ops.momentum_sq / 2.0).cast<cplx>();
    for (int i = 0; i < n; ++i) {
        ops.hamiltonian(i, i) += d.x[i] * d.x[i] / 2.0;
    }
    return ops;
}

TruncationReport truncation_report(const GridSpec &grid, Precision precision) {
    if (grid.size > 4096) {
        throw std::invalid_argument("truncation_report: grid size above 4096 is not supported");
    }
    if (precision == Precision::automatic) {
        precision = grid.size <= 256 ? Precision::quad : Precision::double_precision;
    }
    if (precision == Precision::quad) {
        return truncation_report_impl<float128>(grid, precision);
    }
    return truncation_report_impl<double>(grid, precision);
}

double epsilon_bound(double grid_size, double n_ph) {
    return std::min(1.0, 10.0 * std::exp(-(0.51 * grid_size - 0.765 * n_ph)));
}

int max_nph(int grid_size, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("max_nph: eps must lie in (0, 1)");
    }
    double raw = (0.51 * grid_size - std::log(10.0 / eps)) / 0.765;
    int n = static_cast<int>(std::floor(raw));
    // Guard the floor against rounding at exact boundaries.
    while (n > 0 && epsilon_bound(grid_size, n) > eps) {
        --n;
    }
    while (epsilon_bound(grid_size, n + 1) <= eps) {
        ++n;
    }
    return std::max(0, n);
}

int measured_nph(const TruncationReport &report, double eps) {
    int n = 0;
    while (n < static_cast<int>(report.commutator_residual.size()) &&
           report.commutator_residual[n] <= eps) {
        ++n;
    }
    return n;
}

ErrorLawFit fit_error_law(double eps, int min_size, int max_size, int step) {
    if (min_size < 2 || max_size < min_size || step < 2 || step % 2 != 0) {
        throw std::invalid_argument("fit_error_law: bad size range");
    }
    ErrorLawFit fit;
    fit.eps = eps;
    std::map<int, int> minimal_size;
    for (int size = min_size + (min_size % 2); size <= max_size; size += step) {
        auto report = truncation_report(make_grid_of_size(size), Precision::double_precision);
        int nph = measured_nph(report, eps);
        if (nph > 0 && !minimal_size.count(nph)) {
            minimal_size[nph] = size;
        }
    }
    // Keep the lower envelope: a size counts for N_ph only if no smaller
    // size already supports more levels.
    int best_size = std::numeric_limits<int>::max();
    for (auto it = minimal_size.rbegin(); it != minimal_size.rend(); ++it) {
        best_size = std::min(best_size, it->second);
        fit.points.emplace_back(it->first, best_size);
    }
    std::reverse(fit.points.begin(), fit.points.end());
    if (fit.points.size() < 2) {
        throw std::runtime_error("fit_error_law: not enough distinct N_ph values to fit");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(fit.points.size());
    for (auto [nph, size] : fit.points) {
        sx += nph;
        sy += size;
        sxx += double(nph) * nph;
        sxy += double(nph) * size;
    }
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / m;
    return fit;
}

}  // namespace ephq
