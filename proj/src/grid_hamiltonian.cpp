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

#include "ephq/grid_hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <tuple>

#include "ephq/oscillator_grid.hpp"

namespace ephq {

namespace {

inline int register_value(uint64_t i, QubitRange reg) {
    return static_cast<int>((i >> reg.first) & ((uint64_t(1) << reg.count) - 1));
}

}  // namespace

GridHamiltonian::GridHamiltonian(const EPModel &model, const QubitLayout &layout)
    : n_qubits_(layout.system_qubits()), n_x_(model.n_x()) {
    if (!layout.matches(model)) {
        throw std::invalid_argument("GridHamiltonian: layout does not match the model");
    }
    if (n_qubits_ > max_qubits()) {
        throw ResourceCapError("GridHamiltonian: system exceeds the qubit cap");
    }
    const GridSpec grid = make_grid(n_x_);
    spacing_ = grid.spacing;
    momentum_sq_ = momentum_squared_matrix(grid);
    const int half = grid.size / 2;
    for (int n = 0; n < model.n_modes(); ++n) {
        registers_.push_back(layout.phonon(n));
        kinetic_scale_.push_back(model.modes()[n].omega / 2);
    }

    std::map<std::pair<int, int>, size_t> hop_index;
    auto hop = [&](int a, int b) -> Hop & {
        auto [i, j] = std::minmax(a, b);
        auto it = hop_index.find({i, j});
        if (it == hop_index.end()) {
            it = hop_index.emplace(std::pair{i, j}, hops_.size()).first;
            hops_.push_back({layout.electron(i), layout.electron(j), 0.0, {}});
        }
        return hops_[it->second];
    };
    for (const auto &h : model.hoppings()) {
        hop(h.i, h.j).t += h.t;
    }

    diag_.assign(dimension(), 0.0);
    const auto &modes = model.modes();
    auto x_of = [&](uint64_t i, int mode) {
        return spacing_ * (register_value(i, registers_[mode]) - half);
    };
    std::vector<std::tuple<int, int, double>> density;  // (qubit, mode, g / sqrt(ω))
    for (const auto &g : model.density_couplings()) {
        const double scaled = g.g / std::sqrt(modes[g.mode].omega);
        if (g.i == g.j) {
            density.emplace_back(layout.electron(g.i), g.mode, scaled);
        } else {
            hop(g.i, g.j).couplings.emplace_back(layout.phonon(g.mode), scaled);
        }
    }
    for (uint64_t i = 0; i < dimension(); ++i) {
        double d = 0;
        for (int n = 0; n < model.n_modes(); ++n) {
            const double x = x_of(i, n);
            d += modes[n].omega * x * x / 2;
        }
        for (const auto &k : model.phonon_couplings()) {
            d += k.k * x_of(i, k.n) * x_of(i, k.m) / std::sqrt(modes[k.n].omega * modes[k.m].omega);
        }
        for (const auto &[q, mode, scaled] : density) {
            if (i >> q & 1) {
                d += scaled * x_of(i, mode);
            }
        }
        diag_[i] = d;
    }
}

template <class Vec>
void GridHamiltonian::apply_impl(const Vec &in, Vec &out) const {
    using Scalar = typename Vec::Scalar;
    const int64_t dim = static_cast<int64_t>(dimension());
    if (in.size() != dim) {
        throw std::invalid_argument("GridHamiltonian::apply: vector size mismatch");
    }
    out.resize(dim);
    const int n = 1 << n_x_;
    const int half = n / 2;
#pragma omp parallel for if (dim >= (int64_t(1) << 14))
    for (int64_t s = 0; s < dim; ++s) {
        const uint64_t u = static_cast<uint64_t>(s);
        Scalar acc = diag_[u] * in[s];
        for (size_t m = 0; m < registers_.size(); ++m) {
            const QubitRange reg = registers_[m];
            const int row = register_value(u, reg);
            const uint64_t base = u & ~(((uint64_t(1) << reg.count) - 1) << reg.first);
            Scalar k = 0;
            for (int col = 0; col < n; ++col) {
                k += momentum_sq_(row, col) * in[static_cast<int64_t>(base | (uint64_t(col) << reg.first))];
            }
            acc += kinetic_scale_[m] * k;
        }
        for (const auto &h : hops_) {
            const bool bi = u >> h.i & 1;
            const bool bj = u >> h.j & 1;
            if (bi == bj) {
                continue;
            }
            const uint64_t other = u ^ (uint64_t(1) << h.i) ^ (uint64_t(1) << h.j);
            const uint64_t between = ((uint64_t(1) << h.j) - 1) & ~((uint64_t(1) << (h.i + 1)) - 1);
            const double sign = (std::popcount(u & between) & 1) ? -1.0 : 1.0;
            double amp = h.t;
            for (const auto &[reg, scaled] : h.couplings) {
                amp += scaled * spacing_ * (register_value(u, reg) - half);
            }
            acc += sign * amp * in[static_cast<int64_t>(other)];
        }
        out[s] = acc;
    }
}

void GridHamiltonian::apply(const Eigen::VectorXcd &in, Eigen::VectorXcd &out) const {
    apply_impl(in, out);
}

void GridHamiltonian::apply(const Eigen::VectorXd &in, Eigen::VectorXd &out) const {
    apply_impl(in, out);
}

double GridHamiltonian::expectation(const StateVector &psi) const {
    if (psi.n_qubits() != n_qubits_) {
        throw std::invalid_argument("GridHamiltonian::expectation: state width mismatch");
    }
    Eigen::Map<const Eigen::VectorXcd> v(psi.data(), static_cast<Eigen::Index>(psi.size()));
    Eigen::VectorXcd in = v;
    Eigen::VectorXcd out;
    apply(in, out);
    return in.dot(out).real();
}

Eigen::MatrixXd GridHamiltonian::dense() const {
    if (n_qubits_ > 12) {
        throw ResourceCapError("GridHamiltonian::dense: more than 12 qubits");
    }
    const int64_t dim = static_cast<int64_t>(dimension());
    Eigen::MatrixXd h(dim, dim);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim), col;
    for (int64_t c = 0; c < dim; ++c) {
        e.setZero();
        e[c] = 1;
        apply(e, col);
        h.col(c) = col;
    }
    return h;
}

}  // namespace ephq
