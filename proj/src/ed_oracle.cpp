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

#include "ephq/ed_oracle.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "ephq/grid_hamiltonian.hpp"

namespace ephq {

namespace {

void enumerate(int site, int remaining, std::vector<int> &cur, std::vector<std::vector<int>> &out) {
    if (site == static_cast<int>(cur.size())) {
        out.push_back(cur);
        return;
    }
    for (int n = 0; n <= remaining; ++n) {
        cur[site] = n;
        enumerate(site + 1, remaining - n, cur, out);
    }
    cur[site] = 0;
}

}  // namespace

FockBasis::FockBasis(int n_sites, int n_cut) : n_sites_(n_sites), n_cut_(n_cut) {
    if (n_sites < 1 || n_cut < 0) {
        throw std::invalid_argument("FockBasis: need n_sites >= 1 and n_cut >= 0");
    }
    std::vector<int> cur(static_cast<size_t>(n_sites), 0);
    enumerate(0, n_cut, cur, occupations_);
    for (size_t k = 0; k < occupations_.size(); ++k) {
        int total = 0;
        for (int n : occupations_[k]) {
            total += n;
        }
        totals_.push_back(total);
        lookup_.emplace(occupations_[k], static_cast<long>(k));
    }
}

int FockBasis::electron_site(size_t index) const {
    return static_cast<int>(index / occupations_.size());
}

const std::vector<int> &FockBasis::occupations(size_t index) const {
    return occupations_[index % occupations_.size()];
}

int FockBasis::total_phonons(size_t index) const { return totals_[index % occupations_.size()]; }

long FockBasis::index_of(int site, const std::vector<int> &occ) const {
    if (site < 0 || site >= n_sites_) {
        return -1;
    }
    auto it = lookup_.find(occ);
    if (it == lookup_.end()) {
        return -1;
    }
    return static_cast<long>(site) * static_cast<long>(occupations_.size()) + it->second;
}

size_t fock_dimension(int n_sites, int n_cut) {
    // C(n_cut + n_sites, n_sites) by the multiplicative formula.
    size_t c = 1;
    for (int k = 1; k <= n_sites; ++k) {
        c = c * static_cast<size_t>(n_cut + k) / static_cast<size_t>(k);
    }
    return c * static_cast<size_t>(n_sites);
}

Eigen::VectorXd deterministic_start(size_t dimension, uint32_t seed) {
    std::mt19937 rng(seed);
    Eigen::VectorXd v(static_cast<Eigen::Index>(dimension));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = 0.5 + static_cast<double>(rng()) / 4294967296.0;
    }
    return v;
}

LanczosResult lanczos_ground(const std::function<void(const Eigen::VectorXd &, Eigen::VectorXd &)> &op,
                             size_t dimension, double tol, int max_iter,
                             const Eigen::VectorXd *start) {
    const auto dim = static_cast<Eigen::Index>(dimension);
    if (dim == 0) {
        throw std::invalid_argument("lanczos_ground: empty space");
    }
    Eigen::VectorXd v = start ? *start : deterministic_start(dimension);
    if (v.size() != dim || v.norm() == 0) {
        throw std::invalid_argument("lanczos_ground: bad start vector");
    }
    v.normalize();
    const int max_steps = static_cast<int>(std::min<Eigen::Index>(max_iter, dim));
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    Eigen::VectorXd w;
    LanczosResult result;

    auto ritz = [&](int m, Eigen::VectorXd &y) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            t(k, k) = alpha[k];
            if (k + 1 < m) {
                t(k, k + 1) = t(k + 1, k) = beta[k];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        y = es.eigenvectors().col(0);
        return es.eigenvalues()[0];
    };

    for (int step = 0; step < max_steps; ++step) {
        basis.push_back(v);
        op(v, w);
        const double a = v.dot(w);
        alpha.push_back(a);
        // Full reorthogonalization, twice for stability.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &b : basis) {
                w -= b.dot(w) * b;
            }
        }
        const double b = w.norm();
        const int m = step + 1;
        const bool exhausted = b < 1e-13 || m == max_steps;
        if (m % 5 == 0 || exhausted) {
            Eigen::VectorXd y;
            double value = ritz(m, y);
            double est = std::abs(b * y[m - 1]);
            if (est < tol || exhausted) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
                for (int k = 0; k < m; ++k) {
                    x += y[k] * basis[static_cast<size_t>(k)];
                }
                x.normalize();
                Eigen::VectorXd hx;
                op(x, hx);
                result.value = value;
                result.vector = x;
                result.iterations = m;
                result.residual = (hx - value * x).norm();
                if (result.residual > std::max(tol, 1e-9) * 10) {
                    throw ConvergenceError(fmt::format(
                        "lanczos_ground: residual {:.3g} after {} steps", result.residual, m));
                }
                return result;
            }
        }
        beta.push_back(b);
        v = w / b;
    }
    throw ConvergenceError("lanczos_ground: no convergence");
}

namespace {

HolsteinEdResult holstein_ed_once(const HolsteinModel &h, int n_cut) {
    if (h.n_sites < 1 || h.omega <= 0) {
        throw std::invalid_argument("holstein_ed: invalid model");
    }
    if (n_cut < 0 || n_cut > 85) {
        throw std::invalid_argument("holstein_ed: n_cut outside [0, 85]");
    }
    FockBasis basis(h.n_sites, n_cut);
    const size_t dim = basis.dimension();
    const double coupling = h.g / std::sqrt(2 * h.omega);
    std::vector<Eigen::Triplet<double>> entries;
    const auto bonds = chain_bonds(h.n_sites, h.boundary);
    for (size_t k = 0; k < dim; ++k) {
        const int site = basis.electron_site(k);
        std::vector<int> occ = basis.occupations(k);
        const long col = static_cast<long>(k);
        entries.emplace_back(col, col, h.omega * (basis.total_phonons(k) + 0.5 * h.n_sites));
        for (auto [i, j] : bonds) {
            int other = site == i ? j : site == j ? i : -1;
            if (other >= 0) {
                entries.emplace_back(basis.index_of(other, occ), col, h.t);
            }
        }
        if (coupling != 0.0) {
            int &n = occ[static_cast<size_t>(site)];
            // b† raises, b lowers the occupied site's oscillator.
            ++n;
            long up = basis.index_of(site, occ);
            if (up >= 0) {
                entries.emplace_back(up, col, coupling * std::sqrt(double(n)));
            }
            n -= 2;
            if (n >= 0) {
                entries.emplace_back(basis.index_of(site, occ), col, coupling * std::sqrt(double(n + 1)));
            }
            ++n;
        }
    }
    Eigen::SparseMatrix<double> hm(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    hm.setFromTriplets(entries.begin(), entries.end());
    auto res = lanczos_ground([&](const Eigen::VectorXd &in, Eigen::VectorXd &out) { out = hm * in; },
                              dim, 1e-11, 800);
    HolsteinEdResult out;
    out.energy = res.value;
    out.ground = res.vector;
    out.iterations = res.iterations;
    out.n_cut = n_cut;
    out.z.assign(static_cast<size_t>(n_cut + 1), 0.0);
    for (size_t k = 0; k < dim; ++k) {
        out.z[static_cast<size_t>(basis.total_phonons(k))] += res.vector[static_cast<Eigen::Index>(k)] *
                                                               res.vector[static_cast<Eigen::Index>(k)];
    }
    return out;
}

}  // namespace

HolsteinEdResult holstein_ed(const HolsteinModel &h, int n_cut, bool check_cutoff) {
    HolsteinEdResult out = holstein_ed_once(h, n_cut);
    if (check_cutoff) {
        HolsteinEdResult wider = holstein_ed_once(h, n_cut + 5);
        out.cutoff_delta = std::abs(wider.energy - out.energy);
        out.cutoff_converged = out.cutoff_delta < 1e-10;
    }
    return out;
}

GridEdResult grid_ed(const HolsteinModel &h, int n_x) {
    HolsteinModel m = h;
    m.n_x = n_x;
    EPModel model = holstein_to_ep(m);
    QubitLayout layout = QubitLayout::for_model(model);
    if (layout.system_qubits() > 22) {
        throw ResourceCapError("grid_ed: more than 22 system qubits");
    }
    GridHamiltonian ham(model, layout);
    const size_t dim = ham.dimension();
    Eigen::VectorXd start = deterministic_start(dim);
    const uint64_t electron_mask = (uint64_t(1) << layout.n_orbitals()) - 1;
    for (size_t i = 0; i < dim; ++i) {
        if (std::popcount(i & electron_mask) != 1) {
            start[static_cast<Eigen::Index>(i)] = 0;
        }
    }
    auto res = lanczos_ground([&](const Eigen::VectorXd &in, Eigen::VectorXd &out) { ham.apply(in, out); },
                              dim, 1e-9, 1000, &start);
    return {res.value, res.vector, res.iterations};
}

std::string format_golden(const std::vector<GoldenRow> &rows, const std::string &header) {
    std::string out;
    std::istringstream in(header);
    std::string line;
    while (std::getline(in, line)) {
        out += "# " + line + "\n";
    }
    size_t width = 0;
    for (const auto &r : rows) {
        width = std::max(width, r.z.size());
    }
    out += "alpha,E0";
    for (size_t n = 0; n < width; ++n) {
        out += fmt::format(",Z{}", n);
    }
    out += "\n";
    for (const auto &r : rows) {
        out += fmt::format("{:.17g},{:.17g}", r.alpha, r.energy);
        for (size_t n = 0; n < width; ++n) {
            out += fmt::format(",{:.17g}", n < r.z.size() ? r.z[n] : 0.0);
        }
        out += "\n";
    }
    return out;
}

std::vector<GoldenRow> parse_golden(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::vector<GoldenRow> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("alpha,E0", 0) != 0) {
                throw std::invalid_argument("golden data: missing 'alpha,E0' column header");
            }
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(ls, cell, ',')) {
            values.push_back(std::stod(cell));
        }
        if (values.size() < 2) {
            throw std::invalid_argument("golden data: short row");
        }
        rows.push_back({values[0], values[1], std::vector<double>(values.begin() + 2, values.end())});
    }
    return rows;
}

std::vector<GoldenRow> load_golden(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open golden data '{}'", path));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_golden(buf.str());
}

}  // namespace ephq
