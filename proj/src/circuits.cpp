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

#include "ephq/circuits.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace ephq {

namespace {

int width(int requested, int needed) {
    if (requested < 0) {
        return needed;
    }
    if (requested < needed) {
        throw std::out_of_range(fmt::format("circuit width {} below the {} qubits used", requested, needed));
    }
    return requested;
}

void check_register(QubitRange reg, const char *who) {
    if (reg.count < 1 || reg.first < 0) {
        throw std::invalid_argument(fmt::format("{}: empty register", who));
    }
    if (reg.count > 30) {
        throw std::invalid_argument(fmt::format("{}: register wider than 30 qubits", who));
    }
}

double pow2(int e) { return std::ldexp(1.0, e); }

/// Appends exp(-i (θ/2) P) for P = B_i Z...Z B_j, where B is X or Y and the
/// optional phonon terms make θ depend on register values.
void pauli_pair_exponential(Circuit &c, int i, int j, bool y_basis, double theta0,
                            const std::vector<PhononTerm> &terms) {
    auto to_z = [&](int q, bool undo) {
        if (y_basis) {
            c.add(rx(q, undo ? -kPi / 2 : kPi / 2));
        } else {
            c.add(hadamard(q));
        }
    };
    to_z(i, false);
    to_z(j, false);
    for (int q = i; q < j; ++q) {
        c.add(cnot(q, q + 1));
    }
    double offset = 0.0;
    for (const auto &t : terms) {
        offset += t.theta * pow2(t.reg.count - 1);
    }
    c.add(rz(j, theta0 - offset));
    for (const auto &t : terms) {
        for (int r = 0; r < t.reg.count; ++r) {
            // Controlled Rz(α) from reg[r] onto j.
            const double alpha = t.theta * pow2(r);
            c.add(rz(j, alpha / 2));
            c.add(cnot(t.reg[r], j));
            c.add(rz(j, -alpha / 2));
            c.add(cnot(t.reg[r], j));
        }
    }
    for (int q = j - 1; q >= i; --q) {
        c.add(cnot(q, q + 1));
    }
    to_z(i, true);
    to_z(j, true);
}

}  // namespace

Circuit phase_x2(QubitRange reg, double theta, int n_qubits) {
    check_register(reg, "phase_x2");
    const int n = reg.count;
    Circuit c(width(n_qubits, reg.end()));
    for (int r = 0; r < n; ++r) {
        c.add(phase_shift(reg[r], -theta * (pow2(2 * r) - pow2(n + r))));
    }
    for (int r = 0; r < n; ++r) {
        for (int s = r + 1; s < n; ++s) {
            c.add(controlled_phase(reg[r], reg[s], -theta * pow2(r + s + 1)));
        }
    }
    c.add_global_phase(-theta * pow2(2 * n - 2));
    return c;
}

Circuit momentum_phase(QubitRange reg, double theta, int n_qubits) {
    check_register(reg, "momentum_phase");
    const int n = reg.count;
    const int msb = n - 1;
    Circuit c(width(n_qubits, reg.end()));
    // k = x' - 2^{n-1} b with x' the low n-1 bits and b the top bit.
    for (int r = 0; r < msb; ++r) {
        c.add(phase_shift(reg[r], -theta * pow2(2 * r)));
    }
    c.add(phase_shift(reg[msb], -theta * pow2(2 * n - 2)));
    for (int r = 0; r < msb; ++r) {
        for (int s = r + 1; s < msb; ++s) {
            c.add(controlled_phase(reg[r], reg[s], -theta * pow2(r + s + 1)));
        }
        c.add(controlled_phase(reg[r], reg[msb], theta * pow2(n + r)));
    }
    return c;
}

Circuit phase_p2(QubitRange reg, double theta, int n_qubits) {
    check_register(reg, "phase_p2");
    Circuit c(width(n_qubits, reg.end()));
    for (const auto &g : qft_gates(reg, QftDirection::inverse)) {
        c.add(g);
    }
    c.append(momentum_phase(reg, theta, c.n_qubits()));
    for (const auto &g : qft_gates(reg, QftDirection::forward)) {
        c.add(g);
    }
    return c;
}

Circuit phase_xx(QubitRange a, QubitRange b, double theta, int n_qubits) {
    check_register(a, "phase_xx");
    check_register(b, "phase_xx");
    if (a.overlaps(b)) {
        throw std::invalid_argument("phase_xx: registers overlap");
    }
    if (a.count != b.count) {
        throw std::invalid_argument("phase_xx: registers differ in size");
    }
    const int n = a.count;
    Circuit c(width(n_qubits, std::max(a.end(), b.end())));
    for (int r = 0; r < n; ++r) {
        for (int s = 0; s < n; ++s) {
            c.add(controlled_phase(a[r], b[s], -theta * pow2(r + s)));
        }
    }
    for (int r = 0; r < n; ++r) {
        c.add(phase_shift(a[r], theta * pow2(n - 1 + r)));
    }
    for (int r = 0; r < n; ++r) {
        c.add(phase_shift(b[r], theta * pow2(n - 1 + r)));
    }
    c.add_global_phase(-theta * pow2(2 * n - 2));
    return c;
}

Circuit ep_density_coupling(int e, QubitRange reg, double theta, int n_qubits) {
    check_register(reg, "ep_density_coupling");
    if (e < 0 || reg.contains(e)) {
        throw std::invalid_argument("ep_density_coupling: electron qubit inside the register");
    }
    const int n = reg.count;
    Circuit c(width(n_qubits, std::max(e + 1, reg.end())));
    for (int r = 0; r < n; ++r) {
        c.add(controlled_phase(e, reg[r], -theta * pow2(r)));
    }
    c.add(phase_shift(e, theta * pow2(n - 1)));
    return c;
}

Circuit jw_hopping(int i, int j, double theta, int n_qubits) {
    return hopping_with_phonons(i, j, theta, {}, n_qubits);
}

Circuit hopping_with_phonons(int i, int j, double theta0, const std::vector<PhononTerm> &terms,
                             int n_qubits) {
    if (i < 0 || j <= i) {
        throw std::invalid_argument(fmt::format("hopping: need 0 <= i < j, got ({}, {})", i, j));
    }
    int needed = j + 1;
    for (size_t a = 0; a < terms.size(); ++a) {
        check_register(terms[a].reg, "hopping_with_phonons");
        if (terms[a].reg.first <= j && terms[a].reg.end() > i) {
            throw std::invalid_argument("hopping_with_phonons: register overlaps the fermion string");
        }
        for (size_t b = a + 1; b < terms.size(); ++b) {
            if (terms[a].reg.overlaps(terms[b].reg)) {
                throw std::invalid_argument("hopping_with_phonons: registers overlap");
            }
        }
        needed = std::max(needed, terms[a].reg.end());
    }
    Circuit c(width(n_qubits, needed));
    // c†_i c_j + h.c. = (X_i X_j + Y_i Y_j) Z_{i+1..j-1} / 2
    pauli_pair_exponential(c, i, j, false, theta0, terms);
    pauli_pair_exponential(c, i, j, true, theta0, terms);
    return c;
}

double TrotterAngles::mode(double omega, double dt, double spacing) {
    return dt * omega * spacing * spacing / 2;
}

double TrotterAngles::density(double g, double omega, double dt, double spacing) {
    return dt * g * spacing / std::sqrt(omega);
}

double TrotterAngles::phonon_pair(double k, double omega_n, double omega_m, double dt,
                                  double spacing) {
    return dt * k * spacing * spacing / std::sqrt(omega_n * omega_m);
}

EPModel phonon_part(const EPModel &model) {
    return EPModel(model.n_orbitals(), model.n_x(), {}, model.modes());
}

Circuit trotter_step(const EPModel &model, const QubitLayout &layout, double dt, int order) {
    if (!layout.matches(model)) {
        throw std::invalid_argument("trotter_step: layout does not match the model");
    }
    if (order != 1 && order != 2) {
        throw std::invalid_argument("trotter_step: order must be 1 or 2");
    }
    if (!std::isfinite(dt)) {
        throw std::invalid_argument("trotter_step: non-finite dt");
    }
    const int width = layout.total_qubits();
    const double spacing = std::sqrt(2 * kPi / double(1 << model.n_x()));
    const auto &modes = model.modes();

    using Term = std::function<void(Circuit &, double)>;
    std::vector<std::vector<Term>> groups;

    std::vector<Term> kinetic, potential, pairs, density;
    for (int n = 0; n < model.n_modes(); ++n) {
        const double w = modes[n].omega;
        const QubitRange reg = layout.phonon(n);
        kinetic.push_back([=](Circuit &c, double h) {
            c.append(phase_p2(reg, TrotterAngles::mode(w, h, spacing), width));
        });
        potential.push_back([=](Circuit &c, double h) {
            c.append(phase_x2(reg, TrotterAngles::mode(w, h, spacing), width));
        });
    }
    for (const auto &k : model.phonon_couplings()) {
        const QubitRange a = layout.phonon(k.n);
        const QubitRange b = layout.phonon(k.m);
        const double wn = modes[k.n].omega;
        const double wm = modes[k.m].omega;
        const double kk = k.k;
        pairs.push_back([=](Circuit &c, double h) {
            c.append(phase_xx(a, b, TrotterAngles::phonon_pair(kk, wn, wm, h, spacing), width));
        });
    }

    // Hoppings keyed by (i < j), collecting off-diagonal couplings.
    struct Bond {
        double t = 0.0;
        std::vector<std::pair<int, double>> couplings;  // (mode, g)
    };
    std::map<std::pair<int, int>, Bond> bonds;
    std::vector<std::pair<int, int>> bond_order;
    auto bond = [&](int i, int j) -> Bond & {
        auto key = std::minmax(i, j);
        auto [it, fresh] = bonds.try_emplace({key.first, key.second});
        if (fresh) {
            bond_order.push_back(it->first);
        }
        return it->second;
    };
    for (const auto &h : model.hoppings()) {
        bond(h.i, h.j).t += h.t;
    }
    for (const auto &g : model.density_couplings()) {
        if (g.i == g.j) {
            const int e = layout.electron(g.i);
            const QubitRange reg = layout.phonon(g.mode);
            const double w = modes[g.mode].omega;
            const double gg = g.g;
            density.push_back([=](Circuit &c, double h) {
                c.append(ep_density_coupling(e, reg, TrotterAngles::density(gg, w, h, spacing), width));
            });
        } else {
            bond(g.i, g.j).couplings.emplace_back(g.mode, g.g);
        }
    }

    for (auto *g : {&kinetic, &potential, &pairs, &density}) {
        if (!g->empty()) {
            groups.push_back(std::move(*g));
        }
    }

    // Greedy layering of bonds by disjoint spans.
    std::vector<std::vector<std::pair<int, int>>> layers;
    for (const auto &key : bond_order) {
        QubitRange span{key.first, key.second - key.first + 1};
        bool placed = false;
        for (auto &layer : layers) {
            bool clash = std::any_of(layer.begin(), layer.end(), [&](const auto &other) {
                return span.overlaps({other.first, other.second - other.first + 1});
            });
            if (!clash) {
                layer.push_back(key);
                placed = true;
                break;
            }
        }
        if (!placed) {
            layers.push_back({key});
        }
    }
    for (const auto &layer : layers) {
        std::vector<Term> terms;
        for (const auto &key : layer) {
            const Bond &b = bonds.at(key);
            const int i = layout.electron(key.first);
            const int j = layout.electron(key.second);
            std::vector<std::pair<QubitRange, double>> coup;
            for (auto [mode, g] : b.couplings) {
                coup.emplace_back(layout.phonon(mode), g / std::sqrt(modes[mode].omega));
            }
            const double t = b.t;
            terms.push_back([=](Circuit &c, double h) {
                std::vector<PhononTerm> pt;
                for (auto [reg, gs] : coup) {
                    pt.push_back({reg, h * gs * spacing});
                }
                c.append(hopping_with_phonons(i, j, h * t, pt, width));
            });
        }
        groups.push_back(std::move(terms));
    }

    std::vector<Term> flat;
    for (auto &g : groups) {
        for (auto &t : g) {
            flat.push_back(std::move(t));
        }
    }
    Circuit c(width);
    if (flat.empty()) {
        return c;
    }
    if (order == 1) {
        for (auto &t : flat) {
            t(c, dt);
        }
        return c;
    }
    for (size_t k = 0; k + 1 < flat.size(); ++k) {
        flat[k](c, dt / 2);
    }
    flat.back()(c, dt);
    for (size_t k = flat.size() - 1; k-- > 0;) {
        flat[k](c, dt / 2);
    }
    return c;
}

}  // namespace ephq
