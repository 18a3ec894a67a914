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

#include "ephq/circuit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace ephq {

namespace {

uint64_t own_mask(const Gate &g) {
    uint64_t m = uint64_t(1) << g.q0;
    if (gate_arity(g.kind) == 2) {
        m |= uint64_t(1) << g.q1;
    }
    return m;
}

/// Phase angle a diagonal gate applies to basis state i.
double diagonal_angle(const Gate &g, uint64_t i) {
    if ((i & g.controls) != g.controls) {
        return 0.0;
    }
    const bool on = (i & own_mask(g)) == own_mask(g);
    switch (g.kind) {
    case GateKind::phase_shift:
    case GateKind::controlled_phase:
        return on ? g.angle : 0.0;
    case GateKind::pauli_z:
        return on ? kPi : 0.0;
    case GateKind::rz:
        return on ? g.angle / 2 : -g.angle / 2;
    default:
        throw std::logic_error("diagonal_angle: not a diagonal gate");
    }
}

constexpr int64_t kParallelSize = int64_t(1) << 15;

}  // namespace

void Circuit::add(const Gate &g) {
    const uint64_t all = own_mask(g) | g.controls;
    if (g.q0 < 0 || (gate_arity(g.kind) == 2 && (g.q1 < 0 || g.q1 == g.q0)) ||
        std::bit_width(all) > static_cast<unsigned>(n_qubits_)) {
        throw std::out_of_range(fmt::format("Circuit::add: {} on ({}, {}) does not fit {} qubits",
                                            gate_name(g.kind), g.q0, g.q1, n_qubits_));
    }
    if (g.controls & own_mask(g)) {
        throw std::invalid_argument("Circuit::add: control coincides with a gate qubit");
    }
    gates_.push_back(g);
}

void Circuit::add_global_phase(double phi) {
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("Circuit::add_global_phase: non-finite phase");
    }
    global_phase_ += phi;
}

void Circuit::append(const Circuit &other) {
    if (other.n_qubits_ > n_qubits_) {
        throw std::out_of_range("Circuit::append: other circuit is wider");
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    global_phase_ += other.global_phase_;
}

void apply_circuit(StateVector &psi, const Circuit &c) {
    if (c.n_qubits() > psi.n_qubits()) {
        throw std::invalid_argument("apply_circuit: circuit wider than state");
    }
    apply_gates(psi, c.gates());
}

void apply_circuit_with_phase(StateVector &psi, const Circuit &c) {
    apply_circuit(psi, c);
    const cplx f = std::polar(1.0, c.global_phase());
    for (auto &a : psi.amplitudes()) {
        a *= f;
    }
}

Eigen::MatrixXcd circuit_unitary(const Circuit &c, bool include_global_phase) {
    if (c.n_qubits() > 12) {
        throw ResourceCapError("circuit_unitary: more than 12 qubits");
    }
    const size_t dim = size_t(1) << c.n_qubits();
    Eigen::MatrixXcd u(dim, dim);
    for (size_t col = 0; col < dim; ++col) {
        StateVector psi(c.n_qubits(), col);
        apply_circuit(psi, c);
        for (size_t row = 0; row < dim; ++row) {
            u(row, col) = psi[row];
        }
    }
    if (include_global_phase) {
        u *= std::polar(1.0, c.global_phase());
    }
    return u;
}

Circuit controlled_by(const Circuit &c, int control, int n_qubits) {
    if (control < 0 || control >= n_qubits || n_qubits < c.n_qubits()) {
        throw std::out_of_range("controlled_by: bad control or width");
    }
    Circuit out(n_qubits);
    out.reserve(c.size() + 1);
    const uint64_t bit = uint64_t(1) << control;
    for (Gate g : c.gates()) {
        if ((own_mask(g) | g.controls) & bit) {
            throw std::invalid_argument("controlled_by: control qubit is used by the circuit");
        }
        g.controls |= bit;
        out.add(g);
    }
    out.add(phase_shift(control, c.global_phase()));
    return out;
}

int ResourceCount::count(GateKind kind) const {
    auto it = per_kind.find(kind);
    return it == per_kind.end() ? 0 : it->second;
}

ResourceCount resource_count(const Circuit &c) {
    ResourceCount r;
    std::vector<int> ready(static_cast<size_t>(c.n_qubits()), 0);
    for (const auto &g : c.gates()) {
        ++r.per_kind[g.kind];
        ++r.total;
        uint64_t mask = own_mask(g) | g.controls;
        if (std::popcount(mask) >= 2) {
            ++r.two_qubit;
        }
        int start = 0;
        for (uint64_t m = mask; m; m &= m - 1) {
            start = std::max(start, ready[std::countr_zero(m)]);
        }
        for (uint64_t m = mask; m; m &= m - 1) {
            ready[std::countr_zero(m)] = start + 1;
        }
        r.depth = std::max(r.depth, start + 1);
    }
    return r;
}

std::string export_circuit(const Circuit &c) {
    std::string out = fmt::format("# qubits {}\n# global_phase {:.17g}\n", c.n_qubits(), c.global_phase());
    for (const auto &g : c.gates()) {
        if (g.controls) {
            throw std::invalid_argument("export_circuit: gates with extra controls have no text form");
        }
        out += gate_name(g.kind);
        out += fmt::format(" {}", g.q0);
        if (gate_arity(g.kind) == 2) {
            out += fmt::format(",{}", g.q1);
        }
        if (has_angle(g.kind)) {
            out += fmt::format(" {:.17g}", g.angle);
        }
        out += '\n';
    }
    return out;
}

Circuit parse_circuit(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int n_qubits = -1;
    double phase = 0.0;
    std::vector<Gate> gates;
    int line_no = 0;
    auto fail = [&](const std::string &why) {
        throw std::invalid_argument(fmt::format("circuit text line {}: {}", line_no, why));
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) {
            continue;
        }
        if (head[0] == '#') {
            std::string key = head.size() > 1 ? head.substr(1) : "";
            if (key.empty()) {
                ls >> key;
            }
            if (key == "qubits") {
                if (!(ls >> n_qubits) || n_qubits < 0) {
                    fail("bad qubit count");
                }
            } else if (key == "global_phase") {
                if (!(ls >> phase)) {
                    fail("bad global phase");
                }
            }
            continue;
        }
        Gate g;
        try {
            g.kind = gate_kind_from_name(head);
        } catch (const std::invalid_argument &e) {
            fail(e.what());
        }
        std::string qubits;
        if (!(ls >> qubits)) {
            fail("missing qubit list");
        }
        char sep = 0;
        std::istringstream qs(qubits);
        if (!(qs >> g.q0)) {
            fail("bad qubit index");
        }
        if (gate_arity(g.kind) == 2) {
            if (!(qs >> sep) || sep != ',' || !(qs >> g.q1)) {
                fail("two-qubit gate needs 'a,b'");
            }
        }
        if (qs >> sep) {
            fail("trailing characters after qubit list");
        }
        if (has_angle(g.kind) && !(ls >> g.angle)) {
            fail("missing angle");
        }
        std::string extra;
        if (ls >> extra) {
            fail("unexpected token '" + extra + "'");
        }
        gates.push_back(g);
    }
    if (n_qubits < 0) {
        throw std::invalid_argument("circuit text: missing '# qubits' header");
    }
    Circuit c(n_qubits);
    for (const auto &g : gates) {
        c.add(g);
    }
    c.add_global_phase(phase);
    return c;
}

CompiledCircuit::CompiledCircuit(const Circuit &c, int max_block_qubits)
    : n_qubits_(c.n_qubits()), global_phase_(c.global_phase()) {
    if (max_block_qubits < 1 || max_block_qubits > 20) {
        throw std::invalid_argument("CompiledCircuit: block size outside [1, 20]");
    }
    const auto &gates = c.gates();
    size_t k = 0;
    while (k < gates.size()) {
        if (!is_diagonal(gates[k].kind)) {
            ops_.push_back({false, gates[k], -1});
            ++k;
            continue;
        }
        uint64_t mask = 0;
        size_t end = k;
        while (end < gates.size() && is_diagonal(gates[end].kind)) {
            uint64_t m = mask | own_mask(gates[end]) | gates[end].controls;
            if (std::popcount(m) > max_block_qubits) {
                break;
            }
            mask = m;
            ++end;
        }
        if (end == k + 1) {
            ops_.push_back({false, gates[k], -1});
            ++k;
            continue;
        }
        DiagonalBlock block;
        for (uint64_t m = mask; m; m &= m - 1) {
            block.qubits.push_back(std::countr_zero(m));
        }
        const int nb = static_cast<int>(block.qubits.size());
        block.table.resize(size_t(1) << nb);
        for (size_t local = 0; local < block.table.size(); ++local) {
            uint64_t full = 0;
            for (int b = 0; b < nb; ++b) {
                if (local >> b & 1) {
                    full |= uint64_t(1) << block.qubits[b];
                }
            }
            double angle = 0;
            for (size_t j = k; j < end; ++j) {
                angle += diagonal_angle(gates[j], full);
            }
            block.table[local] = std::polar(1.0, angle);
        }
        const int n_bytes = (n_qubits_ + 7) / 8;
        block.byte_maps.assign(static_cast<size_t>(n_bytes), std::vector<uint32_t>(256, 0));
        for (int byte = 0; byte < n_bytes; ++byte) {
            for (uint32_t v = 0; v < 256; ++v) {
                uint64_t full = uint64_t(v) << (8 * byte);
                uint32_t local = 0;
                for (int b = 0; b < nb; ++b) {
                    if (full >> block.qubits[b] & 1) {
                        local |= uint32_t(1) << b;
                    }
                }
                block.byte_maps[byte][v] = local;
            }
        }
        // Drop byte maps that never contribute.
        while (!block.byte_maps.empty() &&
               std::all_of(block.byte_maps.back().begin(), block.byte_maps.back().end(),
                           [](uint32_t x) { return x == 0; })) {
            block.byte_maps.pop_back();
        }
        ops_.push_back({true, Gate{}, static_cast<int>(blocks_.size())});
        blocks_.push_back(std::move(block));
        k = end;
    }
}

void CompiledCircuit::apply_block(StateVector &psi, const DiagonalBlock &b) const {
    cplx *amp = psi.data();
    const int64_t n = static_cast<int64_t>(psi.size());
    const auto &maps = b.byte_maps;
    const cplx *table = b.table.data();
    const int n_maps = static_cast<int>(maps.size());
#pragma omp parallel for if (n >= kParallelSize)
    for (int64_t i = 0; i < n; ++i) {
        uint64_t u = static_cast<uint64_t>(i);
        uint32_t idx = 0;
        for (int m = 0; m < n_maps; ++m) {
            idx |= maps[m][(u >> (8 * m)) & 0xff];
        }
        amp[i] *= table[idx];
    }
}

void CompiledCircuit::apply(StateVector &psi) const {
    if (n_qubits_ > psi.n_qubits()) {
        throw std::invalid_argument("CompiledCircuit::apply: circuit wider than state");
    }
    for (const auto &op : ops_) {
        if (op.diagonal) {
            apply_block(psi, blocks_[op.block]);
        } else {
            apply_gate(psi, op.gate);
        }
    }
}

}  // namespace ephq
