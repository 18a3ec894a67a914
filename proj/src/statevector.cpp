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

#include "ephq/statevector.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ephq {

namespace {

constexpr int64_t kParallelSize = int64_t(1) << 15;

int g_max_qubits = 28;

struct Mat2 {
    cplx a, b, c, d;  // [[a, b], [c, d]]
};

Mat2 single_matrix(const Gate &g) {
    const double h = g.angle / 2;
    const cplx i(0, 1);
    const double r = 1 / std::sqrt(2.0);
    switch (g.kind) {
    case GateKind::phase_shift:
        return {1, 0, 0, std::polar(1.0, g.angle)};
    case GateKind::rx:
        return {std::cos(h), -i * std::sin(h), -i * std::sin(h), std::cos(h)};
    case GateKind::ry:
        return {std::cos(h), -std::sin(h), std::sin(h), std::cos(h)};
    case GateKind::rz:
        return {std::polar(1.0, -h), 0, 0, std::polar(1.0, h)};
    case GateKind::hadamard:
        return {r, r, r, -r};
    case GateKind::pauli_x:
    case GateKind::cnot:
        return {0, 1, 1, 0};
    case GateKind::pauli_y:
        return {0, -i, i, 0};
    case GateKind::pauli_z:
        return {1, 0, 0, -1};
    default:
        throw std::logic_error("single_matrix: not a single-qubit kind");
    }
}

void check_qubit(const StateVector &psi, int q) {
    if (q < 0 || q >= psi.n_qubits()) {
        throw std::out_of_range(fmt::format("gate qubit {} outside [0, {})", q, psi.n_qubits()));
    }
}

/// Index of the k-th basis state whose bit q is zero.
inline uint64_t insert_zero(uint64_t k, int q) {
    const uint64_t low = k & ((uint64_t(1) << q) - 1);
    return ((k >> q) << (q + 1)) | low;
}

void apply_single(StateVector &psi, int q, const Mat2 &m, uint64_t ctrl) {
    cplx *amp = psi.data();
    const int64_t half = static_cast<int64_t>(psi.size() / 2);
    const uint64_t bit = uint64_t(1) << q;
#pragma omp parallel for if (half >= kParallelSize)
    for (int64_t k = 0; k < half; ++k) {
        uint64_t i0 = insert_zero(static_cast<uint64_t>(k), q);
        if ((i0 & ctrl) != ctrl) {
            continue;
        }
        uint64_t i1 = i0 | bit;
        cplx x0 = amp[i0];
        cplx x1 = amp[i1];
        amp[i0] = m.a * x0 + m.b * x1;
        amp[i1] = m.c * x0 + m.d * x1;
    }
}

/// Multiplies amplitudes whose bits include `mask` by `phase`.
void apply_masked_phase(StateVector &psi, uint64_t mask, cplx phase) {
    cplx *amp = psi.data();
    const int64_t n = static_cast<int64_t>(psi.size());
#pragma omp parallel for if (n >= kParallelSize)
    for (int64_t i = 0; i < n; ++i) {
        if ((static_cast<uint64_t>(i) & mask) == mask) {
            amp[i] *= phase;
        }
    }
}

void apply_diag1(StateVector &psi, int q, cplx d0, cplx d1, uint64_t ctrl) {
    cplx *amp = psi.data();
    const int64_t n = static_cast<int64_t>(psi.size());
    const uint64_t bit = uint64_t(1) << q;
#pragma omp parallel for if (n >= kParallelSize)
    for (int64_t i = 0; i < n; ++i) {
        uint64_t u = static_cast<uint64_t>(i);
        if ((u & ctrl) == ctrl) {
            amp[i] *= (u & bit) ? d1 : d0;
        }
    }
}

void apply_swap(StateVector &psi, int a, int b, uint64_t ctrl) {
    cplx *amp = psi.data();
    const int64_t n = static_cast<int64_t>(psi.size());
    const uint64_t ba = uint64_t(1) << a;
    const uint64_t bb = uint64_t(1) << b;
#pragma omp parallel for if (n >= kParallelSize)
    for (int64_t i = 0; i < n; ++i) {
        uint64_t u = static_cast<uint64_t>(i);
        if ((u & ba) && !(u & bb) && (u & ctrl) == ctrl) {
            std::swap(amp[u], amp[(u ^ ba) | bb]);
        }
    }
}

}  // namespace

Gate phase_shift(int q, double theta) { return {GateKind::phase_shift, q, -1, theta}; }
Gate controlled_phase(int c, int t, double theta) {
    return {GateKind::controlled_phase, c, t, theta};
}
Gate rx(int q, double theta) { return {GateKind::rx, q, -1, theta}; }
Gate ry(int q, double theta) { return {GateKind::ry, q, -1, theta}; }
Gate rz(int q, double theta) { return {GateKind::rz, q, -1, theta}; }
Gate hadamard(int q) { return {GateKind::hadamard, q}; }
Gate pauli_x(int q) { return {GateKind::pauli_x, q}; }
Gate pauli_y(int q) { return {GateKind::pauli_y, q}; }
Gate pauli_z(int q) { return {GateKind::pauli_z, q}; }
Gate cnot(int c, int t) { return {GateKind::cnot, c, t}; }
Gate swap_gate(int a, int b) { return {GateKind::swap, a, b}; }

int gate_arity(GateKind kind) {
    switch (kind) {
    case GateKind::controlled_phase:
    case GateKind::cnot:
    case GateKind::swap:
        return 2;
    default:
        return 1;
    }
}

bool is_diagonal(GateKind kind) {
    switch (kind) {
    case GateKind::phase_shift:
    case GateKind::controlled_phase:
    case GateKind::rz:
    case GateKind::pauli_z:
        return true;
    default:
        return false;
    }
}

bool has_angle(GateKind kind) {
    switch (kind) {
    case GateKind::phase_shift:
    case GateKind::controlled_phase:
    case GateKind::rx:
    case GateKind::ry:
    case GateKind::rz:
        return true;
    default:
        return false;
    }
}

const char *gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::phase_shift: return "PH";
    case GateKind::controlled_phase: return "CPH";
    case GateKind::rx: return "RX";
    case GateKind::ry: return "RY";
    case GateKind::rz: return "RZ";
    case GateKind::hadamard: return "H";
    case GateKind::pauli_x: return "X";
    case GateKind::pauli_y: return "Y";
    case GateKind::pauli_z: return "Z";
    case GateKind::cnot: return "CNOT";
    case GateKind::swap: return "SWAP";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string &name) {
    for (int k = 0; k <= static_cast<int>(GateKind::swap); ++k) {
        auto kind = static_cast<GateKind>(k);
        if (name == gate_name(kind)) {
            return kind;
        }
    }
    throw std::invalid_argument(fmt::format("unknown gate name '{}'", name));
}

Eigen::MatrixXcd gate_matrix(const Gate &g) {
    using Eigen::MatrixXcd;
    if (gate_arity(g.kind) == 1) {
        Mat2 m = single_matrix(g);
        MatrixXcd out(2, 2);
        out << m.a, m.b, m.c, m.d;
        return out;
    }
    MatrixXcd out = MatrixXcd::Identity(4, 4);
    switch (g.kind) {
    case GateKind::controlled_phase:
        out(3, 3) = std::polar(1.0, g.angle);
        break;
    case GateKind::cnot:
        // q0 is bit 0: |b0=1,b1> <-> |b0=1,1-b1>, i.e. rows 1 and 3.
        out(1, 1) = out(3, 3) = 0;
        out(1, 3) = out(3, 1) = 1;
        break;
    case GateKind::swap:
        out(1, 1) = out(2, 2) = 0;
        out(1, 2) = out(2, 1) = 1;
        break;
    default:
        break;
    }
    return out;
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_count(int n) {
    if (n < 1) {
        throw std::invalid_argument("set_thread_count: need at least one thread");
    }
#ifdef _OPENMP
    omp_set_num_threads(n);
#endif
}

int max_qubits() { return g_max_qubits; }
void set_max_qubits(int n) {
    if (n < 1 || n > 40) {
        throw std::invalid_argument("set_max_qubits: value outside [1, 40]");
    }
    g_max_qubits = n;
}

StateVector::StateVector(int n_qubits, uint64_t basis) : n_qubits_(n_qubits) {
    if (n_qubits < 0) {
        throw std::invalid_argument("StateVector: negative qubit count");
    }
    if (n_qubits > g_max_qubits) {
        throw ResourceCapError(fmt::format(
            "StateVector: {} qubits exceeds the cap of {}", n_qubits, g_max_qubits));
    }
    amps_.assign(size_t(1) << n_qubits, cplx(0));
    if (basis >= amps_.size()) {
        throw std::out_of_range("StateVector: basis index out of range");
    }
    amps_[basis] = 1;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
    if (!std::has_single_bit(amplitudes.size())) {
        throw std::invalid_argument("StateVector: amplitude count must be a power of two");
    }
    StateVector s;
    s.n_qubits_ = std::countr_zero(amplitudes.size());
    if (s.n_qubits_ > g_max_qubits) {
        throw ResourceCapError("StateVector: amplitude count exceeds the qubit cap");
    }
    s.amps_ = std::move(amplitudes);
    return s;
}

double StateVector::norm() const {
    double s = 0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void StateVector::normalize() {
    double n = norm();
    if (n == 0) {
        throw std::domain_error("StateVector::normalize: zero vector");
    }
    for (auto &a : amps_) {
        a /= n;
    }
}

void apply_gate(StateVector &psi, const Gate &g) {
    check_qubit(psi, g.q0);
    if (gate_arity(g.kind) == 2) {
        check_qubit(psi, g.q1);
        if (g.q0 == g.q1) {
            throw std::invalid_argument("apply_gate: two-qubit gate on a single qubit");
        }
    }
    if (g.controls >> psi.n_qubits()) {
        throw std::out_of_range("apply_gate: control outside the state");
    }
    uint64_t own = uint64_t(1) << g.q0;
    if (gate_arity(g.kind) == 2) {
        own |= uint64_t(1) << g.q1;
    }
    if (g.controls & own) {
        throw std::invalid_argument("apply_gate: control coincides with a gate qubit");
    }
    switch (g.kind) {
    case GateKind::phase_shift:
        apply_masked_phase(psi, g.controls | own, std::polar(1.0, g.angle));
        return;
    case GateKind::controlled_phase:
        apply_masked_phase(psi, g.controls | own, std::polar(1.0, g.angle));
        return;
    case GateKind::pauli_z:
        apply_masked_phase(psi, g.controls | own, -1.0);
        return;
    case GateKind::rz:
        apply_diag1(psi, g.q0, std::polar(1.0, -g.angle / 2), std::polar(1.0, g.angle / 2),
                    g.controls);
        return;
    case GateKind::cnot:
        apply_single(psi, g.q1, single_matrix(g), g.controls | (uint64_t(1) << g.q0));
        return;
    case GateKind::swap:
        apply_swap(psi, g.q0, g.q1, g.controls);
        return;
    default:
        apply_single(psi, g.q0, single_matrix(g), g.controls);
        return;
    }
}

void apply_gates(StateVector &psi, std::span<const Gate> gates) {
    for (const auto &g : gates) {
        apply_gate(psi, g);
    }
}

std::vector<Gate> qft_gates(QubitRange reg, QftDirection direction) {
    if (reg.count < 1 || reg.first < 0) {
        throw std::invalid_argument("qft_gates: empty or negative register");
    }
    std::vector<Gate> gates;
    const int n = reg.count;
    for (int j = n - 1; j >= 0; --j) {
        gates.push_back(hadamard(reg[j]));
        for (int k = j - 1; k >= 0; --k) {
            gates.push_back(controlled_phase(reg[k], reg[j], kPi / double(1 << (j - k))));
        }
    }
    for (int k = 0; k < n / 2; ++k) {
        gates.push_back(swap_gate(reg[k], reg[n - 1 - k]));
    }
    if (direction == QftDirection::inverse) {
        std::reverse(gates.begin(), gates.end());
        for (auto &g : gates) {
            g.angle = -g.angle;
        }
    }
    return gates;
}

void qft_register(StateVector &psi, QubitRange reg, QftDirection direction) {
    if (reg.end() > psi.n_qubits()) {
        throw std::out_of_range("qft_register: register outside the state");
    }
    auto gates = qft_gates(reg, direction);
    apply_gates(psi, gates);
}

std::vector<double> probabilities(const StateVector &psi, QubitRange reg) {
    if (reg.first < 0 || reg.end() > psi.n_qubits()) {
        throw std::out_of_range("probabilities: register outside the state");
    }
    std::vector<double> p(size_t(1) << reg.count, 0.0);
    const uint64_t mask = (uint64_t(1) << reg.count) - 1;
    for (size_t i = 0; i < psi.size(); ++i) {
        p[(i >> reg.first) & mask] += std::norm(psi[i]);
    }
    return p;
}

cplx inner(const StateVector &a, const StateVector &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("inner: size mismatch");
    }
    cplx s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

StateVector tensor_product(const StateVector &low, const StateVector &high) {
    const int n = low.n_qubits() + high.n_qubits();
    if (n > max_qubits()) {
        throw ResourceCapError("tensor_product: result exceeds the qubit cap");
    }
    std::vector<cplx> amps(low.size() * high.size());
    for (size_t h = 0; h < high.size(); ++h) {
        for (size_t l = 0; l < low.size(); ++l) {
            amps[h * low.size() + l] = high[h] * low[l];
        }
    }
    return StateVector::from_amplitudes(std::move(amps));
}

void dump_binary(const StateVector &psi, const std::string &path) {
    static_assert(std::endian::native == std::endian::little, "dump_binary assumes little endian");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
    }
    out.write(reinterpret_cast<const char *>(psi.data()),
              static_cast<std::streamsize>(psi.size() * sizeof(cplx)));
}

}  // namespace ephq
