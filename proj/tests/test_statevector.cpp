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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "ephq/circuit.hpp"
#include "ephq/oscillator_grid.hpp"
#include "ephq/statevector.hpp"

using namespace ephq;

namespace {

StateVector random_state(int n, uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> d;
    std::vector<cplx> a(size_t(1) << n);
    for (auto &x : a) {
        x = {d(rng), d(rng)};
    }
    StateVector s = StateVector::from_amplitudes(std::move(a));
    s.normalize();
    return s;
}

Gate random_gate(std::mt19937 &rng, int n) {
    std::uniform_int_distribution<int> kind(0, 10);
    std::uniform_int_distribution<int> q(0, n - 1);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    int a = q(rng), b = q(rng);
    while (b == a) {
        b = q(rng);
    }
    switch (kind(rng)) {
    case 0: return phase_shift(a, ang(rng));
    case 1: return controlled_phase(a, b, ang(rng));
    case 2: return rx(a, ang(rng));
    case 3: return ry(a, ang(rng));
    case 4: return rz(a, ang(rng));
    case 5: return hadamard(a);
    case 6: return pauli_x(a);
    case 7: return pauli_y(a);
    case 8: return pauli_z(a);
    case 9: return cnot(a, b);
    default: return swap_gate(a, b);
    }
}

}  // namespace

TEST(Gates, PhaseShiftExamples) {
    StateVector zero(1);
    apply_gate(zero, phase_shift(0, 0.7));
    EXPECT_NEAR(std::abs(zero[0] - cplx(1, 0)), 0, 1e-15);
    StateVector one(1, 1);
    apply_gate(one, phase_shift(0, kPi));
    EXPECT_NEAR(std::abs(one[1] + cplx(1, 0)), 0, 1e-15);
}

TEST(Gates, BellState) {
    StateVector s(2);
    apply_gate(s, hadamard(0));
    apply_gate(s, cnot(0, 1));
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(s[0] - r), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[3] - r), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[1]), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[2]), 0, 1e-15);
    auto p = probabilities(s, {0, 1});
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(Gates, MatricesAreUnitary) {
    std::mt19937 rng(3);
    for (int k = 0; k < 200; ++k) {
        Gate g = random_gate(rng, 2);
        Eigen::MatrixXcd m = gate_matrix(g);
        EXPECT_LT((m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm(), 1e-14);
    }
}

TEST(Gates, IndexViolations) {
    StateVector s(2);
    EXPECT_THROW(apply_gate(s, hadamard(2)), std::out_of_range);
    EXPECT_THROW(apply_gate(s, cnot(1, 1)), std::invalid_argument);
}

TEST(Gates, NamesRoundTrip) {
    for (GateKind k : {GateKind::phase_shift, GateKind::controlled_phase, GateKind::rx, GateKind::ry, GateKind::rz,
                       GateKind::hadamard, GateKind::pauli_x, GateKind::pauli_y, GateKind::pauli_z, GateKind::cnot,
                       GateKind::swap}) {
        EXPECT_EQ(gate_kind_from_name(gate_name(k)), k);
    }
    EXPECT_THROW(gate_kind_from_name("TOFFOLI"), std::invalid_argument);
}

TEST(Engine, BruteForceEquivalenceAndNorm) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 5;
        Circuit c(n);
        for (int k = 0; k < 40; ++k) {
            Gate g = random_gate(rng, n);
            if (k % 7 == 3 && n > 2) {
                // An extra control on a qubit the gate does not use.
                int extra = 0;
                while (extra == g.q0 || extra == g.q1) {
                    ++extra;
                }
                g.controls = uint64_t(1) << extra;
            }
            c.add(g);
        }
        StateVector psi = random_state(n, 100 + trial);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
        for (size_t i = 0; i < psi.size(); ++i) {
            v[static_cast<Eigen::Index>(i)] = psi[i];
        }
        apply_circuit(psi, c);
        Eigen::VectorXcd w = circuit_unitary(c, false) * v;
        double err = 0;
        for (size_t i = 0; i < psi.size(); ++i) {
            err = std::max(err, std::abs(psi[i] - w[static_cast<Eigen::Index>(i)]));
        }
        EXPECT_LT(err, 1e-12);
        EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
    }
}

TEST(Engine, ParallelKernelsMatchOnLargeState) {
    // 16 qubits crosses the size at which the kernels fork threads.
    const int n = 16;
    StateVector a = random_state(n, 5);
    StateVector b = a;
    std::mt19937 rng(9);
    std::vector<Gate> gates;
    for (int k = 0; k < 30; ++k) {
        gates.push_back(random_gate(rng, n));
    }
    apply_gates(a, gates);
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate inv = *it;
        switch (inv.kind) {
        case GateKind::phase_shift:
        case GateKind::controlled_phase:
        case GateKind::rx:
        case GateKind::ry:
        case GateKind::rz:
            inv.angle = -inv.angle;
            break;
        case GateKind::pauli_y:
        default:
            break;
        }
        apply_gate(a, inv);
    }
    EXPECT_LT(std::abs(inner(a, b) - cplx(1, 0)), 1e-10);
}

TEST(Qft, ForwardInverseIdentity) {
    StateVector psi = random_state(5, 21);
    StateVector orig = psi;
    qft_register(psi, {1, 3});
    qft_register(psi, {1, 3}, QftDirection::inverse);
    for (size_t i = 0; i < psi.size(); ++i) {
        EXPECT_LT(std::abs(psi[i] - orig[i]), 1e-12);
    }
}

TEST(Qft, ZeroGoesToUniform) {
    StateVector psi(2);
    qft_register(psi, {0, 2});
    for (size_t i = 0; i < 4; ++i) {
        EXPECT_LT(std::abs(psi[i] - cplx(0.5, 0)), 1e-15);
    }
}

TEST(Qft, MatchesDftConvention) {
    const int n = 3, size = 8;
    for (int j = 0; j < size; ++j) {
        StateVector psi(n, static_cast<uint64_t>(j));
        qft_register(psi, {0, n});
        for (int k = 0; k < size; ++k) {
            cplx expected = std::polar(1 / std::sqrt(double(size)), 2 * kPi * j * k / size);
            EXPECT_LT(std::abs(psi[static_cast<size_t>(k)] - expected), 1e-14);
        }
    }
}

TEST(Qft, ConjugatedMomentumSquareMatchesOperator) {
    for (int n = 1; n <= 4; ++n) {
        GridSpec g = make_grid(n);
        const int size = g.size;
        Eigen::MatrixXcd f(size, size);
        for (int j = 0; j < size; ++j) {
            StateVector psi(n, static_cast<uint64_t>(j));
            qft_register(psi, {0, n});
            for (int k = 0; k < size; ++k) {
                f(k, j) = psi[static_cast<size_t>(k)];
            }
        }
        Eigen::VectorXd p2(size);
        for (int m = 0; m < size; ++m) {
            p2[m] = p_eigenvalue(g, m) * p_eigenvalue(g, m);
        }
        Eigen::MatrixXcd built = f * p2.cast<cplx>().asDiagonal() * f.adjoint();
        Eigen::MatrixXd ref = operator_matrices(g).momentum_sq;
        EXPECT_LT((built - ref.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-10) << n;
    }
}

TEST(Readout, ProductMarginalsMultiply) {
    StateVector a(1), b(2);
    apply_gate(a, ry(0, 0.8));
    apply_gate(b, ry(0, 1.3));
    apply_gate(b, ry(1, -0.4));
    StateVector ab = tensor_product(a, b);
    auto pa = probabilities(a, {0, 1});
    auto pb = probabilities(b, {0, 2});
    auto pab = probabilities(ab, {0, 3});
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 4; ++j) {
            EXPECT_NEAR(pab[static_cast<size_t>(i + 2 * j)], pa[static_cast<size_t>(i)] * pb[static_cast<size_t>(j)],
                        1e-15);
        }
    }
    double total = 0;
    for (double p : pab) {
        total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Readout, InnerIsConjugateSymmetric) {
    StateVector a = random_state(4, 1), b = random_state(4, 2);
    EXPECT_LT(std::abs(inner(a, b) - std::conj(inner(b, a))), 1e-15);
    EXPECT_NEAR(inner(a, a).real(), 1.0, 1e-12);
}

TEST(Limits, QubitCap) {
    const int saved = max_qubits();
    set_max_qubits(10);
    EXPECT_THROW(StateVector(11), ResourceCapError);
    EXPECT_NO_THROW(StateVector(10));
    set_max_qubits(saved);
    EXPECT_EQ(max_qubits(), 28);
}

TEST(Dump, WritesInterleavedDoubles) {
    StateVector s(1);
    apply_gate(s, hadamard(0));
    const std::string path = ::testing::TempDir() + "ephq_dump.bin";
    dump_binary(s, path);
    std::ifstream in(path, std::ios::binary);
    double v[4];
    in.read(reinterpret_cast<char *>(v), sizeof v);
    EXPECT_NEAR(v[0], 1 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(v[1], 0.0);
    EXPECT_NEAR(v[2], 1 / std::sqrt(2.0), 1e-15);
    std::remove(path.c_str());
}
