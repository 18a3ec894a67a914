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

#include "ephq/oscillator_grid.hpp"

using namespace ephq;

TEST(Grid, TwoQubitPositions) {
    GridSpec g = make_grid(2);
    const double d = std::sqrt(kPi / 2);
    EXPECT_NEAR(g.spacing, d, 1e-15);
    GridOperators ops = operator_matrices(g);
    Eigen::Vector4d expected(-2 * d, -d, 0, d);
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(ops.position(i, i), expected[i], 1e-15);
    }
}

TEST(Grid, SpanIdentity) {
    for (int n : {1, 3, 6, 10}) {
        GridSpec g = make_grid(n);
        EXPECT_NEAR(2 * g.half_width, g.size * g.spacing, 1e-12);
        EXPECT_NEAR(g.size * g.spacing, std::sqrt(2 * kPi * g.size), 1e-12);
    }
    EXPECT_THROW(make_grid(0), std::invalid_argument);
    EXPECT_THROW(make_grid(17), std::invalid_argument);
}

TEST(Grid, MomentumValuesPermutePositions) {
    GridSpec g = make_grid(4);
    std::vector<double> xs, ps;
    for (int i = 0; i < g.size; ++i) {
        xs.push_back(x_eigenvalue(g, i));
        ps.push_back(p_eigenvalue(g, i));
    }
    std::sort(ps.begin(), ps.end());
    for (int i = 0; i < g.size; ++i) {
        EXPECT_NEAR(xs[static_cast<size_t>(i)], ps[static_cast<size_t>(i)], 1e-14);
    }
    EXPECT_EQ(momentum_index(g, 0), 0);
    EXPECT_EQ(momentum_index(g, 8), -8);
    EXPECT_EQ(momentum_index(g, 15), -1);
}

TEST(Grid, HamiltonianIsHermitian) {
    for (int n : {2, 4, 6}) {
        GridOperators ops = operator_matrices(make_grid(n));
        EXPECT_LT((ops.hamiltonian - ops.hamiltonian.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((ops.momentum * ops.momentum - ops.momentum_sq.cast<cplx>()).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(HermiteGauss, MatchesClosedForms) {
    const double c = std::pow(kPi, -0.25);
    for (double x : {-2.0, -0.3, 0.0, 1.1}) {
        EXPECT_NEAR(hermite_gauss(0, x), c * std::exp(-x * x / 2), 1e-15);
        EXPECT_NEAR(hermite_gauss(1, x), c * std::sqrt(2.0) * x * std::exp(-x * x / 2), 1e-15);
        EXPECT_NEAR(hermite_gauss(2, x), c / std::sqrt(2.0) * (2 * x * x - 1) * std::exp(-x * x / 2), 1e-15);
    }
    // Deep levels stay finite and bounded by the envelope.
    EXPECT_TRUE(std::isfinite(hermite_gauss(4000, 10.0)));
    EXPECT_LT(std::abs(hermite_gauss(4000, 10.0)), 1.0);
}

TEST(HermiteGauss, OrthonormalBelowCutoff) {
    GridSpec g = make_grid(6);
    const int levels = max_nph(g.size, 1e-7);
    Eigen::MatrixXd t = sampled_hg_table(g, levels);
    Eigen::MatrixXd gram = t.transpose() * t;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(levels, levels)).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(HermiteGauss, LadderRelations) {
    GridSpec g = make_grid(6);
    GridOperators ops = operator_matrices(g);
    const int levels = max_nph(g.size, 1e-7);
    Eigen::MatrixXd t = sampled_hg_table(g, levels + 1);
    for (int n = 0; n + 1 < levels; ++n) {
        Eigen::VectorXd lhs = ops.position * t.col(n);
        Eigen::VectorXd rhs = std::sqrt(n + 1.0) * t.col(n + 1);
        if (n > 0) {
            rhs += std::sqrt(double(n)) * t.col(n - 1);
        }
        rhs /= std::sqrt(2.0);
        EXPECT_LT((lhs - rhs).norm(), 1e-7) << "X ladder at n=" << n;
        Eigen::VectorXcd plhs = ops.momentum * t.col(n).cast<cplx>();
        Eigen::VectorXcd prhs = cplx(0, 1) * std::sqrt(n + 1.0) * t.col(n + 1).cast<cplx>();
        if (n > 0) {
            prhs -= cplx(0, 1) * std::sqrt(double(n)) * t.col(n - 1).cast<cplx>();
        }
        prhs /= std::sqrt(2.0);
        EXPECT_LT((plhs - prhs).norm(), 1e-7) << "P ladder at n=" << n;
    }
}

TEST(HermiteGauss, FourierEigenfunctions) {
    // <p_m|χ_n> = (-1)^k (-i)^n sqrt(Δ) φ_n(p̃_m); the sign (-1)^k comes
    // from the x̃ origin sitting at register value N/2.
    GridSpec g = make_grid(6);
    const int n_size = g.size;
    for (int n = 0; n < 10; ++n) {
        SampledHermiteGauss chi = sampled_hg(g, n);
        for (int m = 0; m < n_size; ++m) {
            cplx acc = 0;
            for (int j = 0; j < n_size; ++j) {
                acc += std::polar(1.0, -2 * kPi * double(j) * m / n_size) * chi.amplitudes[static_cast<size_t>(j)];
            }
            acc /= std::sqrt(double(n_size));
            const int k = momentum_index(g, m);
            const cplx phase = std::pow(cplx(0, -1), n) * ((k % 2) ? -1.0 : 1.0);
            const cplx expected = phase * std::sqrt(g.spacing) * hermite_gauss(n, p_eigenvalue(g, m));
            EXPECT_LT(std::abs(acc - expected), 1e-7) << "n=" << n << " m=" << m;
        }
    }
}

TEST(EpsilonBound, Arithmetic) {
    EXPECT_NEAR(epsilon_bound(64, 18) / 6.4e-8, 1.0, 0.05);
    EXPECT_NEAR(epsilon_bound(64, 30), 10 * std::exp(-(0.51 * 64 - 0.765 * 30)), 1e-15);
    EXPECT_LT(epsilon_bound(64, 30), 1.0);
    EXPECT_EQ(epsilon_bound(64, 45), 1.0);
    EXPECT_NEAR(epsilon_bound(128, 18) / 4.26e-22, 1.0, 0.05);
    EXPECT_EQ(epsilon_bound(8, 30), 1.0);
}

TEST(MaxNph, InvertsBound) {
    EXPECT_EQ(max_nph(64, 1e-7), 18);
    EXPECT_EQ(max_nph(128, 1e-7), 61);
    EXPECT_EQ(max_nph(8, 1e-7), 0);
    for (int size : {32, 64, 100, 128}) {
        const int n = max_nph(size, 1e-5);
        EXPECT_LE(epsilon_bound(size, n), 1e-5);
        EXPECT_GT(epsilon_bound(size, n + 1), 1e-5);
    }
}

TEST(TruncationReport, SixQubitLowLevels) {
    GridSpec g = make_grid(6);
    TruncationReport r = truncation_report(g);
    ASSERT_EQ(r.energies.size(), 64u);
    EXPECT_LT(r.energy_residual[0], 1e-7);
    for (int n = 0; n <= 18; ++n) {
        const double bound = 10 * epsilon_bound(64, n);
        EXPECT_LE(r.energy_residual[static_cast<size_t>(n)], bound) << n;
        EXPECT_LE(r.overlap_deficit[static_cast<size_t>(n)], bound) << n;
        EXPECT_LE(r.commutator_residual[static_cast<size_t>(n)], bound) << n;
    }
    for (size_t n = 0; n < r.energies.size(); ++n) {
        EXPECT_GE(r.energy_residual[n], 0);
        EXPECT_GE(r.overlap_deficit[n], 0);
        EXPECT_GE(r.commutator_residual[n], 0);
    }
    // Far above the cutoff the spectrum departs from n + 1/2.
    EXPECT_GT(r.energy_residual[60], 1.0);
}

TEST(TruncationReport, LargerGridSupportsMoreLevels) {
    TruncationReport r6 = truncation_report(make_grid(6));
    TruncationReport r7 = truncation_report(make_grid(7));
    EXPECT_GT(measured_nph(r7, 1e-7), measured_nph(r6, 1e-7) + 30);
    EXPECT_GE(measured_nph(r6, 1e-7), 18);
}

TEST(TruncationReport, QuadAndDoubleAgreeOnLowLevels) {
    GridSpec g = make_grid(5);
    TruncationReport q = truncation_report(g, Precision::quad);
    TruncationReport d = truncation_report(g, Precision::double_precision);
    for (int n = 0; n < 8; ++n) {
        EXPECT_NEAR(q.energies[static_cast<size_t>(n)], d.energies[static_cast<size_t>(n)], 1e-11);
    }
    EXPECT_THROW(truncation_report(make_grid_of_size(4098)), std::invalid_argument);
}

TEST(ErrorLaw, SlopeNearOneAndAHalf) {
    ErrorLawFit fit = fit_error_law(1e-3, 16, 120);
    EXPECT_GE(fit.points.size(), 5u);
    EXPECT_NEAR(fit.slope, 1.5, 0.225);
}
