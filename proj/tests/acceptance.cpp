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

// Acceptance run: one PASS/FAIL line per criterion. With arguments, only
// the named criteria run (e.g. `acceptance AC1 AC5`).

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "ephq/circuits.hpp"
#include "ephq/ed_oracle.hpp"
#include "ephq/experiments.hpp"
#include "ephq/grid_hamiltonian.hpp"
#include "ephq/oscillator_grid.hpp"
#include "ephq/stateprep.hpp"

using namespace ephq;
namespace o = ephq::oracle;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::vector<double> kAlphas{0.25, 0.5, 1.0, 1.5, 2.0, 3.0};

// Prepared once, shared by AC6 and the sweep.
std::optional<PrepResult> g_prep6;

const PrepResult &prep6() {
    if (!g_prep6) {
        g_prep6 = optimize_gaussian(6, 6, 1);
    }
    return *g_prep6;
}

Outcome ac1() {
    Outcome out{true, ""};
    for (auto [n_x, levels] : {std::pair{6, 18}, std::pair{7, 61}}) {
        const TruncationReport r = truncation_report(make_grid(n_x));
        double worst = 0;
        for (int n = 0; n < levels; ++n) {
            worst = std::max(worst, r.energy_residual[n]);
        }
        out.pass = out.pass && worst <= 1e-7;
        out.detail += fmt::format("n_x={} levels 0..{} max|E-(n+1/2)|={:.2e}; ", n_x, levels - 1, worst);
    }
    return out;
}

Outcome ac2() {
    Outcome out{true, ""};
    for (auto [n_x, levels] : {std::pair{6, 18}, std::pair{7, 61}}) {
        const TruncationReport r = truncation_report(make_grid(n_x));
        const double size = std::ldexp(1.0, n_x);
        double worst_ratio = 0;
        for (int n = 0; n < levels; ++n) {
            const double bound = 10 * epsilon_bound(size, n);
            worst_ratio = std::max({worst_ratio, r.overlap_deficit[n] / bound, r.commutator_residual[n] / bound});
        }
        out.pass = out.pass && worst_ratio <= 1.0;
        out.detail += fmt::format("n_x={} max residual/(10 eps)={:.3f}; ", n_x, worst_ratio);
    }
    return out;
}

Outcome ac3() {
    Outcome out{true, ""};
    for (double eps : {1e-3, 1e-7}) {
        const ErrorLawFit fit = fit_error_law(eps, 16, 160);
        const bool ok = std::abs(fit.slope - 1.5) <= 0.15 * 1.5;
        out.pass = out.pass && ok;
        out.detail += fmt::format("eps={:.0e} slope={:.3f} over {} points; ", eps, fit.slope, fit.points.size());
    }
    return out;
}

Outcome ac4() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    std::uniform_int_distribution<int> width(1, 3);
    std::map<std::string, double> worst;
    for (int trial = 0; trial < 100; ++trial) {
        {
            const int n = width(rng);
            const double th = angle(rng);
            const QubitRange reg{0, n};
            const Eigen::MatrixXcd x = o::centred_x(n, reg);
            worst["phase_x2"] = std::max(worst["phase_x2"],
                                         o::max_abs(circuit_unitary(phase_x2(reg, th)) - o::expm_i(x * x, th)));
        }
        {
            const int n = width(rng);
            const double th = angle(rng);
            const QubitRange reg{0, n};
            const Eigen::MatrixXcd f = o::qft(n, reg);
            const Eigen::MatrixXcd k = o::momentum_index(n, reg);
            const Eigen::MatrixXcd expect = f * o::expm_i(k * k, th) * f.adjoint();
            worst["phase_p2"] = std::max(worst["phase_p2"], o::max_abs(circuit_unitary(phase_p2(reg, th)) - expect));
        }
        {
            const int n = width(rng);
            const double th = angle(rng);
            const QubitRange a{0, n}, b{n, n};
            const Eigen::MatrixXcd xa = o::centred_x(2 * n, a), xb = o::centred_x(2 * n, b);
            worst["phase_xx"] = std::max(worst["phase_xx"],
                                         o::max_abs(circuit_unitary(phase_xx(a, b, th)) - o::expm_i(xa * xb, th)));
        }
        {
            const int n = width(rng);
            const double th = angle(rng);
            const QubitRange reg{1, n};
            const Eigen::MatrixXcd ne = o::number(n + 1, 0), x = o::centred_x(n + 1, reg);
            worst["ep_density_coupling"] =
                std::max(worst["ep_density_coupling"],
                         o::max_abs(circuit_unitary(ep_density_coupling(0, reg, th)) - o::expm_i(ne * x, th)));
        }
        {
            const int orbitals = 2 + width(rng);
            const int i = std::uniform_int_distribution<int>(0, orbitals - 2)(rng);
            const int j = std::uniform_int_distribution<int>(i + 1, orbitals - 1)(rng);
            const double th = angle(rng);
            worst["jw_hopping"] =
                std::max(worst["jw_hopping"], o::max_abs(circuit_unitary(jw_hopping(i, j, th, orbitals)) -
                                                         o::expm_i(o::hopping(orbitals, i, j), th)));
        }
        {
            const int n = width(rng);
            const int modes = 1 + trial % 2;
            const double th0 = angle(rng);
            const int w = 3 + modes * n;
            std::vector<PhononTerm> terms;
            Eigen::MatrixXcd gen = th0 * Eigen::MatrixXcd::Identity(1 << w, 1 << w);
            for (int k = 0; k < modes; ++k) {
                const QubitRange reg{3 + k * n, n};
                const double th = angle(rng);
                terms.push_back({reg, th});
                gen += th * o::centred_x(w, reg);
            }
            gen = o::hopping(w, 0, 2) * gen;
            worst["hopping_with_phonons"] =
                std::max(worst["hopping_with_phonons"],
                         o::max_abs(circuit_unitary(hopping_with_phonons(0, 2, th0, terms, w)) - o::expm_i(gen, 1.0)));
        }
    }
    Outcome out{true, ""};
    for (const auto &[name, err] : worst) {
        out.pass = out.pass && err <= 1e-10;
        out.detail += fmt::format("{} {:.1e}; ", name, err);
    }
    return out;
}

Outcome ac5() {
    Outcome out{true, ""};
    for (int n = 2; n <= 8; ++n) {
        const ResourceCount x2 = resource_count(phase_x2({0, n}, 0.3));
        const ResourceCount xx = resource_count(phase_xx({0, n}, {n, n}, 0.3));
        const bool ok = x2.count(GateKind::phase_shift) + x2.count(GateKind::controlled_phase) == n + n * (n - 1) / 2 &&
                        x2.total == n + n * (n - 1) / 2 && xx.count(GateKind::controlled_phase) == n * n &&
                        xx.count(GateKind::phase_shift) == 2 * n && xx.total == n * n + 2 * n;
        if (!ok) {
            out.detail += fmt::format("mismatch at n_x={}; ", n);
        }
        out.pass = out.pass && ok;
    }
    if (out.pass) {
        out.detail = "phase_x2 and phase_xx counts exact for n_x=2..8";
    }
    return out;
}

Outcome ac6() {
    Outcome out{true, ""};
    const PrepResult &r6 = prep6();
    const PrepResult r7 = optimize_gaussian(7, 6, 1);
    for (auto [n_x, r] : {std::pair<int, const PrepResult *>{6, &r6}, {7, &r7}}) {
        out.pass = out.pass && r->fidelity >= 0.998;
        out.detail += fmt::format("n_x={} F={:.6f} restarts={}; ", n_x, r->fidelity, r->restarts);
    }
    return out;
}

std::optional<SweepResult> g_sweep;

const SweepResult &sweep() {
    if (!g_sweep) {
        SweepConfig c;
        c.alphas = kAlphas;
        c.n_x = 6;
        c.params = prep6().params;
        g_sweep = run_polaron_sweep(c);
    }
    return *g_sweep;
}

const GoldenRow *golden_for(const std::vector<GoldenRow> &golden, double alpha) {
    for (const auto &g : golden) {
        if (std::abs(g.alpha - alpha) < 1e-12) {
            return &g;
        }
    }
    return nullptr;
}

std::vector<GoldenRow> golden() { return load_golden(std::string(EPHQ_TEST_DATA) + "/holstein_golden.csv"); }

Outcome ac7() {
    const auto ref = golden();
    Outcome out{true, ""};
    for (const SweepRow &row : sweep().rows) {
        const GoldenRow *g = golden_for(ref, row.alpha);
        if (!row.error.empty() || g == nullptr) {
            out.pass = false;
            out.detail += fmt::format("a={} {}; ", row.alpha, row.error.empty() ? "no golden row" : row.error);
            continue;
        }
        const double err = std::abs(row.e_qpe - g->energy);
        out.pass = out.pass && err <= 1e-3;
        out.detail += fmt::format("a={} |dE|={:.2e}; ", row.alpha, err);
    }
    return out;
}

Outcome ac8() {
    const auto ref = golden();
    Outcome out{true, ""};
    for (const SweepRow &row : sweep().rows) {
        const GoldenRow *g = golden_for(ref, row.alpha);
        if (!row.error.empty() || g == nullptr || row.z_qpe.empty()) {
            out.pass = false;
            out.detail += fmt::format("a={} no distribution; ", row.alpha);
            continue;
        }
        double tv = 0, sum = 0;
        const size_t len = std::max(row.z_qpe.size(), g->z.size());
        for (size_t n = 0; n < len; ++n) {
            const double a = n < row.z_qpe.size() ? row.z_qpe[n] : 0.0;
            const double b = n < g->z.size() ? g->z[n] : 0.0;
            tv += std::abs(a - b) / 2;
        }
        for (double z : row.z_qpe) {
            sum += z;
        }
        out.pass = out.pass && tv <= 1e-2 && std::abs(sum - 1) <= 1e-8;
        out.detail += fmt::format("a={} TV={:.2e} |sum-1|={:.1e}; ", row.alpha, tv, std::abs(sum - 1));
    }
    return out;
}

Outcome ac9() {
    ResourceConfig c;
    const ResourceTable t = run_resources(c);
    int lo = 1 << 30, hi = 0;
    bool qubits_ok = true;
    for (const ResourceRow &r : t.rows) {
        qubits_ok = qubits_ok && r.phonon_qubits == r.n_sites * c.n_x;
        if (r.range == CouplingRange::local) {
            lo = std::min(lo, r.coupling_depth);
            hi = std::max(hi, r.coupling_depth);
        }
    }
    Outcome out;
    const double exponent = t.all_to_all_two_qubit_exponent;
    out.pass = qubits_ok && hi - lo <= 1 && std::abs(exponent - 2.0) <= 0.2;
    out.detail = fmt::format("local coupling depth {}..{}; all-to-all two-qubit exponent {:.3f}; phonon qubits {}",
                             lo, hi, exponent, qubits_ok ? "= N n_x" : "MISMATCH");
    return out;
}

Outcome ac10() {
    const EPModel m = holstein_to_ep(holstein_from_alpha(2, 1, 1, 1.0, 2));
    const QubitLayout layout = QubitLayout::for_model(m);
    const Eigen::MatrixXcd h = GridHamiltonian(m, layout).dense().cast<cplx>();
    std::vector<double> dts{0.08, 0.04, 0.02}, errs;
    for (double dt : dts) {
        const Eigen::MatrixXcd d = circuit_unitary(trotter_step(m, layout, dt, 2)) - o::expm_i(h, dt);
        errs.push_back(Eigen::JacobiSVD<Eigen::MatrixXcd>(d).singularValues()(0));
    }
    const double slope = loglog_slope(dts, errs);
    return {std::abs(slope - 3.0) <= 0.3,
            fmt::format("slope={:.3f} errors {:.2e} {:.2e} {:.2e}", slope, errs[0], errs[1], errs[2])};
}

}  // namespace

int main(int argc, char **argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
    };
    std::set<std::string> selected(argv + 1, argv + argc);
    int failures = 0;
    for (const auto &[name, run] : criteria) {
        if (!selected.empty() && !selected.count(name)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = run();
        } catch (const std::exception &e) {
            r = {false, fmt::format("error: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += r.pass ? 0 : 1;
        fmt::print("{} {} ({:.1f} s) {}\n", name, r.pass ? "PASS" : "FAIL", secs, r.detail);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
