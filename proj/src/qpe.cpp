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

#include "ephq/qpe.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

#include "ephq/circuits.hpp"

namespace ephq {

double QpeConfig::bin_width() const { return 2 * kPi / (t0 * std::ldexp(1.0, n_ancilla)); }

void QpeConfig::validate() const {
    if (n_ancilla < 1 || n_ancilla > 16) {
        throw std::invalid_argument(fmt::format("QPE: n_ancilla {} outside [1, 16]", n_ancilla));
    }
    if (!(t0 > 0) || !std::isfinite(t0)) {
        throw std::invalid_argument("QPE: t0 must be positive");
    }
    if (!(dt > 0) || !std::isfinite(dt)) {
        throw std::invalid_argument("QPE: dt must be positive");
    }
    if (order != 1 && order != 2) {
        throw std::invalid_argument("QPE: Trotter order must be 1 or 2");
    }
    if (!std::isfinite(e_off)) {
        throw std::invalid_argument("QPE: e_off must be finite");
    }
}

namespace {

Circuit repeat(const Circuit &step, int times, double extra_phase) {
    Circuit c(step.n_qubits());
    c.reserve(step.size() * static_cast<size_t>(times));
    for (int k = 0; k < times; ++k) {
        c.append(step);
    }
    c.add_global_phase(extra_phase);
    return c;
}

int step_count(const QpeConfig &cfg) {
    cfg.validate();
    return std::max(1, static_cast<int>(std::ceil(cfg.t0 / cfg.dt - 1e-9)));
}

}  // namespace

TrotterEvolution::TrotterEvolution(const EPModel &model, const QubitLayout &layout, const QpeConfig &cfg)
    : steps_(step_count(cfg)),
      step_(trotter_step(model, QubitLayout(layout.n_orbitals(), layout.n_modes(), layout.n_x()),
                         -cfg.t0 / step_count(cfg), cfg.order)),
      circuit_(repeat(step_, steps_, -cfg.e_off * cfg.t0)),
      compiled_(step_),
      phase_(circuit_.global_phase()) {}

void TrotterEvolution::apply(StateVector &psi) const {
    for (int k = 0; k < steps_; ++k) {
        compiled_.apply(psi);
    }
    const cplx f = std::polar(1.0, phase_);
    for (auto &a : psi.amplitudes()) {
        a *= f;
    }
}

DenseEvolution::DenseEvolution(const Eigen::MatrixXcd &h, const QpeConfig &cfg) {
    cfg.validate();
    const auto dim = h.rows();
    if (dim != h.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("DenseEvolution: need a square matrix of power-of-two size");
    }
    n_qubits_ = std::countr_zero(static_cast<uint64_t>(dim));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        phases[i] = std::polar(1.0, (es.eigenvalues()[i] - cfg.e_off) * cfg.t0);
    }
    u_ = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void DenseEvolution::apply(StateVector &psi) const {
    if (psi.n_qubits() != n_qubits_) {
        throw std::invalid_argument("DenseEvolution: state width mismatch");
    }
    Eigen::Map<Eigen::VectorXcd> v(psi.data(), static_cast<Eigen::Index>(psi.size()));
    Eigen::VectorXcd out = u_ * v;
    v = out;
}

size_t EnergyDistribution::argmax() const {
    if (probabilities.empty()) {
        throw std::invalid_argument("EnergyDistribution: empty");
    }
    return static_cast<size_t>(std::max_element(probabilities.begin(), probabilities.end()) -
                               probabilities.begin());
}

namespace {

QpeBackend pick_backend(const QpeConfig &cfg, const Evolution &u) {
    if (cfg.backend != QpeBackend::automatic) {
        if (cfg.backend == QpeBackend::gate_level && !u.circuit()) {
            throw std::invalid_argument("QPE: gate-level backend needs a circuit");
        }
        if (cfg.backend == QpeBackend::sliced_powers && !cfg.promote_global_phase) {
            throw std::invalid_argument("QPE: dropping the tracked phase needs the gate-level backend");
        }
        return cfg.backend;
    }
    if (!cfg.promote_global_phase) {
        return QpeBackend::gate_level;
    }
    return QpeBackend::sliced_powers;
}

void run_gate_level(StateVector &full, const Circuit &u, int system, const QpeConfig &cfg) {
    const int total = full.n_qubits();
    Circuit base(total);
    for (const auto &g : u.gates()) {
        base.add(g);
    }
    if (cfg.promote_global_phase) {
        base.add_global_phase(u.global_phase());
    }
    for (int k = 0; k < cfg.n_ancilla; ++k) {
        apply_gate(full, hadamard(system + k));
    }
    for (int k = 0; k < cfg.n_ancilla; ++k) {
        const Circuit cu = controlled_by(base, system + k, total);
        CompiledCircuit compiled(cu);
        const uint64_t reps = uint64_t(1) << k;
        for (uint64_t r = 0; r < reps; ++r) {
            compiled.apply(full);
        }
    }
}

void run_sliced(StateVector &full, const StateVector &input, const Evolution &u, const QpeConfig &cfg) {
    const size_t block = input.size();
    const size_t blocks = size_t(1) << cfg.n_ancilla;
    const double scale = 1 / std::sqrt(static_cast<double>(blocks));
    StateVector cur = input;
    for (size_t a = 0; a < blocks; ++a) {
        cplx *dst = full.data() + a * block;
        for (size_t s = 0; s < block; ++s) {
            dst[s] = cur[s] * scale;
        }
        if (a + 1 < blocks) {
            u.apply(cur);
        }
    }
}

}  // namespace

QpeRun run_qpe(const StateVector &input, const Evolution &u, const QpeConfig &cfg,
               std::optional<size_t> postselect_bin) {
    if (!postselect_bin) {
        return run_qpe(input, u, cfg, BinChooser{});
    }
    const size_t bin = *postselect_bin;
    return run_qpe(input, u, cfg, [bin](const EnergyDistribution &) { return bin; });
}

QpeRun run_qpe(const StateVector &input, const Evolution &u, const QpeConfig &cfg, const BinChooser &choose) {
    cfg.validate();
    if (input.n_qubits() != u.n_qubits()) {
        throw std::invalid_argument("QPE: input width does not match the evolution");
    }
    if (std::abs(input.norm() - 1) > 1e-8) {
        throw std::invalid_argument("QPE: input is not normalized");
    }
    const int system = input.n_qubits();
    const int total = system + cfg.n_ancilla;
    if (total > max_qubits()) {
        throw ResourceCapError(fmt::format("QPE: {} qubits exceed the cap of {}", total, max_qubits()));
    }
    StateVector full(total);
    if (pick_backend(cfg, u) == QpeBackend::gate_level) {
        std::copy(input.amplitudes().begin(), input.amplitudes().end(), full.amplitudes().begin());
        run_gate_level(full, *u.circuit(), system, cfg);
    } else {
        run_sliced(full, input, u, cfg);
    }
    const QubitRange anc{system, cfg.n_ancilla};
    qft_register(full, anc, QftDirection::inverse);

    QpeRun run;
    auto &d = run.distribution;
    d.probabilities = probabilities(full, anc);
    d.bin_width = cfg.bin_width();
    d.energies.resize(d.probabilities.size());
    for (size_t b = 0; b < d.energies.size(); ++b) {
        d.energies[b] = cfg.e_off + static_cast<double>(b) * d.bin_width;
    }
    if (d.probabilities.back() >= cfg.window_threshold) {
        throw SpectrumWindowError(fmt::format(
            "QPE: {:.3g} of the probability in the top bin; the spectrum exceeds [{:.6g}, {:.6g})",
            d.probabilities.back(), cfg.e_off, cfg.e_off + 2 * kPi / cfg.t0));
    }
    if (choose) {
        const size_t bin = choose(d);
        if (bin >= d.probabilities.size()) {
            throw std::out_of_range("QPE: post-selection bin out of range");
        }
        if (d.probabilities[bin] > 0) {
            const size_t block = input.size();
            std::vector<cplx> amps(full.data() + bin * block, full.data() + (bin + 1) * block);
            StateVector s = StateVector::from_amplitudes(std::move(amps));
            s.normalize();
            run.postselected = std::move(s);
        }
    }
    return run;
}

EnergyDistribution qpe_distribution(const StateVector &input, const EPModel &model,
                                    const QubitLayout &layout, const QpeConfig &cfg) {
    TrotterEvolution u(model, layout, cfg);
    return run_qpe(input, u, cfg).distribution;
}

EnergyEstimate estimate_energy(const EnergyDistribution &d) {
    const size_t peak = d.argmax();
    const size_t lo = peak >= 2 ? peak - 2 : 0;
    const size_t hi = std::min(d.probabilities.size() - 1, peak + 2);
    double mass = 0, weighted = 0;
    for (size_t b = lo; b <= hi; ++b) {
        mass += d.probabilities[b];
        weighted += d.probabilities[b] * d.energies[b];
    }
    EnergyEstimate e;
    e.energy = mass > 0 ? weighted / mass : d.energies[peak];
    e.sigma = d.bin_width / 2;
    e.cluster_mass = mass;
    e.no_dominant_peak = mass < 0.5;
    return e;
}

SpectrumBounds spectrum_bounds(const EPModel &model) {
    double zero_point = 0, omega_max = 0;
    for (const auto &m : model.modes()) {
        zero_point += m.omega / 2;
        omega_max = std::max(omega_max, m.omega);
    }
    std::vector<double> row(static_cast<size_t>(model.n_orbitals()), 0.0);
    for (const auto &h : model.hoppings()) {
        row[static_cast<size_t>(h.i)] += std::abs(h.t);
        row[static_cast<size_t>(h.j)] += std::abs(h.t);
    }
    const double hop = row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
    std::vector<double> shift(static_cast<size_t>(model.n_orbitals()), 0.0);
    for (const auto &g : model.density_couplings()) {
        const double w = model.modes()[static_cast<size_t>(g.mode)].omega;
        const double s = g.g / std::sqrt(w);
        shift[static_cast<size_t>(g.i)] += s * s / (2 * w);
        if (g.i != g.j) {
            shift[static_cast<size_t>(g.j)] += s * s / (2 * w);
        }
    }
    const double relax = shift.empty() ? 0.0 : *std::max_element(shift.begin(), shift.end());
    SpectrumBounds b;
    b.lower = zero_point - hop - relax;
    const double decoupled = zero_point - hop;
    b.upper = b.lower + 2 * (decoupled - b.lower) + 8 * omega_max;
    return b;
}

PolaronEnergy polaron_energy(const StateVector &input, const EPModel &model, const QubitLayout &layout,
                             const PolaronSchedule &schedule) {
    PolaronEnergy out;
    const SpectrumBounds bounds = spectrum_bounds(model);
    double omega_max = 0;
    for (const auto &m : model.modes()) {
        omega_max = std::max(omega_max, m.omega);
    }
    const double margin = 0.25 * omega_max;

    QpeConfig coarse;
    coarse.n_ancilla = schedule.coarse_ancilla;
    coarse.e_off = bounds.lower - margin;
    coarse.t0 = 2 * kPi / (bounds.upper - coarse.e_off);
    coarse.dt = schedule.coarse_dt;
    coarse.order = schedule.order;
    TrotterEvolution u_coarse(model, layout, coarse);
    // Lowest peak carrying real weight: the first local maximum above 1%.
    size_t pick = 0;
    auto lowest_peak = [&pick](const EnergyDistribution &d) {
        const auto &p = d.probabilities;
        pick = d.argmax();
        for (size_t b = 0; b < p.size(); ++b) {
            const bool local = (b == 0 || p[b] >= p[b - 1]) && (b + 1 == p.size() || p[b] >= p[b + 1]);
            if (local && p[b] >= 0.01) {
                pick = b;
                break;
            }
        }
        return pick;
    };
    QpeRun conditioned = run_qpe(input, u_coarse, coarse, lowest_peak);
    out.coarse = conditioned.distribution;
    out.coarse_config = coarse;
    if (!conditioned.postselected) {
        throw ConvergenceError("polaron_energy: empty coarse bin");
    }
    const double centre = out.coarse.energies[pick];

    QpeConfig fine;
    fine.n_ancilla = schedule.fine_ancilla;
    fine.e_off = centre - schedule.fine_below * schedule.fine_width;
    fine.t0 = 2 * kPi / schedule.fine_width;
    fine.dt = schedule.fine_dt;
    fine.order = schedule.order;
    TrotterEvolution u_fine(model, layout, fine);
    QpeRun final_run = run_qpe(*conditioned.postselected, u_fine, fine,
                               [](const EnergyDistribution &d) { return d.argmax(); });
    out.fine = final_run.distribution;
    out.fine_config = fine;
    out.estimate = estimate_energy(out.fine);
    if (!final_run.postselected) {
        throw ConvergenceError("polaron_energy: empty fine bin");
    }
    out.polaron = std::move(*final_run.postselected);
    return out;
}

std::vector<double> phonon_distribution(const StateVector &polaron, const EPModel &model,
                                        const QubitLayout &layout, const PhononConfig &cfg) {
    if (model.modes().empty()) {
        throw std::invalid_argument("phonon_distribution: no phonon modes");
    }
    const double omega = model.modes()[0].omega;
    for (const auto &m : model.modes()) {
        if (m.omega != omega) {
            throw std::invalid_argument("phonon_distribution: modes must share one frequency");
        }
    }
    if (cfg.cutoff < 0 || cfg.cutoff >= (1 << std::min(cfg.n_ancilla, 16)) - 1) {
        throw std::invalid_argument("phonon_distribution: cutoff must lie below the top bin");
    }
    QpeConfig q;
    q.n_ancilla = cfg.n_ancilla;
    q.t0 = 2 * kPi / (omega * std::ldexp(1.0, cfg.n_ancilla));
    q.e_off = omega * model.n_modes() / 2.0;
    q.dt = cfg.dt;
    q.order = cfg.order;
    const EPModel hp = phonon_part(model);
    TrotterEvolution u(hp, layout, q);
    const auto d = run_qpe(polaron, u, q).distribution;
    std::vector<double> z(static_cast<size_t>(cfg.cutoff + 1), 0.0);
    for (int n = 0; n <= cfg.cutoff; ++n) {
        z[static_cast<size_t>(n)] = d.probabilities[static_cast<size_t>(n)];
    }
    return z;
}

}  // namespace ephq
