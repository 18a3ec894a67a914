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

#include "ephq/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ephq/circuits.hpp"
#include "ephq/oscillator_grid.hpp"

namespace ephq {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string join(const std::vector<double> &v) {
    std::string s;
    for (size_t k = 0; k < v.size(); ++k) {
        s += (k ? " " : "") + fmt::format("{:g}", v[k]);
    }
    return s;
}

std::string join(const std::vector<int> &v) {
    std::string s;
    for (size_t k = 0; k < v.size(); ++k) {
        s += (k ? " " : "") + std::to_string(v[k]);
    }
    return s;
}

}  // namespace

std::string csv_header(const std::string &command, const ConfigEcho &config) {
    std::string out = fmt::format("# ephq {}\n# command: {}\n", kVersion, command);
    for (const auto &[k, v] : config) {
        out += fmt::format("# {} = {}\n", k, v);
    }
    return out;
}

std::string run_truncation_study(const std::vector<int> &n_x_list) {
    if (n_x_list.empty()) {
        throw std::invalid_argument("truncation study: empty n_x list");
    }
    std::string out = csv_header("truncation-study", {{"n_x", join(n_x_list)}});
    out += "n_x,n,energy,energy_residual,overlap_deficit,commutator_residual,epsilon_bound\n";
    for (int n_x : n_x_list) {
        const GridSpec grid = make_grid(n_x);
        const TruncationReport r = truncation_report(grid);
        for (size_t n = 0; n < r.energies.size(); ++n) {
            out += fmt::format("{},{},{},{},{},{},{}\n", n_x, n, num(r.energies[n]), num(r.energy_residual[n]),
                               num(r.overlap_deficit[n]), num(r.commutator_residual[n]),
                               num(epsilon_bound(grid.size, static_cast<double>(n))));
        }
    }
    return out;
}

ConfigEcho SweepConfig::echo() const {
    const auto &s = schedule;
    return {
        {"alphas", join(alphas)},
        {"sites", std::to_string(n_sites)},
        {"t", num(t)},
        {"omega", num(omega)},
        {"n_x", std::to_string(n_x)},
        {"prep_steps", std::to_string(prep_steps)},
        {"seed", std::to_string(seed)},
        {"params", params ? "given" : "optimized"},
        {"coarse_ancilla", std::to_string(s.coarse_ancilla)},
        {"coarse_dt", num(s.coarse_dt)},
        {"fine_ancilla", std::to_string(s.fine_ancilla)},
        {"fine_width", num(s.fine_width)},
        {"fine_below", num(s.fine_below)},
        {"fine_dt", num(s.fine_dt)},
        {"order", std::to_string(s.order)},
        {"phonon_ancilla", std::to_string(phonon.n_ancilla)},
        {"phonon_dt", num(phonon.dt)},
        {"phonon_cutoff", std::to_string(phonon.cutoff)},
        {"n_cut", std::to_string(n_cut)},
    };
}

SweepResult run_polaron_sweep(const SweepConfig &config) {
    if (config.alphas.empty()) {
        throw std::invalid_argument("polaron sweep: empty alpha list");
    }
    if (config.n_sites != 2) {
        throw std::invalid_argument("polaron sweep: the input state is defined for 2 sites");
    }
    const auto &sc = config.schedule;
    if ((sc.order != 1 && sc.order != 2) || (config.phonon.order != 1 && config.phonon.order != 2)) {
        throw std::invalid_argument("polaron sweep: Trotter order must be 1 or 2");
    }
    if (!(sc.coarse_dt > 0) || !(sc.fine_dt > 0) || !(config.phonon.dt > 0) || !(sc.fine_width > 0)) {
        throw std::invalid_argument("polaron sweep: time steps and the fine width must be positive");
    }
    for (int n : {sc.coarse_ancilla, sc.fine_ancilla, config.phonon.n_ancilla}) {
        if (n < 1 || n > 16) {
            throw std::invalid_argument("polaron sweep: ancilla counts must lie in [1, 16]");
        }
    }
    if (config.n_x < 1 || config.n_x > 8 || config.n_cut < 0) {
        throw std::invalid_argument("polaron sweep: n_x must lie in [1, 8] and n_cut must be non-negative");
    }
    const int widest = std::max({config.schedule.coarse_ancilla, config.schedule.fine_ancilla,
                                 config.phonon.n_ancilla});
    const int needed = config.n_sites * (1 + config.n_x) + widest;
    if (needed > max_qubits()) {
        throw ResourceCapError(
            fmt::format("polaron sweep: {} qubits needed, cap is {}", needed, max_qubits()));
    }
    SweepResult result;
    result.config = config;
    VariationalParams params;
    if (config.params) {
        params = *config.params;
        result.prep_fidelity = ansatz_fidelity(params);
    } else {
        PrepResult prep = optimize_gaussian(config.n_x, config.prep_steps, config.seed);
        params = prep.params;
        result.prep_fidelity = prep.fidelity;
    }
    if (params.n_x != config.n_x) {
        throw std::invalid_argument("polaron sweep: ansatz register size differs from n_x");
    }
    result.rows.resize(config.alphas.size());
    const int count = static_cast<int>(config.alphas.size());
#pragma omp parallel for schedule(dynamic) num_threads(config.threads > 0 ? config.threads : 1)
    for (int k = 0; k < count; ++k) {
        SweepRow &row = result.rows[static_cast<size_t>(k)];
        row.alpha = config.alphas[static_cast<size_t>(k)];
        try {
            const HolsteinModel h =
                holstein_from_alpha(config.n_sites, config.t, config.omega, row.alpha, config.n_x);
            const HolsteinEdResult ed = holstein_ed(h, config.n_cut);
            row.e_ed = ed.energy;
            row.z_ed = ed.z;
            if (!ed.cutoff_converged) {
                row.error = fmt::format("ED cutoff not converged ({:.2e})", ed.cutoff_delta);
            }
            const EPModel model = holstein_to_ep(h);
            const QubitLayout layout = QubitLayout::for_model(model);
            const StateVector input = assemble_input(model, layout, params);
            PolaronEnergy pe = polaron_energy(input, model, layout, config.schedule);
            row.e_qpe = pe.estimate.energy;
            row.sigma = pe.estimate.sigma;
            if (pe.estimate.no_dominant_peak && row.error.empty()) {
                row.error = "no dominant peak";
            }
            row.z_qpe = phonon_distribution(pe.polaron, model, layout, config.phonon);
        } catch (const std::exception &e) {
            row.error = e.what();
        }
    }
    return result;
}

std::string format_sweep_csv(const SweepResult &r) {
    ConfigEcho echo = r.config.echo();
    echo.emplace_back("prep_fidelity", num(r.prep_fidelity));
    std::string out = csv_header("polaron-sweep", echo);
    out += "alpha,E_qpe,E_ed,abs_err,Z0_qpe,Z0_ed,status\n";
    for (const auto &row : r.rows) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double z0q = row.z_qpe.empty() ? nan : row.z_qpe[0];
        const double z0e = row.z_ed.empty() ? nan : row.z_ed[0];
        std::string status = row.error.empty() ? "ok" : "error: " + row.error;
        for (char &c : status) {
            if (c == ',' || c == '\n') {
                c = ';';
            }
        }
        out += fmt::format("{},{},{},{},{},{},{}\n", num(row.alpha), num(row.e_qpe), num(row.e_ed),
                           num(std::abs(row.e_qpe - row.e_ed)), num(z0q), num(z0e), status);
    }
    return out;
}

std::string format_distribution_csv(const SweepResult &r) {
    ConfigEcho echo = r.config.echo();
    echo.emplace_back("prep_fidelity", num(r.prep_fidelity));
    std::string out = csv_header("phonon-distribution", echo);
    out += "alpha,n,Z_qpe,Z_ed\n";
    for (const auto &row : r.rows) {
        for (size_t n = 0; n < row.z_qpe.size(); ++n) {
            const double ze = n < row.z_ed.size() ? row.z_ed[n] : 0.0;
            out += fmt::format("{},{},{},{}\n", num(row.alpha), n, num(row.z_qpe[n]), num(ze));
        }
    }
    return out;
}

ConfigEcho ResourceConfig::echo() const {
    return {
        {"sites", join(sites)}, {"n_x", std::to_string(n_x)}, {"dt", num(dt)},   {"order", std::to_string(order)},
        {"t", num(t)},          {"omega", num(omega)},         {"g", num(g)},
    };
}

EPModel resource_model(int n_sites, CouplingRange range, const ResourceConfig &config) {
    HolsteinModel h;
    h.n_sites = n_sites;
    h.t = config.t;
    h.omega = config.omega;
    h.g = config.g;
    h.n_x = config.n_x;
    const EPModel local = holstein_to_ep(h);
    if (range == CouplingRange::local) {
        return local;
    }
    std::vector<DensityCoupling> all;
    for (int i = 0; i < n_sites; ++i) {
        for (int n = 0; n < n_sites; ++n) {
            all.push_back({i, i, n, config.g});
        }
    }
    return EPModel(local.n_orbitals(), local.n_x(), local.hoppings(), local.modes(), all);
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need two or more points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]), ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Circuit coupling_circuit(const EPModel &model, const QubitLayout &layout, double dt) {
    const double spacing = make_grid(model.n_x()).spacing;
    Circuit c(layout.total_qubits());
    for (const auto &g : model.density_couplings()) {
        const double w = model.modes()[static_cast<size_t>(g.mode)].omega;
        const double theta = TrotterAngles::density(g.g, w, dt, spacing);
        if (g.i == g.j) {
            c.append(ep_density_coupling(layout.electron(g.i), layout.phonon(g.mode), theta, c.n_qubits()));
        } else {
            c.append(hopping_with_phonons(layout.electron(g.i), layout.electron(g.j), 0.0,
                                          {{layout.phonon(g.mode), theta}}, c.n_qubits()));
        }
    }
    return c;
}

ResourceTable run_resources(const ResourceConfig &config) {
    if (config.sites.size() < 2) {
        throw std::invalid_argument("resources: need at least two system sizes");
    }
    ResourceTable table;
    std::vector<double> ns, local_depth, pair_counts;
    for (CouplingRange range : {CouplingRange::local, CouplingRange::all_to_all}) {
        for (int n : config.sites) {
            const EPModel model = resource_model(n, range, config);
            const QubitLayout layout = QubitLayout::for_model(model);
            const Circuit c = trotter_step(model, layout, config.dt, config.order);
            const ResourceCount rc = resource_count(c);
            ResourceRow row;
            row.range = range;
            row.n_sites = n;
            row.qubits = layout.total_qubits();
            row.phonon_qubits = layout.phonons().count;
            row.gates = rc.total;
            row.two_qubit = rc.two_qubit;
            row.depth = rc.depth;
            const ResourceCount cc = resource_count(coupling_circuit(model, layout, config.dt));
            row.coupling_two_qubit = cc.two_qubit;
            row.coupling_depth = cc.depth;
            table.rows.push_back(row);
            if (range == CouplingRange::local) {
                ns.push_back(n);
                local_depth.push_back(cc.depth);
            } else {
                pair_counts.push_back(cc.two_qubit);
            }
        }
    }
    table.local_depth_exponent = loglog_slope(ns, local_depth);
    table.all_to_all_two_qubit_exponent = loglog_slope(ns, pair_counts);
    return table;
}

std::string format_resources_csv(const ResourceConfig &config, const ResourceTable &t) {
    std::string out = csv_header("resources", config.echo());
    out += "coupling,N,qubits,phonon_qubits,gates,two_qubit,depth,coupling_two_qubit,coupling_depth\n";
    for (const auto &r : t.rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.range == CouplingRange::local ? "local" : "all_to_all",
                           r.n_sites, r.qubits, r.phonon_qubits, r.gates, r.two_qubit, r.depth,
                           r.coupling_two_qubit, r.coupling_depth);
    }
    out += fmt::format("# local_depth_exponent = {:.4f}\n", t.local_depth_exponent);
    out += fmt::format("# all_to_all_two_qubit_exponent = {:.4f}\n", t.all_to_all_two_qubit_exponent);
    return out;
}

std::vector<GoldenRow> golden_rows(const std::vector<double> &alphas, int n_cut, double t, double omega) {
    std::vector<GoldenRow> rows;
    for (double a : alphas) {
        const HolsteinModel h = holstein_from_alpha(2, t, omega, a, 6);
        const HolsteinEdResult ed = holstein_ed(h, n_cut);
        if (!ed.cutoff_converged) {
            throw ConvergenceError(
                fmt::format("golden data: cutoff {} not converged at alpha {} ({:.2e})", n_cut, a, ed.cutoff_delta));
        }
        rows.push_back({a, ed.energy, ed.z});
    }
    return rows;
}

}  // namespace ephq
