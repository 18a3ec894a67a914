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

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "ephq/circuits.hpp"
#include "ephq/ed_oracle.hpp"
#include "ephq/experiments.hpp"
#include "ephq/model.hpp"
#include "ephq/stateprep.hpp"
#include "ephq/statevector.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kConvergenceFailure = 3,
    kResourceCap = 4,
};

void emit(const std::string &text, const std::string &path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write '{}'", path));
    }
    out << text;
}

struct SweepFlags {
    std::string model_file;
    std::string params_file;
    std::string output;
};

void add_sweep_options(CLI::App *cmd, ephq::SweepConfig &cfg, SweepFlags &flags) {
    cmd->add_option("--alphas", cfg.alphas, "Coupling values α = g²/(2ω²t)")->capture_default_str();
    cmd->add_option("--model", flags.model_file, "Model file giving sites, t, omega and n_x");
    cmd->add_option("--t", cfg.t, "Hopping amplitude")->capture_default_str();
    cmd->add_option("--omega", cfg.omega, "Phonon frequency")->capture_default_str();
    cmd->add_option("--n-x", cfg.n_x, "Qubits per phonon register")->capture_default_str();
    cmd->add_option("--prep-steps", cfg.prep_steps, "Ansatz steps")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Optimizer seed")->capture_default_str();
    cmd->add_option("--params", flags.params_file, "Ansatz parameter file from prep-gaussian");
    auto &s = cfg.schedule;
    cmd->add_option("--coarse-ancilla", s.coarse_ancilla)->capture_default_str();
    cmd->add_option("--coarse-dt", s.coarse_dt)->capture_default_str();
    cmd->add_option("--fine-ancilla", s.fine_ancilla)->capture_default_str();
    cmd->add_option("--fine-width", s.fine_width, "Energy window of the fine pass")->capture_default_str();
    cmd->add_option("--fine-below", s.fine_below)->capture_default_str();
    cmd->add_option("--fine-dt", s.fine_dt)->capture_default_str();
    cmd->add_option("--order", s.order, "Trotter order (1 or 2)")->capture_default_str();
    cmd->add_option("--phonon-ancilla", cfg.phonon.n_ancilla)->capture_default_str();
    cmd->add_option("--phonon-dt", cfg.phonon.dt)->capture_default_str();
    cmd->add_option("--phonon-cutoff", cfg.phonon.cutoff)->capture_default_str();
    cmd->add_option("--n-cut", cfg.n_cut, "Fock cutoff of the reference")->capture_default_str();
    cmd->add_option("-o,--output", flags.output, "Output CSV (default stdout)");
}

void finish_sweep_config(ephq::SweepConfig &cfg, const SweepFlags &flags) {
    if (!flags.model_file.empty()) {
        const ephq::HolsteinModel h = ephq::load_model_file(flags.model_file);
        cfg.n_sites = h.n_sites;
        cfg.t = h.t;
        cfg.omega = h.omega;
        cfg.n_x = h.n_x;
    }
    if (!flags.params_file.empty()) {
        cfg.params = ephq::load_params(flags.params_file);
    }
    if (const char *env = std::getenv("EPHQ_THREADS")) {
        cfg.threads = std::max(1, std::atoi(env));
    }
}

bool sweep_failed(const ephq::SweepResult &r) {
    for (const auto &row : r.rows) {
        if (!row.error.empty()) {
            std::cerr << fmt::format("alpha {}: {}\n", row.alpha, row.error);
            return true;
        }
    }
    return false;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Electron-phonon simulation on a statevector: grids, circuits, state preparation, QPE"};
    app.set_version_flag("--version", std::string("ephq ") + ephq::kVersion);
    app.set_config("--config", "", "TOML or INI file with option values");
    app.require_subcommand(1);
    int qubit_cap = ephq::max_qubits();
    app.add_option("--max-qubits", qubit_cap, "Refuse simulations wider than this")
        ->capture_default_str()
        ->check(CLI::Range(1, 40));

    // truncation-study
    std::vector<int> trunc_nx{6, 7};
    std::string trunc_out;
    auto *trunc = app.add_subcommand("truncation-study", "Spectrum and residuals of the truncated oscillator");
    trunc->add_option("--n-x", trunc_nx, "Register sizes")->capture_default_str();
    trunc->add_option("-o,--output", trunc_out, "Output CSV (default stdout)");

    // prep-gaussian
    int prep_nx = 6, prep_steps = 6, prep_restarts = 8;
    uint64_t prep_seed = 1;
    double prep_target = 0.998;
    std::string prep_out;
    auto *prep = app.add_subcommand("prep-gaussian", "Optimize the Gaussian state ansatz");
    prep->add_option("--n-x", prep_nx)->capture_default_str();
    prep->add_option("--steps", prep_steps)->capture_default_str();
    prep->add_option("--seed", prep_seed)->capture_default_str();
    prep->add_option("--target", prep_target)->capture_default_str();
    prep->add_option("--restarts", prep_restarts)->capture_default_str();
    prep->add_option("-o,--output", prep_out, "Parameter file (default stdout)");

    // polaron-sweep and phonon-distribution share their options.
    ephq::SweepConfig sweep_cfg, dist_cfg;
    SweepFlags sweep_flags, dist_flags;
    auto *sweep = app.add_subcommand("polaron-sweep", "QPE energy and Z(0) against exact diagonalization");
    add_sweep_options(sweep, sweep_cfg, sweep_flags);
    auto *dist = app.add_subcommand("phonon-distribution", "Phonon number distribution Z(n) per coupling");
    add_sweep_options(dist, dist_cfg, dist_flags);

    // resources
    ephq::ResourceConfig res_cfg;
    std::string res_out;
    auto *res = app.add_subcommand("resources", "Gate counts and depth of Trotter steps versus system size");
    res->add_option("--sites", res_cfg.sites)->capture_default_str();
    res->add_option("--n-x", res_cfg.n_x)->capture_default_str();
    res->add_option("--dt", res_cfg.dt)->capture_default_str();
    res->add_option("--order", res_cfg.order)->capture_default_str();
    res->add_option("-o,--output", res_out, "Output CSV (default stdout)");

    // export-circuit
    std::string exp_model, exp_out;
    double exp_dt = 0.05;
    int exp_order = 2;
    auto *exp = app.add_subcommand("export-circuit", "Write one Trotter step as text");
    exp->add_option("--model", exp_model, "Model file")->required();
    exp->add_option("--dt", exp_dt)->capture_default_str();
    exp->add_option("--order", exp_order)->capture_default_str();
    exp->add_option("-o,--output", exp_out, "Output file (default stdout)");

    // ed-golden
    std::vector<double> gold_alphas{0.25, 0.5, 1.0, 1.5, 2.0, 3.0};
    int gold_cut = 60;
    std::string gold_out;
    auto *gold = app.add_subcommand("ed-golden", "Fock-space reference energies and Z(n)");
    gold->add_option("--alphas", gold_alphas)->capture_default_str();
    gold->add_option("--n-cut", gold_cut)->capture_default_str();
    gold->add_option("-o,--output", gold_out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (const char *env = std::getenv("EPHQ_THREADS")) {
            ephq::set_thread_count(std::max(1, std::atoi(env)));
        }
        ephq::set_max_qubits(qubit_cap);
        if (*trunc) {
            emit(ephq::run_truncation_study(trunc_nx), trunc_out);
        } else if (*prep) {
            ephq::PrepOptions opt;
            opt.target = prep_target;
            opt.max_restarts = prep_restarts;
            const ephq::PrepResult r = ephq::optimize_gaussian(prep_nx, prep_steps, prep_seed, opt);
            std::string text = ephq::csv_header("prep-gaussian", {{"n_x", std::to_string(prep_nx)},
                                                                  {"steps", std::to_string(prep_steps)},
                                                                  {"seed", std::to_string(prep_seed)},
                                                                  {"target", fmt::format("{}", prep_target)},
                                                                  {"restarts", std::to_string(prep_restarts)}});
            text += ephq::format_params(r.params, r.fidelity);
            emit(text, prep_out);
            std::cerr << fmt::format("fidelity {:.6f} after {} restarts\n", r.fidelity, r.restarts);
            if (!r.reached_target) {
                std::cerr << "target fidelity not reached\n";
                return kConvergenceFailure;
            }
        } else if (*sweep) {
            finish_sweep_config(sweep_cfg, sweep_flags);
            const ephq::SweepResult r = ephq::run_polaron_sweep(sweep_cfg);
            emit(ephq::format_sweep_csv(r), sweep_flags.output);
            if (sweep_failed(r)) {
                return kConvergenceFailure;
            }
        } else if (*dist) {
            finish_sweep_config(dist_cfg, dist_flags);
            const ephq::SweepResult r = ephq::run_polaron_sweep(dist_cfg);
            emit(ephq::format_distribution_csv(r), dist_flags.output);
            if (sweep_failed(r)) {
                return kConvergenceFailure;
            }
        } else if (*res) {
            const ephq::ResourceTable t = ephq::run_resources(res_cfg);
            emit(ephq::format_resources_csv(res_cfg, t), res_out);
        } else if (*exp) {
            const ephq::HolsteinModel h = ephq::load_model_file(exp_model);
            const ephq::EPModel model = ephq::holstein_to_ep(h);
            const ephq::QubitLayout layout = ephq::QubitLayout::for_model(model);
            const ephq::Circuit c = ephq::trotter_step(model, layout, exp_dt, exp_order);
            std::string text = ephq::csv_header("export-circuit", {{"dt", fmt::format("{}", exp_dt)},
                                                                   {"order", std::to_string(exp_order)}});
            std::string model_text = ephq::format_model(h);
            size_t pos = 0;
            while (pos < model_text.size()) {
                size_t nl = model_text.find('\n', pos);
                if (nl == std::string::npos) {
                    nl = model_text.size();
                }
                text += "# model: " + model_text.substr(pos, nl - pos) + "\n";
                pos = nl + 1;
            }
            text += ephq::export_circuit(c);
            emit(text, exp_out);
        } else if (*gold) {
            const auto rows = ephq::golden_rows(gold_alphas, gold_cut);
            const std::string header = fmt::format(
                "ephq {} ed-golden\nsites = 2, t = 1, omega = 1, n_cut = {}\n"
                "cutoff check: |E(n_cut) - E(n_cut + 5)| < 1e-10 for every row",
                ephq::kVersion, gold_cut);
            emit(ephq::format_golden(rows, header), gold_out);
        }
    } catch (const ephq::ResourceCapError &e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kResourceCap;
    } catch (const ephq::ConvergenceError &e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kConvergenceFailure;
    } catch (const std::invalid_argument &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}
