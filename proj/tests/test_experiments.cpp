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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ephq/experiments.hpp"

using namespace ephq;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> data_lines(const std::string &csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        out.push_back(line);
    }
    return out;
}

std::string column_header(const std::string &csv) {
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            return line;
        }
    }
    return {};
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

class Scratch {
  public:
    Scratch() {
        dir_ = fs::temp_directory_path() / fs::path("ephq_test_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }
    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    std::string write(const std::string &name, const std::string &text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

  private:
    fs::path dir_;
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cli(const std::string &args, const Scratch &s) {
    const std::string cmd = std::string(EPHQ_CLI) + " " + args + " >" + s.path("stdout.txt") + " 2>" +
                            s.path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SweepConfig small_sweep() {
    SweepConfig c;
    c.n_x = 4;
    c.prep_steps = 3;
    PrepOptions opt;
    opt.target = 0.9999;
    c.params = optimize_gaussian(4, 3, 1, opt).params;
    c.alphas = {0.0, 1.0};
    c.n_cut = 30;
    c.schedule.coarse_ancilla = 8;
    c.schedule.fine_ancilla = 6;
    c.schedule.fine_width = 8.0;
    c.schedule.coarse_dt = 0.1;
    c.schedule.fine_dt = 0.1;
    c.phonon.n_ancilla = 5;
    c.phonon.dt = 0.05;
    c.phonon.cutoff = 10;
    return c;
}

}  // namespace

TEST(CsvHeader, EchoesVersionCommandAndConfig) {
    const std::string h = csv_header("demo", {{"a", "1"}, {"b", "x y"}});
    EXPECT_EQ(h, std::string("# ephq ") + kVersion + "\n# command: demo\n# a = 1\n# b = x y\n");
}

TEST(TruncationStudy, RowCounts) {
    const std::string csv = run_truncation_study({6, 7});
    EXPECT_EQ(data_lines(csv).size(), 64u + 128u);
    EXPECT_EQ(column_header(csv), "n_x,n,energy,energy_residual,overlap_deficit,commutator_residual,epsilon_bound");
    EXPECT_NE(csv.find("# n_x = 6 7"), std::string::npos);
    const auto small = data_lines(run_truncation_study({2}));
    EXPECT_EQ(small.size(), 4u);
    EXPECT_EQ(split(small[0])[0], "2");
    EXPECT_THROW(run_truncation_study({}), std::invalid_argument);
}

TEST(TruncationStudy, LowLevelsAreAccurate) {
    const auto rows = data_lines(run_truncation_study({6}));
    for (int n = 0; n < 18; ++n) {
        const auto cells = split(rows[static_cast<size_t>(n)]);
        EXPECT_NEAR(std::stod(cells[2]), n + 0.5, 1e-7);
        EXPECT_LE(std::stod(cells[3]), 1e-7);
    }
}

TEST(LogLogSlope, RecoversPowerLaw) {
    EXPECT_NEAR(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}), 2.0, 1e-12);
    EXPECT_NEAR(loglog_slope({2, 4, 8}, {7, 7, 7}), 0.0, 1e-12);
    EXPECT_THROW(loglog_slope({1}, {1}), std::invalid_argument);
}

TEST(Resources, ScalingAndLayout) {
    ResourceConfig cfg;
    const ResourceTable t = run_resources(cfg);
    ASSERT_EQ(t.rows.size(), 6u);
    std::vector<int> local_depth;
    for (const auto &r : t.rows) {
        EXPECT_EQ(r.qubits, r.n_sites * (1 + cfg.n_x));
        EXPECT_EQ(r.phonon_qubits, r.n_sites * cfg.n_x);
        EXPECT_LE(r.depth, r.gates);
        EXPECT_LE(r.two_qubit, r.gates);
        if (r.range == CouplingRange::local) {
            local_depth.push_back(r.coupling_depth);
            EXPECT_EQ(r.coupling_two_qubit, r.n_sites * cfg.n_x);
        } else {
            EXPECT_EQ(r.coupling_two_qubit, r.n_sites * r.n_sites * cfg.n_x);
        }
    }
    for (int d : local_depth) {
        EXPECT_LE(std::abs(d - local_depth.front()), 1);
    }
    EXPECT_NEAR(t.all_to_all_two_qubit_exponent, 2.0, 0.2);
    EXPECT_NEAR(t.local_depth_exponent, 0.0, 0.1);
    const std::string csv = format_resources_csv(cfg, t);
    EXPECT_EQ(column_header(csv), "coupling,N,qubits,phonon_qubits,gates,two_qubit,depth,coupling_two_qubit,coupling_depth");
    EXPECT_NE(csv.find("# all_to_all_two_qubit_exponent = "), std::string::npos);
    cfg.sites = {4};
    EXPECT_THROW(run_resources(cfg), std::invalid_argument);
}

TEST(Resources, AllToAllModel) {
    ResourceConfig cfg;
    const EPModel m = resource_model(3, CouplingRange::all_to_all, cfg);
    EXPECT_EQ(m.density_couplings().size(), 9u);
    EXPECT_EQ(resource_model(3, CouplingRange::local, cfg).density_couplings().size(), 3u);
}

TEST(Golden, RefusesUnconvergedCutoff) {
    EXPECT_THROW(golden_rows({3.0}, 8), ConvergenceError);
    const auto rows = golden_rows({0.5}, 40);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].energy, -0.338348515453, 1e-10);
}

TEST(PolaronSweep, SmallRunIsDeterministicAndAccurate) {
    SweepConfig c = small_sweep();
    const SweepResult a = run_polaron_sweep(c);
    ASSERT_EQ(a.rows.size(), 2u);
    for (const auto &row : a.rows) {
        EXPECT_TRUE(row.error.empty()) << row.error;
        ASSERT_EQ(row.z_qpe.size(), 11u);
        double sum = 0;
        for (double z : row.z_qpe) {
            sum += z;
        }
        EXPECT_LE(sum, 1.0 + 1e-10);
    }
    // g = 0: the decoupled energy -t + ω within the coarse bin.
    EXPECT_NEAR(a.rows[0].e_ed, 0.0, 1e-12);
    EXPECT_LE(std::abs(a.rows[0].e_qpe - a.rows[0].e_ed), std::max(1e-3, a.rows[0].sigma));
    const std::string csv = format_sweep_csv(a);
    EXPECT_EQ(column_header(csv), "alpha,E_qpe,E_ed,abs_err,Z0_qpe,Z0_ed,status");
    EXPECT_NE(csv.find("# fine_dt = 0.10000000000000001"), std::string::npos);
    EXPECT_NE(csv.find("# prep_fidelity = "), std::string::npos);
    const auto lines = data_lines(csv);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(split(lines[0]).back(), "ok");

    c.threads = 2;
    const SweepResult b = run_polaron_sweep(c);
    EXPECT_EQ(format_sweep_csv(b).substr(csv.find("alpha,")), csv.substr(csv.find("alpha,")));
    EXPECT_EQ(data_lines(format_distribution_csv(b)), data_lines(format_distribution_csv(a)));
    EXPECT_EQ(column_header(format_distribution_csv(a)), "alpha,n,Z_qpe,Z_ed");
}

TEST(PolaronSweep, FailedRowIsRecorded) {
    SweepConfig c = small_sweep();
    c.alphas = {0.5};
    c.n_cut = 90;
    const SweepResult r = run_polaron_sweep(c);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_FALSE(r.rows[0].error.empty());
    const auto lines = data_lines(format_sweep_csv(r));
    EXPECT_EQ(split(lines[0]).back().rfind("error: ", 0), 0u);
}

TEST(PolaronSweep, Validation) {
    SweepConfig c = small_sweep();
    c.alphas.clear();
    EXPECT_THROW(run_polaron_sweep(c), std::invalid_argument);
    c = small_sweep();
    c.n_sites = 3;
    EXPECT_THROW(run_polaron_sweep(c), std::invalid_argument);
    c = small_sweep();
    c.params = VariationalParams(3, 1);
    EXPECT_THROW(run_polaron_sweep(c), std::invalid_argument);
    c = small_sweep();
    c.n_x = 8;
    c.params.reset();
    c.schedule.fine_ancilla = 12;
    const int saved = max_qubits();
    set_max_qubits(24);
    EXPECT_THROW(run_polaron_sweep(c), ResourceCapError);
    set_max_qubits(saved);
}

TEST(Cli, VersionAndUsageErrors) {
    Scratch s;
    EXPECT_EQ(cli("--version", s), 0);
    EXPECT_NE(slurp(s.path("stdout.txt")).find(kVersion), std::string::npos);
    EXPECT_EQ(cli("", s), 2);
    EXPECT_EQ(cli("no-such-command", s), 2);
    EXPECT_EQ(cli("truncation-study --bogus", s), 2);
    EXPECT_EQ(cli("export-circuit", s), 2);
    EXPECT_EQ(cli("truncation-study --n-x", s), 2);
}

TEST(Cli, TruncationStudyToFile) {
    Scratch s;
    EXPECT_EQ(cli("truncation-study --n-x 2 3 -o " + s.path("t.csv"), s), 0);
    const std::string csv = slurp(s.path("t.csv"));
    EXPECT_EQ(data_lines(csv).size(), 12u);
    EXPECT_EQ(csv.rfind("# ephq ", 0), 0u);
    EXPECT_EQ(cli("truncation-study --n-x 2", s), 0);
    EXPECT_EQ(data_lines(slurp(s.path("stdout.txt"))).size(), 4u);
}

TEST(Cli, ConfigFileSuppliesOptions) {
    Scratch s;
    const std::string ini = s.write("run.ini", "[truncation-study]\nn-x = [3]\n");
    EXPECT_EQ(cli("--config " + ini + " truncation-study", s), 0);
    EXPECT_EQ(data_lines(slurp(s.path("stdout.txt"))).size(), 8u);
    EXPECT_EQ(cli("--config " + s.path("missing.ini") + " truncation-study", s), 2);
}

TEST(Cli, ResourcesAndExport) {
    Scratch s;
    EXPECT_EQ(cli("resources --sites 2 4 8 --n-x 3", s), 0);
    const std::string csv = slurp(s.path("stdout.txt"));
    EXPECT_EQ(data_lines(csv).size(), 6u);
    EXPECT_NE(csv.find("# n_x = 3"), std::string::npos);

    const std::string model = s.write("m.txt", "# two sites\nsites = 2\nt = 1\nomega = 1\nalpha = 1\nn_x = 2\n");
    EXPECT_EQ(cli("export-circuit --model " + model + " --dt 0.1 --order 1 -o " + s.path("c.txt"), s), 0);
    const Circuit c = parse_circuit(slurp(s.path("c.txt")));
    EXPECT_EQ(c.n_qubits(), 6);
    EXPECT_GT(c.size(), 0u);
    EXPECT_EQ(cli("export-circuit --model " + s.path("none.txt"), s), 1);
    const std::string bad = s.write("bad.txt", "sites = 2\ng = 1\nalpha = 1\n");
    EXPECT_EQ(cli("export-circuit --model " + bad, s), 2);
}

TEST(Cli, ConvergenceAndCapExitCodes) {
    Scratch s;
    EXPECT_EQ(cli("prep-gaussian --n-x 2 --steps 1 --target 1.5 --restarts 1", s), 3);
    EXPECT_EQ(cli("prep-gaussian --n-x 2 --steps 1 --target 0.999", s), 0);
    EXPECT_NE(slurp(s.path("stdout.txt")).find("value.7 = "), std::string::npos);
    EXPECT_EQ(cli("ed-golden --alphas 3 --n-cut 8", s), 3);
    EXPECT_EQ(cli("ed-golden --alphas 0.5 1 --n-cut 30", s), 0);
    EXPECT_EQ(data_lines(slurp(s.path("stdout.txt"))).size(), 2u);
    EXPECT_EQ(cli("--max-qubits 12 polaron-sweep --alphas 1 --n-x 3", s), 4);
    EXPECT_EQ(cli("polaron-sweep --alphas 1 --n-x 3 --order 5", s), 2);
}
