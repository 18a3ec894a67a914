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

#include "ephq/stateprep.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "ephq/circuits.hpp"
#include "ephq/oscillator_grid.hpp"

namespace ephq {

namespace {

using Vec = Eigen::VectorXcd;

// Added to the target while optimizing.
constexpr double kTargetMargin = 1e-6;

Vec normalized_ground(const GridSpec &grid) {
    auto chi = sampled_hg(grid, 0);
    Vec v(grid.size);
    for (int i = 0; i < grid.size; ++i) {
        v[i] = chi.amplitudes[static_cast<size_t>(i)];
    }
    v.normalize();
    return v;
}

/// Register-only simulator of the ansatz, organized gate by gate; one
/// parameter varies while its neighbours stay fixed.
class AnsatzModel {
  public:
    explicit AnsatzModel(int n_x) : n_x_(n_x), grid_(make_grid(n_x)), n_(grid_.size) {
        fourier_.resize(n_, n_);
        for (int m = 0; m < n_; ++m) {
            for (int i = 0; i < n_; ++i) {
                fourier_(m, i) = std::polar(1 / std::sqrt(double(n_)), -2 * kPi * double(m) * i / n_);
            }
        }
        p2_.resize(n_);
        x2_.resize(n_);
        for (int i = 0; i < n_; ++i) {
            double p = p_eigenvalue(grid_, i);
            double x = x_eigenvalue(grid_, i);
            p2_[i] = p * p;
            x2_[i] = x * x;
        }
        target_ = normalized_ground(grid_);
    }

    int n() const { return n_; }
    const Vec &target() const { return target_; }

    /// Applies gate k of the flattened sequence (or its inverse).
    void apply(const VariationalParams &p, size_t k, Vec &v, bool inverse = false) const {
        const size_t per = static_cast<size_t>(VariationalParams::per_step(n_x_));
        const size_t slot = k % per;
        double x = p.values[k] * (inverse ? -1.0 : 1.0);
        if (slot == 0) {
            Vec w = fourier_ * v;
            for (int m = 0; m < n_; ++m) {
                w[m] *= std::polar(1.0, -x * p2_[m]);
            }
            v = fourier_.adjoint() * w;
        } else if (slot == 1) {
            for (int i = 0; i < n_; ++i) {
                v[i] *= std::polar(1.0, -x * x2_[i]);
            }
        } else {
            const int q = static_cast<int>((slot - 2) / 3);
            const int axis = static_cast<int>((slot - 2) % 3);
            rotate(v, q, axis, x);
        }
    }

    /// Optimizes parameter k given L (everything after, applied to the
    /// target in reverse) and R (everything before, applied to |0>).
    /// Returns the new fidelity; never below the current one.
    double optimize(VariationalParams &p, size_t k, const Vec &left, const Vec &right) const {
        const size_t per = static_cast<size_t>(VariationalParams::per_step(n_x_));
        const size_t slot = k % per;
        if (slot >= 2) {
            const int q = static_cast<int>((slot - 2) / 3);
            const int axis = static_cast<int>((slot - 2) % 3);
            // G(x) = cos(x/2) I - i sin(x/2) σ, so <L|G|R> = c a + s b.
            Vec sr = right;
            pauli(sr, q, axis);
            const cplx a = left.dot(right);
            const cplx b = cplx(0, -1) * left.dot(sr);
            const double half_diff = (std::norm(a) - std::norm(b)) / 2;
            const double cross = std::real(std::conj(a) * b);
            const double mean = (std::norm(a) + std::norm(b)) / 2;
            const double current = mean + half_diff * std::cos(p.values[k]) + cross * std::sin(p.values[k]);
            const double best = mean + std::hypot(half_diff, cross);
            if (best > current) {
                p.values[k] = std::atan2(cross, half_diff);
                return best;
            }
            return current;
        }
        // Quadratic phase: f(ρ) = |Σ conj(l_m) e^{-iρ w_m} r_m|².
        Vec l, r;
        const std::vector<double> *w;
        if (slot == 0) {
            l = fourier_ * left;
            r = fourier_ * right;
            w = &p2_;
        } else {
            l = left;
            r = right;
            w = &x2_;
        }
        Vec lr(n_);
        for (int m = 0; m < n_; ++m) {
            lr[m] = std::conj(l[m]) * r[m];
        }
        auto f = [&](double rho) {
            cplx s = 0;
            for (int m = 0; m < n_; ++m) {
                s += lr[m] * std::polar(1.0, -rho * (*w)[m]);
            }
            return std::norm(s);
        };
        const double x0 = p.values[k];
        double best = f(x0);
        double bx = x0;
        double w_max = 0;
        for (double wm : *w) {
            w_max = std::max(w_max, std::abs(wm));
        }
        // Eight samples per period of the fastest phase, over ±0.5.
        const double step = std::min(0.02, kPi / (4 * std::max(w_max, 1.0)));
        const int reach = static_cast<int>(std::ceil(0.5 / step));
        for (int j = -reach; j <= reach; ++j) {
            if (j == 0) {
                continue;
            }
            double v = f(x0 + j * step);
            if (v > best) {
                best = v;
                bx = x0 + j * step;
            }
        }
        const double g = 0.618033988749895;
        double a = bx - step, b = bx + step;
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = f(c), fd = f(d);
        for (int it = 0; it < 50; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        if (std::max(fc, fd) > best) {
            best = std::max(fc, fd);
            bx = fc > fd ? c : d;
        }
        p.values[k] = bx;
        return best;
    }

  private:
    void rotate(Vec &v, int q, int axis, double x) const {
        const double c = std::cos(x / 2);
        const double s = std::sin(x / 2);
        const int bit = 1 << q;
        for (int i = 0; i < n_; ++i) {
            if (i & bit) {
                continue;
            }
            cplx a = v[i], b = v[i | bit];
            switch (axis) {
            case 0:
                v[i] = c * a + cplx(0, -s) * b;
                v[i | bit] = cplx(0, -s) * a + c * b;
                break;
            case 1:
                v[i] = c * a - s * b;
                v[i | bit] = s * a + c * b;
                break;
            default:
                v[i] = a * std::polar(1.0, -x / 2);
                v[i | bit] = b * std::polar(1.0, x / 2);
                break;
            }
        }
    }

    void pauli(Vec &v, int q, int axis) const {
        const int bit = 1 << q;
        for (int i = 0; i < n_; ++i) {
            if (i & bit) {
                continue;
            }
            cplx a = v[i], b = v[i | bit];
            switch (axis) {
            case 0:
                v[i] = b;
                v[i | bit] = a;
                break;
            case 1:
                v[i] = cplx(0, -1) * b;
                v[i | bit] = cplx(0, 1) * a;
                break;
            default:
                v[i | bit] = -b;
                break;
            }
        }
    }

    int n_x_;
    GridSpec grid_;
    int n_;
    Eigen::MatrixXcd fourier_;
    std::vector<double> p2_, x2_;
    Vec target_;
};

double model_fidelity(const AnsatzModel &m, const VariationalParams &p) {
    Vec v = Vec::Zero(m.n());
    v[0] = 1;
    for (size_t k = 0; k < p.size(); ++k) {
        m.apply(p, k, v);
    }
    return std::norm(m.target().dot(v));
}

/// Line search along the displacement of the last sweep, p + λ (p - start)
/// for λ > 0. Keeps p unchanged unless the objective improves.
double pattern_move(const AnsatzModel &m, VariationalParams &p, const std::vector<double> &start, double f) {
    const size_t count = p.size();
    std::vector<double> base = p.values;
    std::vector<double> dir(count);
    for (size_t k = 0; k < count; ++k) {
        dir[k] = base[k] - start[k];
    }
    auto eval = [&](double lambda) {
        for (size_t k = 0; k < count; ++k) {
            p.values[k] = base[k] + lambda * dir[k];
        }
        return model_fidelity(m, p);
    };
    // Expand while improving.
    double lo = 0, mid = 0, fmid = f;
    double hi = 1;
    double fhi = eval(hi);
    int expansions = 0;
    while (fhi > fmid && expansions < 12) {
        lo = mid;
        mid = hi;
        fmid = fhi;
        hi *= 2;
        fhi = eval(hi);
        ++expansions;
    }
    if (mid == 0) {
        p.values = base;
        return f;
    }
    // Golden-section refinement on [lo, hi] around mid.
    const double g = 0.618033988749895;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < 30; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d);
        }
    }
    double best_lambda = mid, best = fmid;
    if (fc > best) {
        best = fc;
        best_lambda = c;
    }
    if (fd > best) {
        best = fd;
        best_lambda = d;
    }
    eval(best_lambda);
    return best;
}

}  // namespace

VariationalParams::VariationalParams(int n_x_, int steps_) : n_x(n_x_), steps(steps_) {
    if (n_x < 1 || steps < 0) {
        throw std::invalid_argument("VariationalParams: need n_x >= 1 and steps >= 0");
    }
    values.assign(static_cast<size_t>(steps * per_step(n_x)), 0.0);
}

Circuit ansatz_circuit(const VariationalParams &p, QubitRange reg, int n_qubits) {
    if (reg.count != p.n_x || p.values.size() != static_cast<size_t>(p.steps * VariationalParams::per_step(p.n_x))) {
        throw std::invalid_argument("ansatz_circuit: parameters do not match the register");
    }
    const double d2 = make_grid(p.n_x).spacing * make_grid(p.n_x).spacing;
    Circuit c(n_qubits < 0 ? reg.end() : n_qubits);
    for (int s = 0; s < p.steps; ++s) {
        c.append(phase_p2(reg, p.rho_p(s) * d2, c.n_qubits()));
        c.append(phase_x2(reg, p.rho_x(s) * d2, c.n_qubits()));
        for (int q = 0; q < p.n_x; ++q) {
            c.add(rx(reg[q], p.theta(s, q, 0)));
            c.add(ry(reg[q], p.theta(s, q, 1)));
            c.add(rz(reg[q], p.theta(s, q, 2)));
        }
    }
    return c;
}

double ansatz_fidelity(const VariationalParams &p) {
    StateVector psi(p.n_x);
    apply_circuit(psi, ansatz_circuit(p, {0, p.n_x}));
    Vec target = normalized_ground(make_grid(p.n_x));
    cplx overlap = 0;
    for (size_t i = 0; i < psi.size(); ++i) {
        overlap += std::conj(target[static_cast<Eigen::Index>(i)]) * psi[i];
    }
    return std::norm(overlap);
}

PrepResult optimize_gaussian(int n_x, int steps, uint64_t seed, const PrepOptions &options) {
    if (n_x < 1 || n_x > 8) {
        throw std::invalid_argument("optimize_gaussian: n_x must be in [1, 8]");
    }
    if (steps < 1 || options.max_restarts < 1) {
        throw std::invalid_argument("optimize_gaussian: need steps >= 1 and a positive restart budget");
    }
    AnsatzModel model(n_x);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rho_dist(-kPi, kPi);
    std::uniform_real_distribution<double> angle_dist(-2 * kPi, 2 * kPi);

    PrepResult best;
    best.params = VariationalParams(n_x, steps);
    best.fidelity = model_fidelity(model, best.params);
    const size_t count = best.params.size();

    for (int restart = 0; restart < options.max_restarts; ++restart) {
        VariationalParams p(n_x, steps);
        for (size_t k = 0; k < count; ++k) {
            p.values[k] = p.is_rotation(k) ? angle_dist(rng) : rho_dist(rng);
        }
        double f = model_fidelity(model, p);
        int sweeps = 0;
        for (; sweeps < options.max_sweeps && f < options.target + kTargetMargin; ++sweeps) {
            const double before = f;
            // left = (gates after k)† target, starting with everything after gate 0.
            Vec left = model.target();
            for (size_t k = count; k-- > 1;) {
                model.apply(p, k, left, true);
            }
            Vec right = Vec::Zero(model.n());
            right[0] = 1;
            const std::vector<double> start = p.values;
            for (size_t k = 0; k < count; ++k) {
                f = model.optimize(p, k, left, right);
                model.apply(p, k, right);
                if (k + 1 < count) {
                    model.apply(p, k + 1, left);
                }
            }
            f = pattern_move(model, p, start, f);
            if (f - before < options.min_gain) {
                ++sweeps;
                break;
            }
        }
        best.sweeps += sweeps;
        best.restarts = restart + 1;
        if (f > best.fidelity) {
            best.fidelity = f;
            best.params = p;
        }
        if (best.fidelity >= options.target + kTargetMargin) {
            break;
        }
    }
    // Report what the circuit itself reproduces.
    best.fidelity = ansatz_fidelity(best.params);
    best.reached_target = best.fidelity >= options.target;
    return best;
}

Circuit electron_ground_2site(double t, int e0, int e1, int n_qubits) {
    if (e0 < 0 || e1 < 0 || e0 == e1) {
        throw std::invalid_argument("electron_ground_2site: need two distinct qubits");
    }
    Circuit c(n_qubits < 0 ? std::max(e0, e1) + 1 : n_qubits);
    if (t > 0) {
        c.add(pauli_x(e0));
    }
    c.add(hadamard(e0));
    c.add(cnot(e0, e1));
    c.add(pauli_x(e0));
    return c;
}

StateVector assemble_input(const EPModel &model, const QubitLayout &layout, const VariationalParams &p) {
    if (!layout.matches(model)) {
        throw std::invalid_argument("assemble_input: layout does not match the model");
    }
    if (model.n_orbitals() != 2) {
        throw std::invalid_argument("assemble_input: the electron state is defined for 2 orbitals");
    }
    if (p.n_x != model.n_x()) {
        throw std::invalid_argument("assemble_input: parameters built for a different n_x");
    }
    double t = 0;
    for (const auto &h : model.hoppings()) {
        t += h.t;
    }
    const int width = layout.total_qubits();
    Circuit c(width);
    c.append(electron_ground_2site(t == 0 ? 1.0 : t, layout.electron(0), layout.electron(1), width));
    for (int n = 0; n < model.n_modes(); ++n) {
        c.append(ansatz_circuit(p, layout.phonon(n), width));
    }
    StateVector psi(width);
    apply_circuit(psi, c);
    return psi;
}

std::string format_params(const VariationalParams &p, double fidelity) {
    std::string out;
    if (fidelity >= 0) {
        out += fmt::format("# fidelity {:.12f}\n", fidelity);
    }
    out += fmt::format("n_x = {}\nsteps = {}\n", p.n_x, p.steps);
    for (size_t k = 0; k < p.values.size(); ++k) {
        out += fmt::format("value.{} = {:.17g}\n", k, p.values[k]);
    }
    return out;
}

VariationalParams parse_params(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw std::invalid_argument("params file: expected 'key = value'");
            }
            continue;
        }
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    if (!kv.count("n_x") || !kv.count("steps")) {
        throw std::invalid_argument("params file: missing n_x or steps");
    }
    VariationalParams p(std::stoi(kv["n_x"]), std::stoi(kv["steps"]));
    for (size_t k = 0; k < p.values.size(); ++k) {
        auto it = kv.find(fmt::format("value.{}", k));
        if (it == kv.end()) {
            throw std::invalid_argument(fmt::format("params file: missing value.{}", k));
        }
        p.values[k] = std::stod(it->second);
    }
    if (kv.size() != p.values.size() + 2) {
        throw std::invalid_argument("params file: unexpected keys");
    }
    return p;
}

VariationalParams load_params(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open params file '{}'", path));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_params(buf.str());
}

}  // namespace ephq
