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

#include "ephq/model.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <optional>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ephq {

namespace {

void require(bool ok, const std::string &what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view key, std::string_view v) {
    std::string s(v);
    size_t used = 0;
    double out = 0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    require(used == s.size() && !s.empty(), fmt::format("model file: bad number for '{}': '{}'", key, s));
    return out;
}

int parse_int(std::string_view key, std::string_view v) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    require(ec == std::errc() && ptr == v.data() + v.size(),
            fmt::format("model file: bad integer for '{}': '{}'", key, v));
    return out;
}

}  // namespace

EPModel::EPModel(int n_orbitals, int n_x, std::vector<Hopping> hoppings,
                 std::vector<PhononMode> modes,
                 std::vector<DensityCoupling> density_couplings,
                 std::vector<PhononCoupling> phonon_couplings)
    : n_orbitals_(n_orbitals),
      n_x_(n_x),
      hoppings_(std::move(hoppings)),
      modes_(std::move(modes)),
      density_couplings_(std::move(density_couplings)),
      phonon_couplings_(std::move(phonon_couplings)) {
    require(n_orbitals_ > 0, "EPModel: need at least one orbital");
    require(n_x_ >= 1 && n_x_ <= 16, "EPModel: n_x must be in [1, 16]");
    auto orbital_ok = [&](int k) { return k >= 0 && k < n_orbitals_; };
    auto mode_ok = [&](int k) { return k >= 0 && k < n_modes(); };
    for (const auto &h : hoppings_) {
        require(orbital_ok(h.i) && orbital_ok(h.j), "EPModel: hopping references unknown orbital");
        require(h.i != h.j, "EPModel: hopping needs i != j");
    }
    for (const auto &m : modes_) {
        require(m.omega > 0 && std::isfinite(m.omega), "EPModel: mode frequency must be positive");
    }
    for (const auto &c : density_couplings_) {
        require(orbital_ok(c.i) && orbital_ok(c.j), "EPModel: coupling references unknown orbital");
        require(mode_ok(c.mode), "EPModel: coupling references unknown mode");
    }
    for (const auto &k : phonon_couplings_) {
        require(mode_ok(k.n) && mode_ok(k.m) && k.n != k.m, "EPModel: phonon coupling needs two distinct modes");
    }
    for (const auto &k : phonon_couplings_) {
        require(mode_ok(k.n) && mode_ok(k.m), "EPModel: phonon coupling references unknown mode");
        require(k.n != k.m, "EPModel: phonon coupling needs distinct modes");
    }
}

double coupling_alpha(const HolsteinModel &h) {
    require(h.t > 0, "coupling_alpha: t must be positive");
    require(h.omega > 0, "coupling_alpha: omega must be positive");
    return h.g * h.g / (2.0 * h.omega * h.omega * h.t);
}

HolsteinModel holstein_from_alpha(int n_sites, double t, double omega,
                                  double alpha, int n_x) {
    require(t > 0 && omega > 0, "holstein_from_alpha: t and omega must be positive");
    require(alpha >= 0, "holstein_from_alpha: alpha must be non-negative");
    HolsteinModel h;
    h.n_sites = n_sites;
    h.t = t;
    h.omega = omega;
    h.g = std::sqrt(2.0 * alpha * omega * omega * t);
    h.n_x = n_x;
    return h;
}

std::vector<std::pair<int, int>> chain_bonds(int n_sites, Boundary boundary) {
    std::vector<std::pair<int, int>> bonds;
    for (int i = 0; i + 1 < n_sites; ++i) {
        bonds.emplace_back(i, i + 1);
    }
    if (boundary == Boundary::periodic && n_sites > 2) {
        bonds.emplace_back(0, n_sites - 1);
    }
    return bonds;
}

EPModel holstein_to_ep(const HolsteinModel &h) {
    require(h.n_sites >= 1, "HolsteinModel: need at least one site");
    require(h.omega > 0, "HolsteinModel: omega must be positive");
    std::vector<Hopping> hoppings;
    for (auto [i, j] : chain_bonds(h.n_sites, h.boundary)) {
        hoppings.push_back({i, j, h.t});
    }
    std::vector<PhononMode> modes;
    std::vector<DensityCoupling> couplings;
    for (int i = 0; i < h.n_sites; ++i) {
        modes.push_back({i, h.omega});
        if (h.g != 0.0) {
            couplings.push_back({i, i, i, h.g});
        }
    }
    return EPModel(h.n_sites, h.n_x, std::move(hoppings), std::move(modes),
                   std::move(couplings));
}

QubitLayout::QubitLayout(int n_orbitals, int n_modes, int n_x, int n_ancilla)
    : n_orbitals_(n_orbitals), n_modes_(n_modes), n_x_(n_x), n_ancilla_(n_ancilla) {
    require(n_orbitals >= 0 && n_modes >= 0 && n_x >= 1 && n_ancilla >= 0,
            "QubitLayout: negative sizes");
}

QubitLayout QubitLayout::for_model(const EPModel &model, int n_ancilla) {
    return QubitLayout(model.n_orbitals(), model.n_modes(), model.n_x(), n_ancilla);
}

int QubitLayout::electron(int orbital) const {
    if (orbital < 0 || orbital >= n_orbitals_) {
        throw std::out_of_range("QubitLayout: orbital out of range");
    }
    return orbital;
}

QubitRange QubitLayout::phonon(int mode) const {
    if (mode < 0 || mode >= n_modes_) {
        throw std::out_of_range("QubitLayout: mode out of range");
    }
    return {n_orbitals_ + mode * n_x_, n_x_};
}

bool QubitLayout::matches(const EPModel &model) const {
    return model.n_orbitals() == n_orbitals_ && model.n_modes() == n_modes_ &&
           model.n_x() == n_x_;
}

HolsteinModel parse_model(std::string_view text) {
    std::map<std::string, std::string, std::less<>> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        auto eq = view.find('=');
        require(eq != std::string_view::npos,
                fmt::format("model file line {}: expected 'key = value'", line_no));
        std::string key(trim(view.substr(0, eq)));
        std::string value(trim(view.substr(eq + 1)));
        require(!key.empty(), fmt::format("model file line {}: empty key", line_no));
        require(kv.emplace(key, value).second,
                fmt::format("model file line {}: duplicate key '{}'", line_no, key));
    }

    HolsteinModel h;
    std::optional<double> alpha;
    bool has_g = false;
    for (const auto &[key, value] : kv) {
        if (key == "sites") {
            h.n_sites = parse_int(key, value);
        } else if (key == "t") {
            h.t = parse_double(key, value);
        } else if (key == "omega") {
            h.omega = parse_double(key, value);
        } else if (key == "g") {
            h.g = parse_double(key, value);
            has_g = true;
        } else if (key == "alpha") {
            alpha = parse_double(key, value);
        } else if (key == "n_x") {
            h.n_x = parse_int(key, value);
        } else if (key == "boundary") {
            require(value == "open" || value == "periodic",
                    "model file: boundary must be 'open' or 'periodic'");
            h.boundary = value == "open" ? Boundary::open : Boundary::periodic;
        } else {
            throw std::invalid_argument(fmt::format("model file: unknown key '{}'", key));
        }
    }
    require(!(has_g && alpha), "model file: give either g or alpha, not both");
    require(h.n_sites >= 1, "model file: sites must be >= 1");
    require(h.n_x >= 1 && h.n_x <= 16, "model file: n_x must be in [1, 16]");
    require(h.omega > 0, "model file: omega must be positive");
    if (alpha) {
        auto converted = holstein_from_alpha(h.n_sites, h.t, h.omega, *alpha, h.n_x);
        converted.boundary = h.boundary;
        return converted;
    }
    return h;
}

HolsteinModel load_model_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open model file '{}'", path));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string format_model(const HolsteinModel &h) {
    return fmt::format("sites = {}\nt = {:.17g}\nomega = {:.17g}\ng = {:.17g}\nn_x = {}\nboundary = {}\n",
                       h.n_sites, h.t, h.omega, h.g, h.n_x,
                       h.boundary == Boundary::open ? "open" : "periodic");
}

}  // namespace ephq
