/*
 * Copyright 2026 The qnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qnet/circuits.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>
#include <fmt/format.h>

namespace qnet {
namespace {

constexpr int kMaxDimension = 8;

Complex root_of_unity(double numerator, double n) {
    const double angle = 2.0 * std::numbers::pi * numerator / n;
    return {std::cos(angle), std::sin(angle)};
}

ModeList consecutive(std::size_t start, std::size_t count) {
    ModeList out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + i;
    return out;
}

bool nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::string_view to_string(AncillaKind kind) {
    switch (kind) {
        case AncillaKind::WCS: return "WCS";
        case AncillaKind::TMS: return "TMS";
        case AncillaKind::HSPS: return "HSPS";
        case AncillaKind::IdealOracle: return "IDEAL_ORACLE";
    }
    return "?";
}

std::string_view to_string(Basis basis) { return basis == Basis::Key ? "KEY" : "TEST"; }

std::string_view to_string(BsmTopology topology) {
    return topology == BsmTopology::Circulant ? "circulant" : "per_level";
}

AncillaKind parse_ancilla_kind(std::string_view text) {
    if (text == "WCS") return AncillaKind::WCS;
    if (text == "TMS") return AncillaKind::TMS;
    if (text == "HSPS") return AncillaKind::HSPS;
    if (text == "IDEAL_ORACLE") return AncillaKind::IdealOracle;
    throw ConfigError(fmt::format("ancilla: unknown kind '{}' (expected WCS, TMS, HSPS or IDEAL_ORACLE)", text));
}

Basis parse_basis(std::string_view text) {
    if (text == "KEY") return Basis::Key;
    if (text == "TEST") return Basis::Test;
    throw ConfigError(fmt::format("basis: unknown basis '{}' (expected KEY or TEST)", text));
}

BsmTopology parse_topology(std::string_view text) {
    if (text == "circulant") return BsmTopology::Circulant;
    if (text == "per_level") return BsmTopology::PerLevel;
    throw ConfigError(fmt::format("topology: unknown topology '{}' (expected circulant or per_level)", text));
}

std::vector<ConfigIssue> NetworkConfig::issues() const {
    std::vector<ConfigIssue> out;
    if (d < 2 || d > kMaxDimension) out.push_back({"d", fmt::format("d={} must lie in [2, {}]", d, kMaxDimension)});
    if (k < 1 || (d >= 1 && d % k != 0)) out.push_back({"k", fmt::format("k={} must divide d={}", k, d)});
    if (!nonnegative(s)) out.push_back({"s", fmt::format("s={} must be non-negative", s)});
    if (!nonnegative(xi)) out.push_back({"xi", fmt::format("xi={} must be non-negative", xi)});
    if (!nonnegative(alpha)) out.push_back({"alpha", fmt::format("alpha={} must be non-negative", alpha)});
    if (!nonnegative(theta)) out.push_back({"theta", fmt::format("theta={} must be non-negative", theta)});
    if (eta && !(*eta >= 0.0 && *eta <= 1.0)) out.push_back({"eta", fmt::format("eta={} must lie in [0, 1]", *eta)});
    if (ancilla == AncillaKind::WCS && d != 3)
        out.push_back({"ancilla", fmt::format("ancilla=WCS requires d=3 (got d={})", d)});
    if (ancilla == AncillaKind::TMS && d > 2 && (d - 2) % 2 != 0)
        out.push_back({"ancilla", fmt::format("ancilla=TMS needs an even number of ancilla photons (d={})", d)});
    return out;
}

void NetworkConfig::validate() const {
    const auto found = issues();
    if (found.empty()) return;
    std::vector<std::string> parts;
    for (const auto& issue : found) parts.push_back(issue.message);
    throw ConfigError(fmt::format("invalid network configuration: {}", fmt::join(parts, "; ")));
}

double NetworkConfig::ancilla_parameter() const { return ancilla == AncillaKind::WCS ? alpha : xi; }

void NetworkConfig::set_ancilla_parameter(double value) {
    if (ancilla == AncillaKind::WCS) {
        alpha = value;
    } else {
        xi = value;
    }
}

ModeList NetworkLayout::bsm_inputs() const {
    ModeList out(alice_signal);
    out.insert(out.end(), bob_signal.begin(), bob_signal.end());
    for (const auto& path : ancilla_paths) out.insert(out.end(), path.begin(), path.end());
    return out;
}

ModeList NetworkLayout::bsm_output_modes() const {
    ModeList out;
    for (const auto& group : bsm_output) out.insert(out.end(), group.begin(), group.end());
    return out;
}

GaussianState CompiledNetwork::output_state() const {
    if (!photons.empty())
        throw std::invalid_argument("output_state: single-photon ancillas have no Gaussian description");
    GaussianState state = input;
    for (const auto& stage : stages) state = apply_interferometer(state, stage.unitary, stage.modes);
    if (idler_eta < 1.0) {
        ModeList idlers(layout.alice_idler);
        idlers.insert(idlers.end(), layout.bob_idler.begin(), layout.bob_idler.end());
        state = apply_loss(state, idler_eta, idlers);
    }
    return state;
}

ComplexMatrix CompiledNetwork::full_unitary() const {
    const auto n = static_cast<Eigen::Index>(layout.n_modes);
    ComplexMatrix total = ComplexMatrix::Identity(n, n);
    for (const auto& stage : stages) {
        ComplexMatrix embedded = ComplexMatrix::Identity(n, n);
        for (std::size_t r = 0; r < stage.modes.size(); ++r)
            for (std::size_t c = 0; c < stage.modes.size(); ++c)
                embedded(static_cast<Eigen::Index>(stage.modes[r]), static_cast<Eigen::Index>(stage.modes[c])) =
                    stage.unitary(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        total = embedded * total;
    }
    return total;
}

ComplexMatrix dft_matrix(std::size_t n) {
    if (n == 0) throw std::invalid_argument("dft_matrix: dimension must be positive");
    const auto size = static_cast<Eigen::Index>(n);
    ComplexMatrix f(size, size);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index j = 0; j < size; ++j)
        for (Eigen::Index k = 0; k < size; ++k)
            f(j, k) = norm * root_of_unity(static_cast<double>((j * k) % size), static_cast<double>(n));
    return f;
}

ComplexMatrix crosstalk_hamiltonian(std::size_t d) {
    if (d < 2) throw std::invalid_argument("crosstalk_hamiltonian: d must be >= 2");
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix hop = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) hop(i, (i + 1) % n) += 1.0;
    return hop + hop.adjoint();
}

ComplexMatrix crosstalk_unitary(std::size_t d, double theta) {
    if (!nonnegative(theta)) throw std::invalid_argument("crosstalk_unitary: theta must be non-negative");
    const RealMatrix h = crosstalk_hamiltonian(d).real();
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(h);
    const auto& vecs = eig.eigenvectors();
    ComplexVector phases(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::polar(1.0, -eig.eigenvalues()(i) * theta);
    return vecs.cast<Complex>() * phases.asDiagonal() * vecs.transpose().cast<Complex>();
}

ComplexMatrix measurement_basis_unitary(std::size_t d, std::size_t k, Basis basis) {
    if (k == 0 || d % k != 0)
        throw std::invalid_argument(fmt::format("measurement_basis_unitary: k={} does not divide d={}", k, d));
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    if (basis == Basis::Test) {
        const ComplexMatrix f = dft_matrix(k);
        const auto kk = static_cast<Eigen::Index>(k);
        for (Eigen::Index b = 0; b < n; b += kk) u.block(b, b, kk, kk) = f;
    }
    return u;
}

ComplexMatrix circulant_zero_mode_block(std::size_t d) {
    if (d < 2) throw std::invalid_argument("circulant_zero_mode_block: d must be >= 2");
    const auto n = static_cast<Eigen::Index>(d);
    const double dd = static_cast<double>(d);
    // Column A is (x, ..., x, z) with sum a_s^2 = 1; column B is fixed by
    // a_s b_s = -w^s t, t = 1/(d(d-1)), and its unit norm pins u = x^2.
    const double t = 1.0 / (dd * (dd - 1.0));
    RealVector a(n);
    if (d == 2) {
        a.setConstant(1.0 / std::sqrt(2.0));
    } else {
        auto f = [&](double u) { return (dd - 1.0) / u + 1.0 / (1.0 - (dd - 1.0) * u) - 1.0 / (t * t); };
        double lo = 1e-9;
        double hi = 0.5 / (dd - 1.0);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) > 0.0 ? lo : hi) = mid;
        }
        const double u = 0.5 * (lo + hi);
        a.setConstant(std::sqrt(u));
        a(n - 1) = std::sqrt(1.0 - (dd - 1.0) * u);
    }
    ComplexVector b(n);
    for (Eigen::Index s = 0; s < n; ++s) b(s) = -root_of_unity(static_cast<double>(s), dd) * t / a(s);

    // Gram-Schmidt completion, then a DFT over the complement so no ancilla
    // coupling vanishes.
    std::vector<ComplexVector> basis{a.cast<Complex>(), b};
    for (Eigen::Index e = 0; e < n && static_cast<Eigen::Index>(basis.size()) < n; ++e) {
        ComplexVector v = ComplexVector::Unit(n, e);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) v -= q.dot(v) * q;
        if (v.norm() > 1e-8) basis.push_back(v / v.norm());
    }
    if (static_cast<Eigen::Index>(basis.size()) != n) throw NumericalError("circulant_zero_mode_block: completion failed");
    ComplexMatrix w(n, n);
    for (Eigen::Index c = 0; c < n; ++c) w.col(c) = basis[static_cast<std::size_t>(c)];
    if (d > 2) w.rightCols(n - 2) = (w.rightCols(n - 2) * dft_matrix(d - 2)).eval();
    return w;
}

ComplexMatrix bsm_unitary(std::size_t d, BsmTopology topology) {
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix u = ComplexMatrix::Zero(n * n, n * n);
    const ComplexMatrix f = dft_matrix(d);
    if (topology == BsmTopology::PerLevel) {
        // Level m: DFT_d over path inputs (P, m); port p lands on position p*d+m.
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index p = 0; p < n; ++p)
                for (Eigen::Index path = 0; path < n; ++path) u(p * n + m, path * n + m) = f(p, path);
        return u;
    }
    // Level DFT on every path, path unitary W_k per Fourier mode k, inverse
    // level DFT. W_0 fixes the heralded amplitudes; W_k (k != 0) is DFT_d.
    const ComplexMatrix w0 = circulant_zero_mode_block(d);
    const double dd = static_cast<double>(d);
    for (Eigen::Index s = 0; s < n; ++s)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index path = 0; path < n; ++path)
                for (Eigen::Index m = 0; m < n; ++m) {
                    Complex acc = 0.0;
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const Complex wk = k == 0 ? w0(s, path) : f(s, path);
                        acc += wk * root_of_unity(-static_cast<double>((k * i) % n), dd) * f(k, m);
                    }
                    u(s * n + i, path * n + m) = acc / std::sqrt(dd);
                }
    return u;
}

NetworkLayout make_layout(const NetworkConfig& config) {
    config.validate();
    NetworkLayout layout;
    const auto d = static_cast<std::size_t>(config.d);
    layout.d = d;
    layout.alice_signal = consecutive(0, d);
    layout.alice_idler = consecutive(d, d);
    layout.bob_signal = consecutive(2 * d, d);
    layout.bob_idler = consecutive(3 * d, d);
    std::size_t next = 4 * d;
    const std::size_t paths = d - 2;
    for (std::size_t j = 0; j < paths; ++j, next += d) layout.ancilla_paths.push_back(consecutive(next, d));
    if (config.ancilla == AncillaKind::HSPS)
        for (std::size_t j = 0; j < paths; ++j) layout.hsps_heralds.push_back(next++);
    layout.n_modes = next;

    const ModeList inputs = layout.bsm_inputs();
    layout.bsm_output.assign(d, ModeList(d));
    for (std::size_t g = 0; g < d; ++g)
        for (std::size_t p = 0; p < d; ++p)
            layout.bsm_output[g][p] = config.topology == BsmTopology::Circulant ? inputs[g * d + p] : inputs[p * d + g];
    return layout;
}

CompiledNetwork build_network(const NetworkConfig& config) {
    NetworkLayout layout = make_layout(config);
    const std::size_t d = layout.d;
    CompiledNetwork net{config, layout, {}, {}, {}, {}, config.eta.value_or(1.0), vacuum_state(layout.n_modes), {}};

    for (std::size_t m = 0; m < d; ++m) {
        net.squeezers.push_back({layout.alice_signal[m], layout.alice_idler[m], config.s});
        net.squeezers.push_back({layout.bob_signal[m], layout.bob_idler[m], config.s});
    }
    const auto& paths = layout.ancilla_paths;
    switch (config.ancilla) {
        case AncillaKind::WCS:
            for (const auto& path : paths) net.coherent.push_back({path[0], Complex(config.alpha, 0.0)});
            break;
        case AncillaKind::TMS:
            for (std::size_t j = 0; j + 1 < paths.size(); j += 2)
                net.squeezers.push_back({paths[j][0], paths[j + 1][0], config.xi});
            break;
        case AncillaKind::HSPS:
            for (std::size_t j = 0; j < paths.size(); ++j)
                net.squeezers.push_back({paths[j][0], layout.hsps_heralds[j], config.xi});
            break;
        case AncillaKind::IdealOracle:
            for (const auto& path : paths) net.photons.push_back({path[0]});
            break;
    }

    GaussianState state = vacuum_state(layout.n_modes);
    for (const auto& sq : net.squeezers) state = apply_two_mode_squeezer(state, sq.mode_a, sq.mode_b, sq.s);
    for (const auto& coh : net.coherent) state = apply_displacement(state, coh.mode, coh.alpha);
    net.input = std::move(state);

    const ComplexMatrix splitter = dft_matrix(d);
    for (std::size_t j = 0; j < paths.size(); ++j)
        net.stages.push_back({fmt::format("ancilla_split_{}", j), splitter, paths[j]});
    net.stages.push_back({"bsm", bsm_unitary(d, config.topology), layout.bsm_inputs()});
    if (config.theta != 0.0) {
        const ComplexMatrix xt = crosstalk_unitary(d, config.theta);
        net.stages.push_back({"crosstalk_alice", xt, layout.alice_idler});
        net.stages.push_back({"crosstalk_bob", xt, layout.bob_idler});
    }
    if (config.basis == Basis::Test) {
        const ComplexMatrix mb = measurement_basis_unitary(d, static_cast<std::size_t>(config.k), Basis::Test);
        net.stages.push_back({"basis_alice", mb, layout.alice_idler});
        net.stages.push_back({"basis_bob", mb, layout.bob_idler});
    }

    net.detector_modes = layout.bsm_output_modes();
    net.detector_modes.insert(net.detector_modes.end(), layout.alice_idler.begin(), layout.alice_idler.end());
    net.detector_modes.insert(net.detector_modes.end(), layout.bob_idler.begin(), layout.bob_idler.end());
    net.detector_modes.insert(net.detector_modes.end(), layout.hsps_heralds.begin(), layout.hsps_heralds.end());
    return net;
}

}  // namespace qnet
