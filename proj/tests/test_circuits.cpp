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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qnet/circuits.hpp"
#include "qnet/detection.hpp"

using namespace qnet;

namespace {

// Truncated Taylor series of exp(-i theta H); independent of the
// eigendecomposition used by crosstalk_unitary.
ComplexMatrix taylor_exp(const ComplexMatrix& h, double theta) {
    const ComplexMatrix a = Complex(0.0, -theta) * h;
    ComplexMatrix term = ComplexMatrix::Identity(h.rows(), h.cols());
    ComplexMatrix sum = term;
    for (int n = 1; n < 60; ++n) {
        term = term * a / static_cast<double>(n);
        sum += term;
    }
    return sum;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

NetworkConfig config(int d, int k, AncillaKind kind) {
    NetworkConfig c;
    c.d = d;
    c.k = k;
    c.ancilla = kind;
    return c;
}

}  // namespace

TEST_CASE("DFT matrices") {
    const ComplexMatrix f2 = dft_matrix(2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(f2(0, 0) - r) < 1e-15);
    CHECK(std::abs(f2(1, 1) + r) < 1e-15);
    const ComplexMatrix f3 = dft_matrix(3);
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    CHECK(std::abs(f3(1, 0) - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(f3(1, 1) - w / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(f3(1, 2) - w * w / std::sqrt(3.0)) < 1e-15);
    for (std::size_t n = 1; n <= 9; ++n) {
        const ComplexMatrix f = dft_matrix(n);
        CHECK(max_abs(f * f.adjoint() - ComplexMatrix::Identity(f.rows(), f.cols())) < 1e-12);
    }
    CHECK_THROWS_AS(dft_matrix(0), std::invalid_argument);
}

TEST_CASE("crosstalk unitary") {
    CHECK(max_abs(crosstalk_unitary(3, 0.0) - ComplexMatrix::Identity(3, 3)) < 1e-15);

    const double theta = 0.37;
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const ComplexMatrix expected =
        std::cos(2 * theta) * ComplexMatrix::Identity(2, 2) - Complex(0, std::sin(2 * theta)) * x;
    CHECK(max_abs(crosstalk_unitary(2, theta) - expected) < 1e-14);
    CHECK(max_abs(crosstalk_hamiltonian(2) - 2.0 * x) == 0.0);

    const ComplexMatrix h3 = crosstalk_hamiltonian(3);
    CHECK(max_abs(h3 - h3.adjoint()) == 0.0);
    const ComplexMatrix u3 = crosstalk_unitary(3, 0.2);
    CHECK(is_unitary(u3, 1e-12));
    CHECK(max_abs(u3 - taylor_exp(h3, 0.2)) < 1e-10);
    for (std::size_t d : {4u, 5u, 8u}) CHECK(max_abs(crosstalk_unitary(d, 0.9) - taylor_exp(crosstalk_hamiltonian(d), 0.9)) < 1e-10);
    CHECK_THROWS_AS(crosstalk_unitary(3, -0.1), std::invalid_argument);
}

TEST_CASE("measurement basis unitaries") {
    CHECK(max_abs(measurement_basis_unitary(4, 4, Basis::Test) - dft_matrix(4)) < 1e-15);
    ComplexMatrix blocks = ComplexMatrix::Zero(4, 4);
    blocks.block(0, 0, 2, 2) = dft_matrix(2);
    blocks.block(2, 2, 2, 2) = dft_matrix(2);
    CHECK(max_abs(measurement_basis_unitary(4, 2, Basis::Test) - blocks) < 1e-15);
    CHECK(max_abs(measurement_basis_unitary(6, 3, Basis::Key) - ComplexMatrix::Identity(6, 6)) == 0.0);
    CHECK_THROWS_AS(measurement_basis_unitary(4, 3, Basis::Test), std::invalid_argument);
}

TEST_CASE("BSM unitaries are unitary for both topologies") {
    for (std::size_t d = 2; d <= 6; ++d) {
        CHECK(is_unitary(bsm_unitary(d, BsmTopology::Circulant), 1e-10));
        CHECK(is_unitary(bsm_unitary(d, BsmTopology::PerLevel), 1e-10));
    }
    const ComplexMatrix w0 = circulant_zero_mode_block(4);
    CHECK(is_unitary(w0, 1e-12));
}

TEST_CASE("configuration validation names the offending fields") {
    NetworkConfig c = config(4, 3, AncillaKind::TMS);
    c.s = -0.2;
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("k=3") != std::string::npos);
        CHECK(msg.find("s=-0.2") != std::string::npos);
    }
    const auto issues = c.issues();
    REQUIRE(issues.size() == 2);
    CHECK(issues[0].field == "k");
    CHECK(issues[1].field == "s");

    CHECK_THROWS_AS(config(4, 4, AncillaKind::WCS).validate(), ConfigError);
    CHECK_THROWS_AS(config(1, 1, AncillaKind::TMS).validate(), ConfigError);
    CHECK_THROWS_AS(config(5, 5, AncillaKind::TMS).validate(), ConfigError);
    NetworkConfig lossy = config(2, 2, AncillaKind::TMS);
    lossy.eta = 1.2;
    CHECK_THROWS_AS(lossy.validate(), ConfigError);
    CHECK_NOTHROW(config(3, 3, AncillaKind::WCS).validate());
    CHECK_NOTHROW(config(6, 3, AncillaKind::HSPS).validate());
}

TEST_CASE("enum parsing round trips") {
    for (auto kind : {AncillaKind::WCS, AncillaKind::TMS, AncillaKind::HSPS, AncillaKind::IdealOracle})
        CHECK(parse_ancilla_kind(to_string(kind)) == kind);
    for (auto b : {Basis::Key, Basis::Test}) CHECK(parse_basis(to_string(b)) == b);
    for (auto t : {BsmTopology::Circulant, BsmTopology::PerLevel}) CHECK(parse_topology(to_string(t)) == t);
    CHECK_THROWS_AS(parse_ancilla_kind("laser"), ConfigError);
}

TEST_CASE("mode counts") {
    const auto wcs = build_network(config(3, 3, AncillaKind::WCS));
    CHECK(wcs.layout.n_modes == 15);
    CHECK(wcs.detector_modes.size() == 15);
    CHECK(wcs.layout.bsm_output_modes().size() == 9);

    const auto tms = build_network(config(4, 2, AncillaKind::TMS));
    CHECK(tms.layout.n_modes == 24);
    CHECK(tms.detector_modes.size() == 24);
    CHECK(tms.layout.bsm_output_modes().size() == 16);

    const auto hsps = build_network(config(3, 3, AncillaKind::HSPS));
    CHECK(hsps.layout.n_modes == 16);
    CHECK(hsps.layout.hsps_heralds.size() == 1);

    const auto qubit = build_network(config(2, 2, AncillaKind::TMS));
    CHECK(qubit.layout.n_modes == 8);
    CHECK(qubit.layout.ancilla_paths.empty());

    for (const auto* net : {&wcs, &tms, &hsps, &qubit}) {
        const std::set<ModeIndex> unique(net->detector_modes.begin(), net->detector_modes.end());
        CHECK(unique.size() == net->detector_modes.size());
    }
}

TEST_CASE("layout index maps are disjoint and cover every mode") {
    const auto layout = make_layout(config(4, 4, AncillaKind::TMS));
    std::multiset<ModeIndex> seen;
    for (const auto* list : {&layout.alice_signal, &layout.alice_idler, &layout.bob_signal, &layout.bob_idler})
        seen.insert(list->begin(), list->end());
    for (const auto& path : layout.ancilla_paths) seen.insert(path.begin(), path.end());
    CHECK(seen.size() == layout.n_modes);
    for (ModeIndex m = 0; m < layout.n_modes; ++m) CHECK(seen.count(m) == 1);
}

TEST_CASE("stage stack") {
    NetworkConfig c = config(4, 2, AncillaKind::TMS);
    c.theta = 0.1;
    c.basis = Basis::Test;
    const auto net = build_network(c);
    std::vector<std::string> labels;
    for (const auto& stage : net.stages) labels.push_back(stage.label);
    const std::vector<std::string> expected{"ancilla_split_0", "ancilla_split_1", "bsm",        "crosstalk_alice",
                                            "crosstalk_bob",   "basis_alice",     "basis_bob"};
    CHECK(labels == expected);
    CHECK(is_unitary(net.full_unitary(), 1e-10));

    const auto plain = build_network(config(4, 2, AncillaKind::TMS));
    CHECK(plain.stages.size() == 3);
}

TEST_CASE("sources switched off give the vacuum") {
    NetworkConfig c = config(3, 3, AncillaKind::WCS);
    c.s = c.alpha = 0.0;
    const auto net = build_network(c);
    const auto dist = all_pattern_distribution(net.output_state(), net.detector_modes);
    CHECK(dist[0] == 1.0);
    double worst = 0.0;
    for (std::size_t m = 1; m < dist.size(); ++m) worst = std::max(worst, std::abs(dist[m]));
    CHECK(worst == 0.0);
}

TEST_CASE("Alice and Bob inputs are symmetric") {
    const auto net = build_network(config(3, 3, AncillaKind::HSPS));
    ModeList alice = net.layout.alice_signal, bob = net.layout.bob_signal;
    alice.insert(alice.end(), net.layout.alice_idler.begin(), net.layout.alice_idler.end());
    bob.insert(bob.end(), net.layout.bob_idler.begin(), net.layout.bob_idler.end());
    const RealMatrix va = reduced_state(net.input, alice).covariance();
    const RealMatrix vb = reduced_state(net.input, bob).covariance();
    CHECK((va - vb).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-photon ancillas are rejected by the Gaussian path") {
    const auto net = build_network(config(3, 3, AncillaKind::IdealOracle));
    CHECK(net.photons.size() == 1);
    CHECK_THROWS(net.output_state());
}

TEST_CASE("idler loss") {
    NetworkConfig c = config(2, 2, AncillaKind::TMS);
    c.s = 0.4;
    c.eta = 0.5;
    const auto lossy = build_network(c).output_state();
    c.eta.reset();
    const auto clean = build_network(c).output_state();
    const auto layout = make_layout(c);
    CHECK(lossy.mean_photon_number(layout.alice_idler[0]) ==
          doctest::Approx(0.5 * clean.mean_photon_number(layout.alice_idler[0])));
    CHECK(lossy.mean_photon_number(layout.alice_signal[0]) ==
          doctest::Approx(clean.mean_photon_number(layout.alice_signal[0])));
}
