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

#include <algorithm>

#include "qnet/optimizer.hpp"

using namespace qnet;

namespace {

NetworkConfig qubit() {
    NetworkConfig c;
    c.d = 2;
    c.k = 2;
    return c;
}

NetworkConfig qutrit_hsps() {
    NetworkConfig c;
    c.d = 3;
    c.k = 3;
    c.ancilla = AncillaKind::HSPS;
    return c;
}

OptOptions quick() {
    OptOptions o;
    o.coarse_points = 8;
    o.refine_rounds = 3;
    return o;
}

}  // namespace

TEST_CASE("log grids") {
    const auto g = log_grid(1e-3, 1.0, 4);
    REQUIRE(g.size() == 4);
    CHECK(g.front() == doctest::Approx(1e-3));
    CHECK(g[1] == doctest::Approx(1e-2));
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(log_grid(0.5, 0.5, 1) == std::vector<double>{0.5});
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("single-cell scan equals a direct evaluation") {
    NetworkConfig c = qutrit_hsps();
    c.s = 0.3;
    c.xi = 0.2;
    const auto surface = grid_scan(c, {0.3}, {0.2});
    CHECK(surface.bits.rows() == 1);
    CHECK(surface.bits.cols() == 1);
    CHECK(surface.bits(0, 0) == evaluate_key_rate(c).bits_per_round);
    CHECK(surface.s_axis.name == "s");
    CHECK(surface.ancilla_axis.name == "xi");
}

TEST_CASE("surface shape, argmax and threads") {
    const auto s = log_grid(0.05, 1.0, 5);
    const auto a = log_grid(0.05, 1.0, 4);
    const auto one = grid_scan(qutrit_hsps(), s, a, 1);
    const auto three = grid_scan(qutrit_hsps(), s, a, 3);
    CHECK(one.bits.rows() == 5);
    CHECK(one.bits.cols() == 4);
    CHECK(one.reports.size() == 20);
    CHECK((one.bits - three.bits).cwiseAbs().maxCoeff() == 0.0);
    CHECK(one.bits(static_cast<Eigen::Index>(one.best_row), static_cast<Eigen::Index>(one.best_col)) ==
          one.bits.maxCoeff());
}

TEST_CASE("sources switched off give a zero surface with diagnostics") {
    const auto surface = grid_scan(qutrit_hsps(), {0.0, 0.0}, {0.0});
    CHECK(surface.bits.cwiseAbs().maxCoeff() == 0.0);
    CHECK(surface.failed(0, 0));
    CHECK(surface.best_row == 0);
    CHECK(surface.best_col == 0);
    CHECK_THROWS_AS(grid_scan(qutrit_hsps(), {}, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(grid_scan(qutrit_hsps(), {-0.1}, {0.1}), std::invalid_argument);
}

TEST_CASE("qubit rate along s has an interior maximum") {
    const auto s = log_grid(1e-3, 1.2, 16);
    const auto surface = grid_scan(qubit(), s, {0.1});
    const auto& col = surface.bits.col(0);
    Eigen::Index best = 0;
    col.maxCoeff(&best);
    CHECK(best > 0);
    CHECK(best < col.size() - 1);
    CHECK(col(0) < 1e-3 * col(best));
}

TEST_CASE("qubit optimum") {
    OptBounds bounds;
    bounds.s_max = 1.0;
    const auto r = optimize_rate(qubit(), 0.0, bounds, quick());
    CHECK(r.best_s > bounds.s_min);
    CHECK(r.best_s < bounds.s_max);
    CHECK(r.evaluations > 0);
    NetworkConfig c = qubit();
    c.s = r.best_s;
    CHECK(std::abs(evaluate_key_rate(c).bits_per_round - r.bits_per_round) < 1e-10);

    const auto again = optimize_rate(qubit(), 0.0, bounds, quick());
    CHECK(again.best_s == r.best_s);
    CHECK(again.bits_per_round == r.bits_per_round);
    CHECK(again.evaluations == r.evaluations);
}

TEST_CASE("qubits beat qutrits without crosstalk") {
    const auto q2 = optimize_rate(qubit(), 0.0, OptBounds::defaults_for(AncillaKind::TMS), quick());
    const auto q3 = optimize_rate(qutrit_hsps(), 0.0, OptBounds::defaults_for(AncillaKind::HSPS), quick());
    CHECK(q2.bits_per_round > q3.bits_per_round);
    CHECK(q3.best_s > 0.0);
    CHECK(q3.best_ancilla > 0.0);
}

TEST_CASE("seeds are never lost") {
    OptOptions o = quick();
    o.coarse_points = 3;
    o.refine_rounds = 1;
    const auto s = log_grid(0.1, 0.8, 4);
    const auto x = log_grid(0.1, 0.8, 4);
    for (double si : s)
        for (double xj : x) o.seeds.emplace_back(si, xj);
    const auto surface = grid_scan(qutrit_hsps(), s, x);
    const auto r = optimize_rate(qutrit_hsps(), 0.0, OptBounds::defaults_for(AncillaKind::HSPS), o);
    CHECK(r.bits_per_round >= surface.bits.maxCoeff());
}

TEST_CASE("noise sweeps") {
    const OptBounds bounds = OptBounds::defaults_for(AncillaKind::TMS);
    const auto single = noise_sweep(qubit(), {0.0}, bounds, quick());
    REQUIRE(single.size() == 1);
    const auto direct = optimize_rate(qubit(), 0.0, bounds, quick());
    CHECK(single[0].bits_per_round == direct.bits_per_round);
    CHECK(single[0].best_s == direct.best_s);

    const std::vector<double> thetas{0.0, 0.05, 0.1};
    const auto warm = noise_sweep(qubit(), thetas, bounds, quick(), true);
    const auto cold = noise_sweep(qubit(), thetas, bounds, quick(), false);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        CHECK(warm[i].theta == thetas[i]);
        CHECK(std::abs(warm[i].bits_per_round - cold[i].bits_per_round) < 1e-6);
    }
    CHECK_THROWS_AS(noise_sweep(qubit(), {0.1, 0.0}, bounds), std::invalid_argument);
    CHECK_THROWS_AS(noise_sweep(qubit(), {-0.1}, bounds), std::invalid_argument);
}
