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

#include "qnet/gaussian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/core.h>

namespace qnet {
namespace {

std::vector<Eigen::Index> quadrature_indices(std::span<const ModeIndex> modes) {
    std::vector<Eigen::Index> q;
    q.reserve(2 * modes.size());
    for (ModeIndex m : modes) {
        q.push_back(static_cast<Eigen::Index>(2 * m));
        q.push_back(static_cast<Eigen::Index>(2 * m + 1));
    }
    return q;
}

void check_mode(const GaussianState& state, ModeIndex mode, const char* what) {
    if (mode >= state.n_modes()) {
        throw std::out_of_range(fmt::format("{}: mode {} out of range for {} modes", what, mode,
                                            state.n_modes()));
    }
}

void check_mode_list(const GaussianState& state, std::span<const ModeIndex> modes, const char* what) {
    std::vector<bool> seen(state.n_modes(), false);
    for (ModeIndex m : modes) {
        check_mode(state, m, what);
        if (seen[m]) throw std::invalid_argument(fmt::format("{}: duplicate mode {}", what, m));
        seen[m] = true;
    }
}

}  // namespace

GaussianState::GaussianState(const RealMatrix& covariance, RealVector displacement)
    : excess_(covariance - RealMatrix::Identity(covariance.rows(), covariance.cols())),
      displacement_(std::move(displacement)) {
    validate();
}

GaussianState::GaussianState(RealMatrix excess, RealVector displacement, Trusted)
    : excess_(std::move(excess)), displacement_(std::move(displacement)) {}

GaussianState GaussianState::from_excess(RealMatrix excess, RealVector displacement) {
    GaussianState state(std::move(excess), std::move(displacement), Trusted{});
    state.validate();
    return state;
}

void GaussianState::validate() const {
    const auto n = displacement_.size();
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("GaussianState: displacement must have even positive length");
    if (excess_.rows() != n || excess_.cols() != n)
        throw std::invalid_argument("GaussianState: covariance shape does not match displacement");
    if (!excess_.allFinite() || !displacement_.allFinite())
        throw NumericalError("GaussianState: non-finite entries");
    const double scale = std::max(1.0, excess_.cwiseAbs().maxCoeff());
    if ((excess_ - excess_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("GaussianState: covariance is not symmetric");
    if (uncertainty_margin() < -1e-9)
        throw std::invalid_argument("GaussianState: covariance violates the uncertainty relation");
}

RealMatrix GaussianState::covariance() const {
    return excess_ + RealMatrix::Identity(excess_.rows(), excess_.cols());
}

double GaussianState::mean_photon_number() const {
    return 0.25 * (excess_.trace() + displacement_.squaredNorm());
}

double GaussianState::mean_photon_number(ModeIndex mode) const {
    check_mode(*this, mode, "mean_photon_number");
    const auto x = static_cast<Eigen::Index>(2 * mode);
    return 0.25 * (excess_(x, x) + excess_(x + 1, x + 1) + displacement_(x) * displacement_(x) +
                   displacement_(x + 1) * displacement_(x + 1));
}

double GaussianState::uncertainty_margin() const {
    const ComplexMatrix h = covariance().cast<Complex>() +
                            Complex(0.0, 1.0) * symplectic_form(n_modes()).cast<Complex>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool SymplecticMatrix::is_symplectic(double tol) const {
    if (matrix.rows() != matrix.cols() || matrix.rows() % 2 != 0) return false;
    const RealMatrix omega = symplectic_form(n_modes());
    return (matrix * omega * matrix.transpose() - omega).cwiseAbs().maxCoeff() <= tol;
}

RealMatrix symplectic_form(std::size_t n_modes) {
    const auto n = static_cast<Eigen::Index>(n_modes);
    RealMatrix omega = RealMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    return omega;
}

GaussianState vacuum_state(std::size_t n_modes) {
    if (n_modes == 0) throw std::invalid_argument("vacuum_state: need at least one mode");
    const auto n = static_cast<Eigen::Index>(2 * n_modes);
    return GaussianState(RealMatrix::Zero(n, n), RealVector::Zero(n), GaussianState::Trusted{});
}

GaussianState apply_two_mode_squeezer(const GaussianState& state, ModeIndex mode_i, ModeIndex mode_j,
                                      double s) {
    check_mode(state, mode_i, "apply_two_mode_squeezer");
    check_mode(state, mode_j, "apply_two_mode_squeezer");
    if (mode_i == mode_j) throw std::invalid_argument("apply_two_mode_squeezer: modes must differ");
    if (!std::isfinite(s)) throw std::invalid_argument("apply_two_mode_squeezer: non-finite squeezing");
    if (s == 0.0) return state;

    const std::array<ModeIndex, 2> modes{mode_i, mode_j};
    const auto q = quadrature_indices(modes);
    const double c = std::cosh(s);
    const double sh = std::sinh(s);
    RealMatrix sym(4, 4);
    sym << c, 0, sh, 0,
           0, c, 0, -sh,
           sh, 0, c, 0,
           0, -sh, 0, c;
    // S S^T - I, written with sinh to keep weak squeezing exact.
    const double grow = 2.0 * sh * sh;
    const double corr = std::sinh(2.0 * s);
    RealMatrix vac(4, 4);
    vac << grow, 0, corr, 0,
           0, grow, 0, -corr,
           corr, 0, grow, 0,
           0, -corr, 0, grow;

    RealMatrix excess = state.excess_;
    excess(q, Eigen::all) = (sym * excess(q, Eigen::all)).eval();
    excess(Eigen::all, q) = (excess(Eigen::all, q) * sym.transpose()).eval();
    excess(q, q) += vac;
    RealVector disp = state.displacement_;
    disp(q) = (sym * disp(q)).eval();
    return GaussianState(std::move(excess), std::move(disp), GaussianState::Trusted{});
}

GaussianState apply_displacement(const GaussianState& state, ModeIndex mode, Complex alpha) {
    check_mode(state, mode, "apply_displacement");
    RealVector disp = state.displacement_;
    disp(static_cast<Eigen::Index>(2 * mode)) += 2.0 * alpha.real();
    disp(static_cast<Eigen::Index>(2 * mode + 1)) += 2.0 * alpha.imag();
    return GaussianState(state.excess_, std::move(disp), GaussianState::Trusted{});
}

bool is_unitary(const ComplexMatrix& matrix, double tol) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) return false;
    const ComplexMatrix gram = matrix.adjoint() * matrix;
    return (gram - ComplexMatrix::Identity(matrix.rows(), matrix.cols())).cwiseAbs().maxCoeff() <= tol;
}

SymplecticMatrix symplectic_from_unitary(const ComplexMatrix& unitary) {
    if (!is_unitary(unitary)) throw std::invalid_argument("symplectic_from_unitary: matrix is not unitary");
    const Eigen::Index m = unitary.rows();
    RealMatrix s(2 * m, 2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double re = unitary(i, j).real();
            const double im = unitary(i, j).imag();
            s(2 * i, 2 * j) = re;
            s(2 * i, 2 * j + 1) = -im;
            s(2 * i + 1, 2 * j) = im;
            s(2 * i + 1, 2 * j + 1) = re;
        }
    }
    return {std::move(s)};
}

GaussianState apply_interferometer(const GaussianState& state, const ComplexMatrix& unitary,
                                   std::span<const ModeIndex> modes) {
    if (static_cast<Eigen::Index>(modes.size()) != unitary.rows())
        throw std::invalid_argument(fmt::format("apply_interferometer: {} modes for a {}x{} unitary",
                                                modes.size(), unitary.rows(), unitary.cols()));
    check_mode_list(state, modes, "apply_interferometer");
    const RealMatrix sym = symplectic_from_unitary(unitary).matrix;
    const auto q = quadrature_indices(modes);

    RealMatrix excess = state.excess_;
    excess(q, Eigen::all) = (sym * excess(q, Eigen::all)).eval();
    excess(Eigen::all, q) = (excess(Eigen::all, q) * sym.transpose()).eval();
    RealVector disp = state.displacement_;
    disp(q) = (sym * disp(q)).eval();
    return GaussianState(std::move(excess), std::move(disp), GaussianState::Trusted{});
}

GaussianState apply_loss(const GaussianState& state, double eta, std::span<const ModeIndex> modes) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument(fmt::format("apply_loss: transmissivity {} outside [0, 1]", eta));
    check_mode_list(state, modes, "apply_loss");
    const auto q = quadrature_indices(modes);
    const double amp = std::sqrt(eta);
    RealMatrix excess = state.excess_;
    excess(q, Eigen::all) *= amp;
    excess(Eigen::all, q) *= amp;
    RealVector disp = state.displacement_;
    disp(q) *= amp;
    return GaussianState(std::move(excess), std::move(disp), GaussianState::Trusted{});
}

GaussianState apply_uniform_loss(const GaussianState& state, double eta) {
    std::vector<ModeIndex> all(state.n_modes());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return apply_loss(state, eta, all);
}

GaussianState reduced_state(const GaussianState& state, std::span<const ModeIndex> modes) {
    if (modes.empty()) throw std::invalid_argument("reduced_state: empty mode subset");
    check_mode_list(state, modes, "reduced_state");
    const auto q = quadrature_indices(modes);
    return GaussianState(state.excess_(q, q), state.displacement_(q), GaussianState::Trusted{});
}

}  // namespace qnet
