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

#include "qnet/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fmt/core.h>

namespace qnet {
namespace {

unsigned total_photons(const Occupation& occ, std::size_t n_modes) {
    unsigned total = 0;
    for (std::size_t m = 0; m < n_modes; ++m) total += occ[m];
    return total;
}

double log_factorial(unsigned n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void check_state_shape(std::size_t n_modes, unsigned cutoff) {
    if (n_modes == 0 || n_modes > Occupation::kMaxModes)
        throw std::invalid_argument(fmt::format("Fock state: {} modes outside [1, {}]", n_modes, Occupation::kMaxModes));
    if (cutoff == 0 || cutoff > Occupation::kMaxPerMode)
        throw std::invalid_argument(fmt::format("Fock state: cutoff {} outside [1, {}]", cutoff, Occupation::kMaxPerMode));
}

// Coefficients of |ni, nj> -> sum_k T[ni][nj][k] |k, ni + nj - k> for the
// two-mode map a_i^dag -> u00 a_i^dag + u10 a_j^dag, a_j^dag -> u01 a_i^dag + u11 a_j^dag.
class TwoModeTransfer {
public:
    TwoModeTransfer(const Eigen::Matrix2cd& u, unsigned max_n) : max_n_(max_n) {
        table_.resize((max_n + 1) * (max_n + 1));
        std::vector<std::vector<double>> binom(max_n + 1);
        for (unsigned n = 0; n <= max_n; ++n) {
            binom[n].assign(n + 1, 1.0);
            for (unsigned r = 1; r < n; ++r) binom[n][r] = binom[n - 1][r - 1] + binom[n - 1][r];
        }
        auto power = [](Complex z, unsigned e) {
            Complex r = 1.0;
            for (unsigned i = 0; i < e; ++i) r *= z;
            return r;
        };
        for (unsigned ni = 0; ni <= max_n; ++ni) {
            for (unsigned nj = 0; ni + nj <= max_n; ++nj) {
                const unsigned total = ni + nj;
                std::vector<Complex> coeff(total + 1, 0.0);
                for (unsigned p = 0; p <= ni; ++p)
                    for (unsigned q = 0; q <= nj; ++q)
                        coeff[p + q] += binom[ni][p] * binom[nj][q] * power(u(0, 0), p) * power(u(1, 0), ni - p) *
                                        power(u(0, 1), q) * power(u(1, 1), nj - q);
                for (unsigned k = 0; k <= total; ++k)
                    coeff[k] *= std::exp(0.5 * (log_factorial(k) + log_factorial(total - k) - log_factorial(ni) -
                                                log_factorial(nj)));
                table_[ni * (max_n + 1) + nj] = std::move(coeff);
            }
        }
    }

    const std::vector<Complex>& operator()(unsigned ni, unsigned nj) const { return table_[ni * (max_n_ + 1) + nj]; }

private:
    unsigned max_n_;
    std::vector<std::vector<Complex>> table_;
};

struct Rotation {
    std::size_t row;  // acts on local modes (row - 1, row)
    Eigen::Matrix2cd unitary;
};

// U = Q_1^dag ... Q_K^dag D. Returns the rotations in application order
// (Q_K^dag first) and the diagonal.
std::pair<std::vector<Rotation>, ComplexVector> givens_factorization(const ComplexMatrix& u) {
    ComplexMatrix w = u;
    const Eigen::Index m = u.rows();
    std::vector<Rotation> forward;
    for (Eigen::Index c = 0; c + 1 < m; ++c) {
        for (Eigen::Index r = m - 1; r > c; --r) {
            const Complex x = w(r - 1, c);
            const Complex y = w(r, c);
            if (std::abs(y) == 0.0) continue;
            const double rho = std::hypot(std::abs(x), std::abs(y));
            Eigen::Matrix2cd q;
            q << std::conj(x) / rho, std::conj(y) / rho, -y / rho, x / rho;
            const Eigen::Matrix<Complex, 2, Eigen::Dynamic> rows = w.middleRows(r - 1, 2);
            w.middleRows(r - 1, 2) = q * rows;
            forward.push_back({static_cast<std::size_t>(r), q.adjoint()});
        }
    }
    std::reverse(forward.begin(), forward.end());
    return {forward, w.diagonal()};
}

}  // namespace

double FockState::norm_squared() const {
    double total = 0.0;
    for (const auto& [occ, amp] : amplitudes) total += std::norm(amp);
    return total;
}

FockState fock_vacuum(std::size_t n_modes, unsigned cutoff, unsigned photon_bound) {
    check_state_shape(n_modes, cutoff);
    FockState state{n_modes, cutoff, photon_bound, {}};
    state.amplitudes.emplace(Occupation{}, Complex(1.0, 0.0));
    return state;
}

FockState fock_sources(std::size_t n_modes, std::span<const SqueezerSource> squeezers,
                       std::span<const CoherentSource> coherent, std::span<const SinglePhotonSource> photons,
                       unsigned cutoff, unsigned photon_bound) {
    FockState state = fock_vacuum(n_modes, cutoff, photon_bound);
    std::vector<bool> used(n_modes, false);
    auto claim = [&](ModeIndex m) {
        if (m >= n_modes) throw std::out_of_range(fmt::format("fock_sources: mode {} out of range", m));
        if (used[m]) throw std::invalid_argument(fmt::format("fock_sources: mode {} fed by two sources", m));
        used[m] = true;
    };

    // Multiplies the state by a single- or two-mode factor sum_n c_n |n>(|n>).
    auto multiply = [&](const std::vector<std::pair<unsigned, Complex>>& terms, ModeIndex a,
                        std::optional<ModeIndex> b) {
        AmplitudeMap next;
        for (const auto& [occ, amp] : state.amplitudes) {
            const unsigned base = total_photons(occ, n_modes);
            for (const auto& [n, c] : terms) {
                if (c == Complex(0.0)) continue;
                const unsigned added = b ? 2 * n : n;
                if (base + added > photon_bound) continue;
                Occupation o = occ;
                o.set(a, n);
                if (b) o.set(*b, n);
                next[o] += amp * c;
            }
        }
        state.amplitudes = std::move(next);
    };

    for (const auto& sq : squeezers) {
        claim(sq.mode_a);
        claim(sq.mode_b);
        const double t = std::tanh(sq.s);
        std::vector<std::pair<unsigned, Complex>> terms;
        double c = 1.0 / std::cosh(sq.s);
        for (unsigned n = 0; n <= cutoff && 2 * n <= photon_bound; ++n, c *= t) terms.emplace_back(n, c);
        multiply(terms, sq.mode_a, sq.mode_b);
    }
    for (const auto& coh : coherent) {
        claim(coh.mode);
        std::vector<std::pair<unsigned, Complex>> terms;
        Complex c = std::exp(-0.5 * std::norm(coh.alpha));
        for (unsigned n = 0; n <= cutoff && n <= photon_bound; ++n) {
            terms.emplace_back(n, c);
            c *= coh.alpha / std::sqrt(static_cast<double>(n + 1));
        }
        multiply(terms, coh.mode, std::nullopt);
    }
    for (const auto& ph : photons) {
        claim(ph.mode);
        multiply({{1u, Complex(1.0, 0.0)}}, ph.mode, std::nullopt);
    }
    return state;
}

FockState apply_fock_interferometer(const FockState& state, const ComplexMatrix& unitary,
                                    std::span<const ModeIndex> modes) {
    if (static_cast<Eigen::Index>(modes.size()) != unitary.rows() || unitary.rows() != unitary.cols())
        throw std::invalid_argument("apply_fock_interferometer: dimension mismatch");
    if (!is_unitary(unitary)) throw std::invalid_argument("apply_fock_interferometer: matrix is not unitary");
    std::vector<bool> seen(state.n_modes, false);
    for (ModeIndex m : modes) {
        if (m >= state.n_modes || seen[m]) throw std::invalid_argument("apply_fock_interferometer: bad mode list");
        seen[m] = true;
    }

    const auto [rotations, diagonal] = givens_factorization(unitary);
    FockState out = state;
    for (auto& [occ, amp] : out.amplitudes)
        for (std::size_t l = 0; l < modes.size(); ++l) {
            const unsigned n = occ[modes[l]];
            for (unsigned i = 0; i < n; ++i) amp *= diagonal(static_cast<Eigen::Index>(l));
        }

    const unsigned max_n = std::min(2 * state.cutoff, state.photon_bound);
    for (const auto& rot : rotations) {
        const TwoModeTransfer transfer(rot.unitary, max_n);
        const ModeIndex mi = modes[rot.row - 1];
        const ModeIndex mj = modes[rot.row];
        AmplitudeMap next;
        next.reserve(out.amplitudes.size());
        for (const auto& [occ, amp] : out.amplitudes) {
            const unsigned ni = occ[mi];
            const unsigned nj = occ[mj];
            if (ni + nj == 0) {
                next[occ] += amp;
                continue;
            }
            const auto& coeff = transfer(ni, nj);
            const unsigned total = ni + nj;
            for (unsigned k = 0; k <= total; ++k) {
                if (k > state.cutoff || total - k > state.cutoff || coeff[k] == 0.0) continue;
                Occupation o = occ;
                o.set(mi, k);
                o.set(mj, total - k);
                next[o] += amp * coeff[k];
            }
        }
        out.amplitudes = std::move(next);
    }
    return out;
}

unsigned default_photon_bound(std::size_t d) { return static_cast<unsigned>(2 * d + 2); }

FockState fock_expand(const CompiledNetwork& net, unsigned cutoff, unsigned photon_bound) {
    if (cutoff == 0) throw std::invalid_argument("fock_expand: cutoff must be positive");
    if (net.idler_eta < 1.0) throw std::invalid_argument("fock_expand: lossy networks are not supported");
    FockState state = fock_sources(net.layout.n_modes, net.squeezers, net.coherent, net.photons, cutoff, photon_bound);
    for (const auto& stage : net.stages) state = apply_fock_interferometer(state, stage.unitary, stage.modes);
    return state;
}

FockState fock_expand(const CompiledNetwork& net, unsigned cutoff) {
    return fock_expand(net, cutoff, default_photon_bound(net.layout.d));
}

double oracle_click_probability(const FockState& state, std::span<const ModeIndex> detectors,
                                const ClickPattern& pattern) {
    if (pattern.size() != detectors.size())
        throw std::invalid_argument("oracle_click_probability: pattern length does not match detectors");
    double total = 0.0;
    for (const auto& [occ, amp] : state.amplitudes) {
        bool match = true;
        for (std::size_t i = 0; i < detectors.size() && match; ++i) match = (occ[detectors[i]] > 0) == pattern[i];
        if (match) total += std::norm(amp);
    }
    return total;
}

double oracle_click_probability(const FockState& state, const ClickPattern& pattern) {
    ModeList all(state.n_modes);
    std::iota(all.begin(), all.end(), ModeIndex{0});
    return oracle_click_probability(state, all, pattern);
}

ConditionalState conditional_two_qudit_state(const FockState& state, const HeraldPattern& herald,
                                             const NetworkLayout& layout) {
    const std::size_t d = layout.d;
    if (herald.d != d) throw std::invalid_argument("conditional_two_qudit_state: herald dimension mismatch");
    const ModeList clicks = herald.click_modes(layout);
    const ModeList dark = herald.dark_modes(layout);

    std::map<std::array<std::uint64_t, 2>, ComplexVector> branches;
    for (const auto& [occ, amp] : state.amplitudes) {
        if (!std::all_of(clicks.begin(), clicks.end(), [&](ModeIndex m) { return occ[m] > 0; })) continue;
        if (!std::all_of(dark.begin(), dark.end(), [&](ModeIndex m) { return occ[m] == 0; })) continue;
        int a = -1;
        int b = -1;
        unsigned na = 0;
        unsigned nb = 0;
        for (std::size_t m = 0; m < d; ++m) {
            na += occ[layout.alice_idler[m]];
            nb += occ[layout.bob_idler[m]];
            if (occ[layout.alice_idler[m]] == 1) a = static_cast<int>(m);
            if (occ[layout.bob_idler[m]] == 1) b = static_cast<int>(m);
        }
        if (na != 1 || nb != 1) continue;
        Occupation env = occ;
        for (std::size_t m = 0; m < d; ++m) {
            env.set(layout.alice_idler[m], 0);
            env.set(layout.bob_idler[m], 0);
        }
        // Key the environment by its packed words through a stable ordering.
        std::array<std::uint64_t, 2> key{};
        for (std::size_t m = 0; m < state.n_modes; ++m) key[m / 16] |= std::uint64_t{env[m]} << (4 * (m % 16));
        auto [it, inserted] = branches.try_emplace(key, ComplexVector::Zero(static_cast<Eigen::Index>(d * d)));
        it->second(a * static_cast<int>(d) + b) += amp;
    }

    const auto dim = static_cast<Eigen::Index>(d * d);
    ConditionalState out{ComplexMatrix::Zero(dim, dim), 0.0};
    for (const auto& [key, v] : branches) out.rho += v * v.adjoint();
    out.weight = out.rho.trace().real();
    if (!(out.weight > 0.0)) throw NumericalError("conditional_two_qudit_state: zero projection weight");
    out.rho /= out.weight;
    return out;
}

EntangledOverlap best_entangled_overlap(const ComplexMatrix& rho, std::size_t d) {
    const auto dim = static_cast<Eigen::Index>(d * d);
    if (rho.rows() != dim || rho.cols() != dim) throw std::invalid_argument("entangled_fidelity: shape mismatch");
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-9) throw std::invalid_argument("entangled_fidelity: rho is not normalized");

    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    EntangledOverlap best;
    best.fidelity = -1.0;
    const auto n = static_cast<Eigen::Index>(d);
    do {
        ComplexMatrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) = rho(i * n + static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]),
                              j * n + static_cast<Eigen::Index>(perm[static_cast<std::size_t>(j)]));
        // Maximize z^dag m z / d over unimodular z by coordinate ascent,
        // starting from the phases of the first column.
        ComplexVector z(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Complex c = m(i, 0);
            z(i) = std::abs(c) > 0.0 ? c / std::abs(c) : Complex(1.0, 0.0);
        }
        for (int sweep = 0; sweep < 100; ++sweep) {
            double change = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                Complex field = 0.0;
                for (Eigen::Index j = 0; j < n; ++j)
                    if (j != i) field += m(i, j) * z(j);
                if (std::abs(field) == 0.0) continue;
                const Complex next = field / std::abs(field);
                change = std::max(change, std::abs(next - z(i)));
                z(i) = next;
            }
            if (change < 1e-14) break;
        }
        const double value = (z.adjoint() * m * z)(0, 0).real() / static_cast<double>(d);
        if (value > best.fidelity + 1e-15) {
            best.fidelity = value;
            best.permutation = perm;
            best.phases.resize(d);
            for (Eigen::Index i = 0; i < n; ++i) best.phases[static_cast<std::size_t>(i)] = std::arg(z(i));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    best.fidelity = std::clamp(best.fidelity, 0.0, 1.0);
    return best;
}

double entangled_fidelity(const ComplexMatrix& rho, std::size_t d) { return best_entangled_overlap(rho, d).fidelity; }

}  // namespace qnet
