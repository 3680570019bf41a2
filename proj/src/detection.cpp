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

#include "qnet/detection.hpp"

#include <cmath>
#include <numeric>

#include <fmt/core.h>

namespace qnet {
namespace {

// Inclusion-exclusion sums cancel down to the size of the event probability,
// which for weak sources sits many decades below the individual terms, so the
// subset sums run in extended precision.
using Real = long double;
using LMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

std::vector<Eigen::Index> quadratures(std::span<const ModeIndex> modes) {
    std::vector<Eigen::Index> q;
    q.reserve(2 * modes.size());
    for (ModeIndex m : modes) {
        q.push_back(static_cast<Eigen::Index>(2 * m));
        q.push_back(static_cast<Eigen::Index>(2 * m + 1));
    }
    return q;
}

void check_disjoint(const GaussianState& state, std::span<const ModeIndex> a, std::span<const ModeIndex> b) {
    std::vector<int> seen(state.n_modes(), 0);
    for (auto list : {a, b})
        for (ModeIndex m : list) {
            if (m >= state.n_modes())
                throw std::out_of_range(fmt::format("click probability: mode {} out of range", m));
            if (seen[m]++) throw std::invalid_argument(fmt::format("click probability: mode {} listed twice", m));
        }
}

// The click modes' quadratures after conditioning on vacuum in the silent
// modes: A = I + K on the click quadratures with shifted mean `delta`, and
// the log of the silent-set vacuum probability.
struct Conditioned {
    Real log_silent = 0.0L;
    LMatrix k;
    LVector delta;
};

Conditioned condition_on_silent(const GaussianState& state, std::span<const ModeIndex> clicked,
                                std::span<const ModeIndex> silent) {
    const auto qc = quadratures(clicked);
    const auto qn = quadratures(silent);
    const RealMatrix& e = state.covariance_excess();
    const RealVector& mu = state.displacement();
    Conditioned out;
    out.k = (e(qc, qc).cast<Real>() * 0.5L).eval();
    out.delta = mu(qc).cast<Real>();
    if (qn.empty()) return out;

    const auto nn = static_cast<Eigen::Index>(qn.size());
    const LMatrix a = LMatrix::Identity(nn, nn) + e(qn, qn).cast<Real>() * 0.5L;
    Eigen::LLT<LMatrix> llt(a);
    if (llt.info() != Eigen::Success) throw NumericalError("click probability: (V+I)/2 is not positive definite");
    const LVector mun = mu(qn).cast<Real>();
    const LVector solved = llt.solve(mun);
    Real log_half_det = 0.0L;
    const LMatrix& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < nn; ++i) log_half_det += std::log(l(i, i));
    out.log_silent = -0.25L * mun.dot(solved) - log_half_det;
    if (!qc.empty()) {
        const LMatrix b = e(qc, qn).cast<Real>() * 0.5L;
        out.k -= b * llt.solve(b.transpose());
        out.delta -= b * solved;
    }
    return out;
}

// Depth-first walk over all subsets Z of the click modes, growing a Cholesky
// factor of I + K_ZZ two rows at a time. The visitor receives the subset
// mask, |Z| and g(Z) = -delta_Z^T (I+K_ZZ)^{-1} delta_Z / 4 - log det(I+K_ZZ) / 2.
template <typename Visitor>
class SubsetWalker {
public:
    SubsetWalker(const LMatrix& k, const LVector& delta, Visitor& visit)
        : k_(k), delta_(delta), visit_(visit), n_(static_cast<std::size_t>(k.rows() / 2)) {
        const auto dim = k.rows();
        l_.setZero(dim, dim);
        y_.setZero(dim);
        rows_.assign(static_cast<std::size_t>(dim), 0);
    }

    void run() { walk(0, 0, 0, 0.0L, 0.0L, 0); }

private:
    void walk(std::size_t start, Eigen::Index rows, std::uint64_t mask, Real quad, Real logdet, std::size_t size) {
        visit_(mask, size, -0.25L * quad - 0.5L * logdet);
        for (std::size_t c = start; c < n_; ++c) {
            Real q = quad;
            Real ld = logdet;
            for (Eigen::Index add = 0; add < 2; ++add) {
                const Eigen::Index r = rows + add;
                const auto src = static_cast<Eigen::Index>(2 * c) + add;
                rows_[static_cast<std::size_t>(r)] = src;
                Real diag = k_(src, src);
                Real proj = delta_(src);
                for (Eigen::Index j = 0; j < r; ++j) {
                    Real acc = k_(src, rows_[static_cast<std::size_t>(j)]);
                    for (Eigen::Index t = 0; t < j; ++t) acc -= l_(r, t) * l_(j, t);
                    const Real lj = acc / l_(j, j);
                    l_(r, j) = lj;
                    diag -= lj * lj;
                    proj -= lj * y_(j);
                }
                if (!(1.0L + diag > 0.0L)) throw NumericalError("click probability: lost positive definiteness");
                l_(r, r) = std::sqrt(1.0L + diag);
                ld += std::log1p(diag);
                y_(r) = proj / l_(r, r);
                q += y_(r) * y_(r);
            }
            walk(c + 1, rows + 2, mask | (std::uint64_t{1} << c), q, ld, size + 1);
        }
    }

    const LMatrix& k_;
    const LVector& delta_;
    Visitor& visit_;
    std::size_t n_;
    LMatrix l_;
    LVector y_;
    std::vector<Eigen::Index> rows_;
};

double clamp_probability(Real p, const char* what) {
    if (p < -static_cast<Real>(kNegativeProbabilityTolerance))
        throw NumericalError(fmt::format("{}: probability {} below tolerance", what, static_cast<double>(p)));
    if (p < 0.0L) return 0.0;
    return static_cast<double>(std::min(p, 1.0L));
}

}  // namespace

double vacuum_probability(const GaussianState& state, std::span<const ModeIndex> subset) {
    if (subset.empty()) throw std::invalid_argument("vacuum_probability: empty subset");
    check_disjoint(state, subset, {});
    const Conditioned c = condition_on_silent(state, {}, subset);
    return static_cast<double>(std::exp(c.log_silent));
}

double click_probability(const GaussianState& state, std::span<const ModeIndex> clicked,
                         std::span<const ModeIndex> silent) {
    check_disjoint(state, clicked, silent);
    if (clicked.size() > 62) throw std::invalid_argument("click_probability: too many clicked modes");
    const Conditioned c = condition_on_silent(state, clicked, silent);
    if (clicked.empty()) return clamp_probability(std::exp(c.log_silent), "click_probability");
    // For a non-empty click set the constant parts of exp(g) cancel, so the
    // sum runs over expm1(g) and keeps the digits of tiny probabilities.
    Real sum = 0.0L;
    auto visit = [&sum](std::uint64_t, std::size_t size, Real g) {
        const Real term = std::expm1(g);
        sum += (size % 2 == 0) ? term : -term;
    };
    SubsetWalker walker(c.k, c.delta, visit);
    walker.run();
    return clamp_probability(std::exp(c.log_silent) * sum, "click_probability");
}

double click_pattern_probability(const GaussianState& state, std::span<const ModeIndex> detectors,
                                 const ClickPattern& pattern) {
    if (pattern.size() != detectors.size())
        throw std::invalid_argument("click_pattern_probability: pattern length does not match detectors");
    ModeList clicked;
    ModeList silent;
    for (std::size_t i = 0; i < detectors.size(); ++i) (pattern[i] ? clicked : silent).push_back(detectors[i]);
    return click_probability(state, clicked, silent);
}

double click_pattern_probability(const GaussianState& state, const ClickPattern& pattern) {
    ModeList all(state.n_modes());
    std::iota(all.begin(), all.end(), ModeIndex{0});
    return click_pattern_probability(state, all, pattern);
}

std::vector<double> all_pattern_distribution(const GaussianState& state, std::span<const ModeIndex> detectors) {
    const std::size_t n = detectors.size();
    if (n > kMaxEnumeratedDetectors)
        throw std::invalid_argument(fmt::format("all_pattern_distribution: {} detectors exceed the limit of {}", n,
                                                kMaxEnumeratedDetectors));
    check_disjoint(state, detectors, {});
    const std::size_t full = (std::size_t{1} << n) - 1;
    // f(T) = vacuum probability of T for every subset, then the superset
    // Moebius transform gives P(exactly the complement clicks).
    std::vector<Real> f(full + 1, 1.0L);
    if (n > 0) {
        const Conditioned c = condition_on_silent(state, detectors, {});
        auto visit = [&f](std::uint64_t mask, std::size_t, Real g) { f[mask] = std::exp(g); };
        SubsetWalker walker(c.k, c.delta, visit);
        walker.run();
    }
    for (std::size_t bit = 0; bit < n; ++bit) {
        const std::size_t b = std::size_t{1} << bit;
        for (std::size_t mask = 0; mask <= full; ++mask)
            if (!(mask & b)) f[mask] -= f[mask | b];
    }
    std::vector<double> dist(full + 1);
    for (std::size_t clicks = 0; clicks <= full; ++clicks)
        dist[clicks] = clamp_probability(f[full ^ clicks], "all_pattern_distribution");
    return dist;
}

JointDistribution joint_outcome_distribution(const CompiledNetwork& net, const HeraldPattern& herald) {
    return joint_outcome_distribution(net, net.output_state(), herald);
}

JointDistribution joint_outcome_distribution(const CompiledNetwork& net, const GaussianState& output,
                                             const HeraldPattern& herald) {
    const NetworkLayout& layout = net.layout;
    const std::size_t d = layout.d;
    if (herald.d != d) throw std::invalid_argument("joint_outcome_distribution: herald dimension mismatch");
    const ModeList herald_clicks = herald.click_modes(layout);
    const ModeList herald_dark = herald.dark_modes(layout);

    const double accept = click_probability(output, herald_clicks, herald_dark);
    if (!(accept >= 1e-300))
        throw NumericalError(fmt::format("joint_outcome_distribution: accept probability {} is degenerate", accept));

    auto with_user = [&](const ModeList& user, std::optional<std::size_t> one, ModeList& clicked, ModeList& silent) {
        for (std::size_t m = 0; m < d; ++m) (one && *one == m ? clicked : silent).push_back(user[m]);
    };
    auto probability = [&](std::optional<std::size_t> a, std::optional<std::size_t> b) {
        ModeList clicked = herald_clicks;
        ModeList silent = herald_dark;
        if (a) with_user(layout.alice_idler, a, clicked, silent);
        if (b) with_user(layout.bob_idler, b, clicked, silent);
        return click_probability(output, clicked, silent);
    };

    JointDistribution out;
    out.dim = d;
    out.accept_probability = accept;
    out.table = RealMatrix::Zero(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(d + 1));
    auto& t = out.table;
    const auto bad = static_cast<Eigen::Index>(d);
    double valid_rows = 0.0;
    double valid_cols = 0.0;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            t(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = probability(a, b);
    const double cells = t.topLeftCorner(bad, bad).sum();
    for (std::size_t a = 0; a < d; ++a) {
        const auto ia = static_cast<Eigen::Index>(a);
        const double row = probability(a, std::nullopt);
        valid_rows += row;
        t(ia, bad) = row - t.row(ia).head(bad).sum();
    }
    for (std::size_t b = 0; b < d; ++b) {
        const auto ib = static_cast<Eigen::Index>(b);
        const double col = probability(std::nullopt, b);
        valid_cols += col;
        t(bad, ib) = col - t.col(ib).head(bad).sum();
    }
    t(bad, bad) = accept - valid_rows - valid_cols + cells;

    t /= accept;
    // Differences of marginals carry rounding of the marginals themselves.
    for (Eigen::Index i = 0; i <= bad; ++i)
        for (Eigen::Index j = 0; j <= bad; ++j) {
            if (t(i, j) < -1e-6)
                throw NumericalError(fmt::format("joint_outcome_distribution: entry ({}, {}) = {}", i, j, t(i, j)));
            t(i, j) = std::max(t(i, j), 0.0);
        }
    t /= t.sum();
    return out;
}

}  // namespace qnet
