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

#include "qnet/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

namespace qnet {
namespace {

double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}

}  // namespace

double conditional_shannon_entropy(const RealMatrix& joint) {
    if (joint.size() == 0) throw std::invalid_argument("conditional_shannon_entropy: empty table");
    if (joint.minCoeff() < 0.0) throw std::invalid_argument("conditional_shannon_entropy: negative entry");
    if (std::abs(joint.sum() - 1.0) > 1e-9)
        throw std::invalid_argument(fmt::format("conditional_shannon_entropy: table sums to {}", joint.sum()));
    std::vector<double> cells(joint.data(), joint.data() + joint.size());
    std::vector<double> bob(static_cast<std::size_t>(joint.cols()));
    for (Eigen::Index b = 0; b < joint.cols(); ++b) bob[static_cast<std::size_t>(b)] = joint.col(b).sum();
    return std::max(0.0, entropy_bits(cells) - entropy_bits(bob));
}

SiftedTable subspace_sift(const JointDistribution& joint, std::size_t d, std::size_t k) {
    if (k == 0 || d % k != 0) throw std::invalid_argument(fmt::format("subspace_sift: k={} does not divide d={}", k, d));
    if (joint.dim != d) throw std::invalid_argument("subspace_sift: table dimension mismatch");
    const auto kk = static_cast<Eigen::Index>(k);
    SiftedTable out{RealMatrix::Zero(kk, kk), 0.0};
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            if (a / k == b / k)
                out.table(static_cast<Eigen::Index>(a % k), static_cast<Eigen::Index>(b % k)) +=
                    joint.table(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    out.probability = out.table.sum();
    if (!(out.probability > 0.0)) throw NumericalError("subspace_sift: no probability mass survives sifting");
    out.table /= out.probability;
    return out;
}

JointDistribution relabel_bob(const JointDistribution& joint, const std::vector<std::size_t>& relabel) {
    if (relabel.size() != joint.dim) throw std::invalid_argument("relabel_bob: permutation size mismatch");
    std::vector<bool> seen(joint.dim, false);
    for (std::size_t target : relabel) {
        if (target >= joint.dim || seen[target]) throw std::invalid_argument("relabel_bob: not a permutation");
        seen[target] = true;
    }
    JointDistribution out = joint;
    for (std::size_t b = 0; b < joint.dim; ++b)
        out.table.col(static_cast<Eigen::Index>(relabel[b])) = joint.table.col(static_cast<Eigen::Index>(b));
    return out;
}

std::vector<std::size_t> outcome_relabeling(const HeraldPattern& herald, std::size_t k, Basis basis) {
    if (basis == Basis::Key) return herald.bob_relabel;
    const std::size_t d = herald.d;
    const ComplexMatrix b = measurement_basis_unitary(d, k, Basis::Test);
    const auto dim = static_cast<Eigen::Index>(d * d);
    ComplexMatrix bb(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            bb(i, j) = b(i / static_cast<Eigen::Index>(d), j / static_cast<Eigen::Index>(d)) *
                       b(i % static_cast<Eigen::Index>(d), j % static_cast<Eigen::Index>(d));
    const ComplexMatrix rho = bb * herald.ideal_state * bb.adjoint();

    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::size_t> best = perm;
    double best_score = -1.0;
    do {
        double score = 0.0;
        for (std::size_t a = 0; a < d; ++a) score += rho(static_cast<Eigen::Index>(a * d + perm[a]),
                                                         static_cast<Eigen::Index>(a * d + perm[a])).real();
        if (score > best_score + 1e-12) {
            best_score = score;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::size_t> relabel(d);
    for (std::size_t a = 0; a < d; ++a) relabel[best[a]] = a;
    return relabel;
}

RateReport secret_key_rate(const std::vector<JointDistribution>& key, const std::vector<JointDistribution>& test,
                           const NetworkConfig& config, const std::vector<HeraldPattern>& heralds) {
    if (key.size() != heralds.size() || test.size() != heralds.size())
        throw std::invalid_argument("secret_key_rate: key, test and herald sets differ in size");
    const auto d = static_cast<std::size_t>(config.d);
    const auto k = static_cast<std::size_t>(config.k);
    const double log_k = std::log2(static_cast<double>(k));

    RateReport report;
    double sifted_weight = 0.0;
    for (std::size_t h = 0; h < heralds.size(); ++h) {
        if (key[h].dim != d || test[h].dim != d) throw std::invalid_argument("secret_key_rate: table dimension mismatch");
        const SiftedTable sk = subspace_sift(relabel_bob(key[h], outcome_relabeling(heralds[h], k, Basis::Key)), d, k);
        const SiftedTable st = subspace_sift(relabel_bob(test[h], outcome_relabeling(heralds[h], k, Basis::Test)), d, k);
        HeraldRate r;
        r.accept_probability = key[h].accept_probability;
        r.sift_probability = sk.probability;
        r.H_key = conditional_shannon_entropy(sk.table);
        r.H_test = conditional_shannon_entropy(st.table);
        r.conditional_rate = std::max(0.0, log_k - r.H_test - r.H_key);
        r.bits_per_round = r.accept_probability * r.sift_probability * r.conditional_rate;

        const double w = r.accept_probability * r.sift_probability;
        report.bits_per_round += r.bits_per_round;
        report.accept_probability += r.accept_probability;
        report.H_key += w * r.H_key;
        report.H_test += w * r.H_test;
        sifted_weight += w;
        report.per_herald.push_back(r);
    }
    if (report.accept_probability > 0.0) report.sift_probability = sifted_weight / report.accept_probability;
    if (sifted_weight > 0.0) {
        report.H_key /= sifted_weight;
        report.H_test /= sifted_weight;
        report.conditional_rate = report.bits_per_round / sifted_weight;
    }
    return report;
}

RateReport evaluate_key_rate(const NetworkConfig& config) {
    config.validate();
    if (config.ancilla == AncillaKind::IdealOracle && config.d > 2)
        throw std::invalid_argument("evaluate_key_rate: ideal single-photon ancillas need the Fock oracle");
    const std::vector<HeraldPattern> heralds = herald_search(config);

    NetworkConfig key_cfg = config;
    key_cfg.basis = Basis::Key;
    NetworkConfig test_cfg = config;
    test_cfg.basis = Basis::Test;
    const CompiledNetwork key_net = build_network(key_cfg);
    const CompiledNetwork test_net = build_network(test_cfg);
    const GaussianState key_out = key_net.output_state();
    const GaussianState test_out = test_net.output_state();

    std::vector<JointDistribution> key;
    std::vector<JointDistribution> test;
    for (const auto& h : heralds) {
        key.push_back(joint_outcome_distribution(key_net, key_out, h));
        test.push_back(joint_outcome_distribution(test_net, test_out, h));
    }
    return secret_key_rate(key, test, config, heralds);
}

}  // namespace qnet
