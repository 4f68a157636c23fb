// Copyright 2026 The pcorr Authors
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

#include "pcorr/protocol.h"

#include <cmath>

#include "gtest/gtest.h"

#include "pcorr/nmr.h"
#include "test_util.h"

using namespace pcorr;

namespace {

QuantumChannel unitary(const Matrix &u) {
    return QuantumChannel::from_unitary(UnitaryMatrix(u));
}

QuantumChannel cnot2() {
    return QuantumChannel::from_unitary(gate_cnot(1, 2, 2));
}

std::map<int, double> pure_purities(int n) {
    std::map<int, double> p;
    for (int q = 1; q <= n; q++) {
        p[q] = 1.0;
    }
    return p;
}

std::map<QubitSet, double> exact_gammas(const QuantumChannel &ch, const QubitSet &m) {
    std::map<QubitSet, double> out;
    for (const auto &g : gamma_exact_subsets(ch, m, default_pool())) {
        out[g.subset] = g.value;
    }
    return out;
}

}  // namespace

TEST(nonempty_subsets, size_then_lexicographic) {
    auto s = nonempty_subsets({1, 3, 4});
    std::vector<QubitSet> expected{{1}, {3}, {4}, {1, 3}, {1, 4}, {3, 4}, {1, 3, 4}};
    EXPECT_EQ(s, expected);
}

TEST(gamma_exact, cnot_values) {
    auto ch = cnot2();
    EXPECT_NEAR(gamma_exact(ch, {1}, default_pool()).value, 1.0 / 3.0, kExactTol);
    EXPECT_NEAR(gamma_exact(ch, {2}, default_pool()).value, 1.0 / 3.0, kExactTol);
    EXPECT_NEAR(gamma_exact(ch, {1, 2}, default_pool()).value, 5.0 / 9.0, kExactTol);
}

TEST(gamma_exact, c12_value) {
    auto ch = QuantumChannel::from_unitary(gate_c12(0.4, 2, 1, 2));
    const double expected = (8.0 / 9.0) * std::pow(std::sin(0.4), 2);
    EXPECT_NEAR(gamma_exact(ch, {1, 2}, default_pool()).value, expected, kExactTol);
    EXPECT_NEAR(expected, 0.1348, 5e-5);
}

TEST(gamma_exact, joint_twirl_matches_dedicated_twirls) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 4; trial++) {
        auto ch = testutil::random_kraus_channel(3, 2, rng);
        for (const auto &g : gamma_exact_subsets(ch, {1, 2, 3}, default_pool())) {
            EXPECT_NEAR(g.value, gamma_exact(ch, g.subset, default_pool()).value, kExactTol);
        }
    }
}

TEST(gamma_predicted, examples) {
    auto chi = chi_diagonal(cnot2());
    EXPECT_NEAR(gamma_predicted(chi, pure_purities(2), {1, 2}), 5.0 / 9.0, kExactTol);
    EXPECT_NEAR(gamma_predicted(chi, pure_purities(2), {1}), 1.0 / 3.0, kExactTol);
    // A maximally mixed measured qubit carries no signal.
    EXPECT_NEAR(gamma_predicted(chi, {{1, 0.5}}, {1}), 0.0, kExactTol);
    EXPECT_THROW(gamma_predicted(chi, {{1, 0.4}}, {1}), std::invalid_argument);
    EXPECT_THROW(gamma_predicted(chi, {{2, 1.0}}, {1}), std::invalid_argument);
}

TEST(gamma_predicted, matches_full_twirl_of_mixed_diagonal_states) {
    std::mt19937_64 rng(72);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 6; trial++) {
        auto ch = trial % 2 ? testutil::random_kraus_channel(2, 3, rng) : testutil::random_unitary_ensemble(2, 3, rng);
        // Product of single-qubit diagonal states diag(a, 1-a) with a >= 1/2.
        double a1 = 0.5 + 0.5 * u(rng), a2 = 0.5 + 0.5 * u(rng);
        std::vector<double> diag{a1 * a2, a1 * (1 - a2), (1 - a1) * a2, (1 - a1) * (1 - a2)};
        auto rho0 = DensityMatrix::diagonal(diag);
        auto rho1 = twirl_exact(ch, {1, 2}, rho0, build_pool(PoolKind::Full24));
        std::map<int, double> purities{{1, a1 * a1 + (1 - a1) * (1 - a1)}, {2, a2 * a2 + (1 - a2) * (1 - a2)}};
        // For mixed inputs the decay is the purity product minus the overlap
        // Tr[rho0 rho1] of the twirled output with the input.
        double overlap = (rho0.data() * rho1.data()).trace().real();
        double gamma = purities[1] * purities[2] - overlap;
        EXPECT_NEAR(gamma, gamma_predicted(chi_diagonal(ch), purities, {1, 2}), 1e-10);
    }
}

TEST(combine_pair, examples) {
    EXPECT_NEAR(combine_pair(1.0 / 3.0, 1.0 / 3.0, 5.0 / 9.0), 0.25, kExactTol);
    for (double beta : {0.1, 0.4}) {
        auto g = exact_gammas(QuantumChannel::from_unitary(gate_c12(beta, 2, 1, 2)), {1, 2});
        EXPECT_NEAR(combine_pair(g[{1}], g[{2}], g[{1, 2}]), std::pow(std::sin(beta), 2), kExactTol);
    }
    EXPECT_NEAR(std::pow(std::sin(0.4), 2), 0.1516, 5e-5);
}

TEST(combine_pair, inverts_the_decay_model_without_weight_three_terms) {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 10; trial++) {
        auto ch = testutil::random_kraus_channel(2, 2, rng);
        auto col = collective_coefficients(chi_diagonal(ch));
        auto g = exact_gammas(ch, {1, 2});
        EXPECT_NEAR(combine_pair(g[{1}], g[{2}], g[{1, 2}]), col.at({1, 2}), 1e-10);
    }
}

TEST(combine_subset, three_body_rotation) {
    auto ch = unitary(testutil::pauli_rotation(PauliString::parse("ZZZ"), 0.3));
    auto g = exact_gammas(ch, {1, 2, 3});
    EXPECT_NEAR(combine_subset(g), std::pow(std::sin(0.3), 2), 1e-10);
    EXPECT_NEAR(combine_subset(g), 0.0873, 5e-5);
}

TEST(combine_subset, vanishes_without_three_body_terms) {
    std::vector<QuantumChannel> channels{
        unitary(testutil::pauli_rotation(PauliString::parse("XII"), 0.7)),
        unitary(testutil::pauli_rotation(PauliString::parse("ZYI"), 0.4)),
        unitary(testutil::pauli_rotation(PauliString::parse("IXZ"), 0.2)),
    };
    for (const auto &ch : channels) {
        EXPECT_NEAR(combine_subset(exact_gammas(ch, {1, 2, 3})), 0.0, 1e-10);
    }
}

TEST(combine_subset, reduces_to_pair_combination) {
    std::mt19937_64 rng(74);
    auto g = exact_gammas(testutil::random_kraus_channel(2, 3, rng), {1, 2});
    EXPECT_NEAR(combine_subset(g), combine_pair(g[{1}], g[{2}], g[{1, 2}]), kExactTol);
}

TEST(combine_subset, rejects_missing_subsets) {
    std::map<QubitSet, double> g{{{1}, 0.1}, {{1, 2}, 0.2}};
    EXPECT_THROW(combine_subset(g), std::invalid_argument);
}

TEST(combine_subset, includes_higher_weight_tail) {
    std::mt19937_64 rng(75);
    for (int trial = 0; trial < 5; trial++) {
        // A random 3-qubit channel has weight-3 content that leaks into pairs.
        auto ch = testutil::random_unitary_ensemble(3, 2, rng);
        auto col = collective_coefficients(chi_diagonal(ch));
        for (const QubitSet &m : {QubitSet{1, 2}, QubitSet{1, 3}, QubitSet{2, 3}}) {
            double combined = combine_subset(exact_gammas(ch, m));
            EXPECT_NEAR(combined - col.at(m), col.superset_tail(m), 1e-10);
        }
    }
}

TEST(combine_subset_error, propagates_in_quadrature) {
    std::map<QubitSet, double> s{{{1}, 0.02}, {{2}, 0.02}, {{1, 2}, 0.02}};
    EXPECT_NEAR(combine_subset_error(s), eta_error_pair(0.02, 0.02, 0.02), kExactTol);
}

TEST(run_sampled_campaign, identity_never_decays) {
    auto g = run_sampled_campaign(QuantumChannel::identity(2), {1, 2}, 1000, default_pool(), 5);
    for (const auto &e : g) {
        EXPECT_EQ(e.value, 0.0);
        EXPECT_EQ(e.realizations, 1000);
    }
}

TEST(run_sampled_protocol, cnot_within_three_sigma_bound) {
    auto plan = SamplePlan::with_count(40000);
    auto g = run_sampled_protocol(cnot2(), {1, 2}, plan, default_pool(), 1234);
    EXPECT_EQ(g.subset, (QubitSet{1, 2}));
    EXPECT_LE(std::abs(g.value - 5.0 / 9.0), 3 / std::sqrt(40000.0));
    EXPECT_NEAR(g.std_error, std::sqrt(g.value * (1 - g.value) / 40000), 1e-12);
}

TEST(run_sampled_protocol, c12_small_angle) {
    auto ch = QuantumChannel::from_unitary(gate_c12(0.1, 2, 1, 2));
    auto g = run_sampled_protocol(ch, {1, 2}, SamplePlan::with_count(40000), default_pool(), 99);
    EXPECT_NEAR(g.value, (8.0 / 9.0) * std::pow(std::sin(0.1), 2), 0.0025);
}

TEST(run_sampled_campaign, deterministic_across_thread_counts) {
    auto ch = cnot2();
    auto one = run_sampled_campaign(ch, {1, 2}, 20000, default_pool(), 42, {.threads = 1});
    auto four = run_sampled_campaign(ch, {1, 2}, 20000, default_pool(), 42, {.threads = 4});
    ASSERT_EQ(one.size(), four.size());
    for (size_t k = 0; k < one.size(); k++) {
        EXPECT_EQ(one[k].value, four[k].value);
        EXPECT_EQ(one[k].std_error, four[k].std_error);
    }
    auto other = run_sampled_campaign(ch, {1, 2}, 20000, default_pool(), 43);
    EXPECT_NE(one.back().value, other.back().value);
}

TEST(run_sampled_campaign, alternative_modes_converge) {
    auto ch = cnot2();
    SampledOptions cyclic{.assignment = AssignmentMode::Cyclic};
    SampledOptions per_shot{.estimator = SampledEstimator::PerShotEnsemble};
    for (const auto &opt : {cyclic, per_shot}) {
        auto g = run_sampled_campaign(ch, {1, 2}, 40000, default_pool(), 7, opt);
        EXPECT_LE(std::abs(g.back().value - 5.0 / 9.0), 3 / std::sqrt(40000.0));
        EXPECT_LE(std::abs(g[0].value - 1.0 / 3.0), 3 / std::sqrt(40000.0));
    }
    std::mt19937_64 rng(76);
    SampledOptions bad{.estimator = SampledEstimator::PerShotEnsemble};
    EXPECT_THROW(run_sampled_campaign(testutil::random_kraus_channel(2, 2, rng), {1}, 10, default_pool(), 1, bad),
                 std::invalid_argument);
}

TEST(run_sampled_campaign, rejects_nonpositive_counts) {
    EXPECT_THROW(run_sampled_campaign(cnot2(), {1, 2}, 0, default_pool(), 1), std::invalid_argument);
    EXPECT_THROW(SamplePlan::with_count(-3), std::invalid_argument);
}

TEST(sample_size, examples) {
    auto p = sample_size(0.01, 0.05);
    EXPECT_EQ(p.n, 18445);
    EXPECT_EQ(p.n_clt, 10000);
    EXPECT_EQ(p.dominant, DominantBound::Chernoff);

    auto q = sample_size(0.3, 0.5);
    EXPECT_EQ(q.n_clt, 12);
    EXPECT_EQ(q.n_chernoff, 8);
    EXPECT_EQ(q.n, 12);
    EXPECT_EQ(q.dominant, DominantBound::Clt);

    auto t = sample_size(0.2, 2 * std::exp(-2.0));
    EXPECT_EQ(t.dominant, DominantBound::Tie);
    EXPECT_EQ(t.n, 25);

    EXPECT_THROW(sample_size(0, 0.05), std::invalid_argument);
    EXPECT_THROW(sample_size(0.01, 1.0), std::invalid_argument);
}

TEST(gamma_error_bound, examples) {
    EXPECT_NEAR(gamma_error_bound({0.01, 0.0}, 0.5), 0.01732, 5e-6);
    EXPECT_NEAR(gamma_error_bound({0.0, 0.02}, 0.9), 0.02, kExactTol);
    EXPECT_THROW(gamma_error_bound({-0.01, 0.0}, 0.5), std::invalid_argument);
}

TEST(eta_error_pair, examples) {
    EXPECT_NEAR(eta_error_pair(0.02, 0.02, 0.02), 0.0779, 5e-5);
    const double s = gamma_error_bound({0.01, 0.0}, 0.5);
    EXPECT_NEAR(eta_error_pair(s, s, s), 0.0675, 1e-4);
}

TEST(experiment_count, examples) {
    EXPECT_EQ(experiment_count(4, 2, 1).protocol, 6u);
    EXPECT_EQ(experiment_count(4, 4, 1).protocol, 1u);
    auto c = experiment_count(4, 2, 18445);
    EXPECT_EQ(c.protocol, 110670u);
    EXPECT_EQ(c.qpt, 18445u * 65536u);
    EXPECT_THROW(experiment_count(16, 2, 1), std::overflow_error);
    EXPECT_THROW(experiment_count(4, 5, 1), std::invalid_argument);
    EXPECT_THROW(experiment_count(10, 2, UINT64_MAX / 2), std::overflow_error);
}
