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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace pcorr {

namespace {

constexpr int64_t kChunkSize = 4096;

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-chunk engine; chunk boundaries are fixed, so the draw sequence of every
/// realization is independent of how chunks are spread over threads.
std::mt19937_64 chunk_engine(uint64_t seed, uint64_t chunk) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(chunk + 1)));
}

// The standard distributions are implementation-defined; these are not.
uint64_t uniform_below(std::mt19937_64 &rng, uint64_t bound) {
    const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % bound;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

double uniform_unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double ceil_tolerant(double x) {
    return std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)));
}

void check_purity(double p) {
    if (!(p >= 0.5 - kValidityTol && p <= 1 + kValidityTol)) {
        throw std::invalid_argument("purity " + std::to_string(p) + " outside [1/2, 1]");
    }
}

}  // namespace

SamplePlan SamplePlan::with_count(int64_t n) {
    if (n <= 0) {
        throw std::invalid_argument("realization count must be positive");
    }
    SamplePlan plan;
    plan.n = n;
    return plan;
}

std::vector<QubitSet> nonempty_subsets(const QubitSet &m) {
    std::vector<QubitSet> out;
    const uint64_t count = uint64_t{1} << m.size();
    for (uint64_t bits = 1; bits < count; bits++) {
        QubitSet s;
        for (size_t j = 0; j < m.size(); j++) {
            if (bits & (uint64_t{1} << j)) {
                s.push_back(m[j]);
            }
        }
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const QubitSet &a, const QubitSet &b) {
        if (a.size() != b.size()) {
            return a.size() < b.size();
        }
        return a < b;
    });
    return out;
}

DensityMatrix protocol_initial_state(int n, const QubitSet &measured) {
    QubitSet m = checked_subset(n, measured);
    const uint64_t dim = uint64_t{1} << n;
    uint64_t mask = 0;
    for (int q : m) {
        mask |= uint64_t{1} << qubit_bit(n, q);
    }
    const double p = 1.0 / static_cast<double>(uint64_t{1} << (n - m.size()));
    std::vector<double> probs(dim, 0.0);
    for (uint64_t i = 0; i < dim; i++) {
        if ((i & mask) == 0) {
            probs[i] = p;
        }
    }
    return DensityMatrix::diagonal(probs);
}

GammaEstimate gamma_exact(const QuantumChannel &ch, const QubitSet &measured, const CliffordPool &pool) {
    QubitSet m = checked_subset(ch.n(), measured);
    auto rho1 = twirl_exact(ch, m, protocol_initial_state(ch.n(), m), pool);
    return {m, 1 - projection_probability(rho1, m), 0, 0};
}

std::vector<GammaEstimate> gamma_exact_subsets(
    const QuantumChannel &ch, const QubitSet &measured, const CliffordPool &pool) {
    QubitSet m = checked_subset(ch.n(), measured);
    auto rho1 = twirl_exact(ch, m, protocol_initial_state(ch.n(), m), pool);
    std::vector<GammaEstimate> out;
    for (auto &s : nonempty_subsets(m)) {
        double p = projection_probability(rho1, s);
        out.push_back({std::move(s), 1 - p, 0, 0});
    }
    return out;
}

double gamma_predicted(const ChiDiagonal &chi, const std::map<int, double> &purities, const QubitSet &measured) {
    const int n = chi.n();
    QubitSet m = checked_subset(n, measured);
    std::vector<double> p(m.size()), c(m.size());
    double prod_p = 1;
    for (size_t j = 0; j < m.size(); j++) {
        auto it = purities.find(m[j]);
        if (it == purities.end()) {
            throw std::invalid_argument("no purity given for measured qubit " + std::to_string(m[j]));
        }
        check_purity(it->second);
        p[j] = it->second;
        c[j] = (2.0 / 3.0) * (1 - p[j] / 2);
        prod_p *= p[j];
    }
    double gamma = 0;
    for (uint64_t s = 0; s < chi.values().size(); s++) {
        double v = chi.values()[s];
        if (v == 0) {
            continue;
        }
        double prod_c = 1;
        for (size_t j = 0; j < m.size(); j++) {
            bool active = (s >> (2 * (n - m[j]))) & 3;
            prod_c *= active ? c[j] : p[j];
        }
        gamma += v * (prod_p - prod_c);
    }
    return gamma;
}

double combine_pair(double a, double b, double ab) {
    return 2.25 * (a + b - ab);
}

double combine_pair(const GammaEstimate &a, const GammaEstimate &b, const GammaEstimate &ab) {
    return combine_pair(a.value, b.value, ab.value);
}

namespace {

QubitSet union_of_keys(const std::map<QubitSet, double> &values) {
    QubitSet m;
    for (const auto &[s, v] : values) {
        m.insert(m.end(), s.begin(), s.end());
    }
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    return m;
}

}  // namespace

double combine_subset(const std::map<QubitSet, double> &gammas) {
    QubitSet m = union_of_keys(gammas);
    if (m.empty()) {
        throw std::invalid_argument("no gamma values to combine");
    }
    double sum = 0;
    for (const auto &s : nonempty_subsets(m)) {
        auto it = gammas.find(s);
        if (it == gammas.end()) {
            throw std::invalid_argument("missing gamma for subset {" + format_subset(s) + "}");
        }
        sum += (s.size() % 2 == 1 ? 1.0 : -1.0) * it->second;
    }
    return std::pow(1.5, static_cast<double>(m.size())) * sum;
}

double combine_subset_error(const std::map<QubitSet, double> &sigmas) {
    QubitSet m = union_of_keys(sigmas);
    double sq = 0;
    for (const auto &[s, sigma] : sigmas) {
        sq += sigma * sigma;
    }
    return std::pow(1.5, static_cast<double>(m.size())) * std::sqrt(sq);
}

namespace {

struct Campaign {
    const QuantumChannel &ch;
    QubitSet measured;
    QubitSet complement;
    const CliffordPool &pool;
    uint64_t seed;
    SampledOptions options;
    uint64_t assignments = 0;
    std::vector<double> ensemble_cdf;
    // Outcome masks (over measured-bit positions) for each sub-subset.
    std::vector<uint64_t> subset_masks;

    /// Distribution over the 2^m measured outcomes; outcome bit (m-1-j) is
    /// measured[j].
    std::vector<double> outcome_distribution(uint64_t assignment, uint64_t flips, int64_t term) const {
        const int n = ch.n();
        uint64_t index = 0;
        for (size_t j = 0; j < complement.size(); j++) {
            if (flips & (uint64_t{1} << j)) {
                index |= uint64_t{1} << qubit_bit(n, complement[j]);
            }
        }
        Matrix rho = DensityMatrix::basis_state(n, index).data();
        auto twirl = TwirlAssignment::from_index(pool, measured, assignment);
        twirl.conjugate(rho, n);
        if (term < 0) {
            rho = apply_channel_raw(ch, rho);
        } else {
            const Matrix &u = ch.terms()[term].op;
            rho = u * rho * u.adjoint();
        }
        twirl.inverse().conjugate(rho, n);

        const size_t m = measured.size();
        std::vector<double> dist(uint64_t{1} << m, 0.0);
        for (Eigen::Index i = 0; i < rho.rows(); i++) {
            uint64_t outcome = 0;
            for (size_t j = 0; j < m; j++) {
                if (static_cast<uint64_t>(i) & (uint64_t{1} << qubit_bit(n, measured[j]))) {
                    outcome |= uint64_t{1} << (m - 1 - j);
                }
            }
            dist[outcome] += std::max(0.0, rho(i, i).real());
        }
        return dist;
    }

    /// Tallies of the all-zeros event per sub-subset over realizations
    /// [begin, end).
    std::vector<int64_t> run_chunk(uint64_t chunk, int64_t begin, int64_t end) const {
        auto rng = chunk_engine(seed, chunk);
        std::vector<int64_t> counts(subset_masks.size(), 0);
        std::unordered_map<uint64_t, std::vector<double>> cache;
        const uint64_t flip_states = uint64_t{1} << complement.size();
        const uint64_t terms = ch.terms().size();
        for (int64_t r = begin; r < end; r++) {
            uint64_t flips = 0;
            for (size_t j = 0; j < complement.size(); j++) {
                flips |= (rng() >> 63) << j;
            }
            uint64_t assignment = options.assignment == AssignmentMode::Cyclic
                                      ? static_cast<uint64_t>(r) % assignments
                                      : uniform_below(rng, assignments);
            int64_t term = -1;
            if (options.estimator == SampledEstimator::PerShotEnsemble) {
                double u = uniform_unit(rng);
                term = std::upper_bound(ensemble_cdf.begin(), ensemble_cdf.end(), u) - ensemble_cdf.begin();
                term = std::min<int64_t>(term, static_cast<int64_t>(terms) - 1);
            }
            uint64_t key = (assignment * flip_states + flips) * (terms + 1) + static_cast<uint64_t>(term + 1);
            auto it = cache.find(key);
            if (it == cache.end()) {
                if (cache.size() > (1u << 16)) {
                    cache.clear();
                }
                it = cache.emplace(key, outcome_distribution(assignment, flips, term)).first;
            }
            const auto &dist = it->second;
            double u = uniform_unit(rng);
            uint64_t outcome = dist.size() - 1;
            double cumulative = 0;
            for (uint64_t o = 0; o < dist.size(); o++) {
                cumulative += dist[o];
                if (u < cumulative) {
                    outcome = o;
                    break;
                }
            }
            for (size_t s = 0; s < subset_masks.size(); s++) {
                counts[s] += (outcome & subset_masks[s]) == 0;
            }
        }
        return counts;
    }
};

}  // namespace

std::vector<GammaEstimate> run_sampled_campaign(
    const QuantumChannel &ch,
    const QubitSet &measured,
    int64_t realizations,
    const CliffordPool &pool,
    uint64_t seed,
    const SampledOptions &options) {
    if (realizations <= 0) {
        throw std::invalid_argument("realization count must be positive");
    }
    if (options.threads < 1) {
        throw std::invalid_argument("thread count must be positive");
    }
    Campaign c{ch, checked_subset(ch.n(), measured), {}, pool, seed, options};
    for (int q = 1; q <= ch.n(); q++) {
        if (!std::binary_search(c.measured.begin(), c.measured.end(), q)) {
            c.complement.push_back(q);
        }
    }
    c.assignments = 1;
    for (size_t j = 0; j < c.measured.size(); j++) {
        c.assignments *= pool.size();
    }
    if (options.estimator == SampledEstimator::PerShotEnsemble) {
        if (ch.kind() != ChannelKind::UnitaryEnsemble) {
            throw std::invalid_argument("per-shot-ensemble sampling requires a unitary-ensemble channel");
        }
        double acc = 0;
        for (const auto &t : ch.terms()) {
            acc += t.weight;
            c.ensemble_cdf.push_back(acc);
        }
    }
    auto subsets = nonempty_subsets(c.measured);
    const size_t m = c.measured.size();
    for (const auto &s : subsets) {
        uint64_t mask = 0;
        for (int q : s) {
            size_t j = std::lower_bound(c.measured.begin(), c.measured.end(), q) - c.measured.begin();
            mask |= uint64_t{1} << (m - 1 - j);
        }
        c.subset_masks.push_back(mask);
    }

    const uint64_t chunks = static_cast<uint64_t>((realizations + kChunkSize - 1) / kChunkSize);
    std::vector<std::vector<int64_t>> partial(chunks);
    std::atomic<uint64_t> next{0};
    auto worker = [&]() {
        for (uint64_t k = next++; k < chunks; k = next++) {
            int64_t begin = static_cast<int64_t>(k) * kChunkSize;
            int64_t end = std::min(realizations, begin + kChunkSize);
            partial[k] = c.run_chunk(k, begin, end);
        }
    };
    const int threads = static_cast<int>(std::min<uint64_t>(options.threads, chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool_threads;
        for (int t = 0; t < threads; t++) {
            pool_threads.emplace_back(worker);
        }
        for (auto &t : pool_threads) {
            t.join();
        }
    }

    std::vector<int64_t> totals(subsets.size(), 0);
    for (const auto &p : partial) {
        for (size_t s = 0; s < totals.size(); s++) {
            totals[s] += p[s];
        }
    }
    std::vector<GammaEstimate> out;
    const double n = static_cast<double>(realizations);
    for (size_t s = 0; s < subsets.size(); s++) {
        double p_hat = static_cast<double>(totals[s]) / n;
        out.push_back({subsets[s], 1 - p_hat, std::sqrt(p_hat * (1 - p_hat) / n), realizations});
    }
    return out;
}

GammaEstimate run_sampled_protocol(
    const QuantumChannel &ch,
    const QubitSet &measured,
    const SamplePlan &plan,
    const CliffordPool &pool,
    uint64_t seed,
    const SampledOptions &options) {
    auto all = run_sampled_campaign(ch, measured, plan.n, pool, seed, options);
    return all.back();
}

SamplePlan sample_size(double delta, double epsilon) {
    if (!(delta > 0 && delta < 1)) {
        throw std::invalid_argument("precision delta must lie in (0,1)");
    }
    if (!(epsilon > 0 && epsilon < 1)) {
        throw std::invalid_argument("failure probability must lie in (0,1)");
    }
    const double clt = 1 / (delta * delta);
    const double chernoff = std::log(2 / epsilon) / (2 * delta * delta);
    SamplePlan plan;
    plan.delta = delta;
    plan.epsilon = epsilon;
    plan.n_clt = static_cast<int64_t>(ceil_tolerant(clt));
    plan.n_chernoff = static_cast<int64_t>(ceil_tolerant(chernoff));
    plan.n = std::max(plan.n_clt, plan.n_chernoff);
    if (std::abs(clt - chernoff) <= 1e-9 * clt) {
        plan.dominant = DominantBound::Tie;
    } else {
        plan.dominant = chernoff > clt ? DominantBound::Chernoff : DominantBound::Clt;
    }
    return plan;
}

double gamma_error_bound(const ErrorBudget &budget, double gamma) {
    if (!(budget.eps0 >= 0 && budget.eps1 >= 0 && std::isfinite(budget.eps0) && std::isfinite(budget.eps1))) {
        throw std::invalid_argument("error budget entries must be finite and nonnegative");
    }
    if (!(gamma >= -kValidityTol && gamma <= 1 + kValidityTol)) {
        throw std::invalid_argument("gamma outside [0,1]");
    }
    return std::sqrt(budget.eps0 * budget.eps0 * (1 + 4 * gamma) + budget.eps1 * budget.eps1);
}

double eta_error_pair(double sigma_a, double sigma_b, double sigma_ab) {
    if (sigma_a < 0 || sigma_b < 0 || sigma_ab < 0) {
        throw std::invalid_argument("standard errors must be nonnegative");
    }
    return 2.25 * std::sqrt(sigma_a * sigma_a + sigma_b * sigma_b + sigma_ab * sigma_ab);
}

ExperimentCount experiment_count(int n, int w, uint64_t realizations) {
    if (w < 1 || w > n) {
        throw std::invalid_argument("weight cutoff must satisfy 1 <= w <= n");
    }
    // C(n, w) by the multiplicative formula; every prefix is itself a binomial.
    uint64_t binom = 1;
    for (int k = 1; k <= w; k++) {
        unsigned __int128 next = static_cast<unsigned __int128>(binom) * static_cast<unsigned>(n - w + k) / k;
        if (next > std::numeric_limits<uint64_t>::max()) {
            throw std::overflow_error("C(n,w) exceeds 64 bits");
        }
        binom = static_cast<uint64_t>(next);
    }
    ExperimentCount out;
    if (__builtin_mul_overflow(realizations, binom, &out.protocol)) {
        throw std::overflow_error("N*C(n,w) exceeds 64 bits");
    }
    if (4 * n >= 64) {
        throw std::overflow_error("2^(4n) exceeds 64 bits");
    }
    if (__builtin_mul_overflow(realizations, uint64_t{1} << (4 * n), &out.qpt)) {
        throw std::overflow_error("N*2^(4n) exceeds 64 bits");
    }
    return out;
}

}  // namespace pcorr
