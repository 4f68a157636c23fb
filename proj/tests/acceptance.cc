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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "pcorr/clifford.h"
#include "pcorr/experiment.h"
#include "pcorr/nmr.h"
#include "pcorr/pauli.h"
#include "pcorr/protocol.h"
#include "test_util.h"

using namespace pcorr;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string detail;
};

void fail(Outcome &o, const std::string &why) {
    if (o.ok) {
        o.detail = why;
    }
    o.ok = false;
}

std::string fmt(const char *f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

QuantumChannel random_channel(int n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> terms(1, 4);
    std::bernoulli_distribution kraus(0.5);
    return kraus(rng) ? testutil::random_kraus_channel(n, terms(rng), rng)
                      : testutil::random_unitary_ensemble(n, terms(rng), rng);
}

std::map<int, double> pure(int n) {
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

Outcome table_reproduction() {
    Outcome o;
    struct Row {
        const char *gate;
        double rounded;
        double closed;
    };
    const Row rows[] = {
        {"c12(0.1)", 0.01, std::pow(std::sin(0.1), 2)},
        {"c12(0.4)", 0.15, std::pow(std::sin(0.4), 2)},
        {"cnot", 0.25, 0.25},
        {"cnot2", 0.00, 0.0},
        {"ie-sequence", 0.00, 0.0},
    };
    for (const auto &row : rows) {
        ExperimentConfig c;
        c.set("gate", row.gate);
        c.set("targets", "1-2;2-3;1-4");
        auto report = run_experiment(c);
        for (const auto &r : report.subsets) {
            bool on_target = r.subset == QubitSet{1, 2};
            double rounded = on_target ? row.rounded : 0.0;
            double closed = on_target ? row.closed : 0.0;
            if (std::abs(r.eta - rounded) > 0.005 || std::abs(r.eta - closed) > 1e-9) {
                fail(o, std::string(row.gate) + " subset " + format_subset(r.subset, '-') + " gave " +
                            format_real(r.eta));
            }
        }
    }
    if (o.ok) {
        o.detail = "5 gates x 3 pairs match rounded table values and closed forms";
    }
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(20260101);
    double worst = 0;
    int spot = 0;
    for (int k = 0; k < 50; k++) {
        int n = 2 + k % 2;
        auto ch = random_channel(n, rng);
        auto chi = chi_diagonal(ch);
        std::vector<QubitSet> subsets;
        for (int a = 1; a <= n; a++) {
            subsets.push_back({a});
            for (int b = a + 1; b <= n; b++) {
                subsets.push_back({a, b});
            }
        }
        if (n == 3 && spot < 5) {
            subsets.push_back({1, 2, 3});
            spot++;
        }
        for (const auto &m : subsets) {
            double diff = std::abs(gamma_exact(ch, m, default_pool()).value - gamma_predicted(chi, pure(n), m));
            worst = std::max(worst, diff);
        }
    }
    if (worst > 1e-9 || spot != 5) {
        fail(o, fmt("worst |gamma_exact - gamma_predicted| = %.3g", worst));
    } else {
        o.detail = fmt("worst difference %.3g over 50 channels", worst);
    }
    return o;
}

Outcome pool_equivalence() {
    Outcome o;
    std::mt19937_64 rng(20260202);
    double worst = 0;
    for (int k = 0; k < 20; k++) {
        int n = 2 + k % 2;
        auto ch = random_channel(n, rng);
        for (const QubitSet &m : {QubitSet{1}, QubitSet{2}, QubitSet{1, 2}, QubitSet{n - 1, n}}) {
            auto rep = pool_equivalence_check(ch, m, protocol_initial_state(n, m));
            if (rep.pool_names.size() != 10) {
                fail(o, "expected 10 pools");
            }
            worst = std::max(worst, rep.max_spread);
        }
    }
    if (worst > 1e-9) {
        fail(o, fmt("worst spread across pools = %.3g", worst));
    } else {
        o.detail = fmt("worst spread %.3g over 20 channels, 10 pools", worst);
    }
    return o;
}

Outcome combination() {
    Outcome o;
    std::mt19937_64 rng(20260303);
    // Channels without weight-3+ content: all two-qubit channels, and
    // three-qubit mixtures of one- and two-body Pauli rotations.
    for (int k = 0; k < 10; k++) {
        auto ch = random_channel(2, rng);
        auto g = exact_gammas(ch, {1, 2});
        double eta = combine_pair(g[{1}], g[{2}], g[{1, 2}]);
        double want = collective_coefficients(chi_diagonal(ch)).at({1, 2});
        if (std::abs(eta - want) > 1e-9) {
            fail(o, fmt("pair combination off by %.3g", eta - want));
        }
    }
    {
        std::vector<double> w{0.4, 0.3, 0.3};
        std::vector<UnitaryMatrix> u{
            UnitaryMatrix(testutil::pauli_rotation(PauliString::parse("XZI"), 0.3)),
            UnitaryMatrix(testutil::pauli_rotation(PauliString::parse("IYY"), 0.5)),
            UnitaryMatrix(testutil::pauli_rotation(PauliString::parse("ZIX"), 0.2)),
        };
        auto ch = QuantumChannel::mixture(w, u);
        auto col = collective_coefficients(chi_diagonal(ch));
        if (col.at({1, 2, 3}) > 1e-15) {
            fail(o, "test channel unexpectedly has three-body content");
        }
        for (const QubitSet &m : {QubitSet{1, 2}, QubitSet{2, 3}, QubitSet{1, 3}}) {
            auto g = exact_gammas(ch, m);
            double eta = combine_pair(g[{m[0]}], g[{m[1]}], g[m]);
            if (std::abs(eta - col.at(m)) > 1e-9) {
                fail(o, "pair combination misses a two-body coefficient on {" + format_subset(m) + "}");
            }
        }
    }
    auto zzz = QuantumChannel::from_unitary(UnitaryMatrix(testutil::pauli_rotation(PauliString::parse("ZZZ"), 0.3)));
    double eta3 = combine_subset(exact_gammas(zzz, {1, 2, 3}));
    if (std::abs(eta3 - std::pow(std::sin(0.3), 2)) > 1e-9) {
        fail(o, fmt("ZZZ combination gave %.12g", eta3));
    }
    for (int k = 0; k < 5; k++) {
        auto ch = random_channel(3, rng);
        auto col = collective_coefficients(chi_diagonal(ch));
        if (col.at({1, 2, 3}) < 1e-6) {
            fail(o, "random channel lacks weight-3 content");
        }
        for (const QubitSet &m : {QubitSet{1, 2}, QubitSet{1, 3}, QubitSet{2, 3}}) {
            double eta = combine_subset(exact_gammas(ch, m));
            if (std::abs(eta - col.at(m) - col.superset_tail(m)) > 1e-9) {
                fail(o, "higher-weight tail not reproduced on {" + format_subset(m) + "}");
            }
        }
    }
    if (o.ok) {
        o.detail = fmt("ZZZ -> %.6f", eta3);
    }
    return o;
}

Outcome sampled_statistics() {
    Outcome o;
    auto ch = QuantumChannel::from_unitary(gate_cnot(1, 2, 2));
    const int64_t n = 40000;
    const double bound = 3 / std::sqrt(static_cast<double>(n));
    int inside = 0;
    double sum = 0, sum_sq = 0;
    for (uint64_t seed = 1; seed <= 100; seed++) {
        auto g = run_sampled_protocol(ch, {1, 2}, SamplePlan::with_count(n), default_pool(), seed, {.threads = 4});
        inside += std::abs(g.value - 5.0 / 9.0) <= bound;
        sum += g.value;
        sum_sq += g.value * g.value;
    }
    const double mean = sum / 100;
    const double spread = std::sqrt((sum_sq - 100 * mean * mean) / 99);
    auto plan = sample_size(0.01, 0.05);
    if (inside < 99) {
        fail(o, std::to_string(inside) + "/100 runs within 3/sqrt(N)");
    }
    if (plan.n != 18445) {
        fail(o, "plan for delta=0.01, epsilon=0.05 returned " + std::to_string(plan.n));
    }
    if (o.ok) {
        o.detail = std::to_string(inside) + "/100 within 3/sqrt(N); " +
                   fmt("mean %.5f, run-to-run sd %.5f (binomial %.5f); ", mean, spread,
                       std::sqrt(5.0 / 9.0 * 4.0 / 9.0 / n)) +
                   "plan N = " + std::to_string(plan.n);
    }
    return o;
}

Outcome refocusing() {
    Outcome o;
    auto h = crotonic_hamiltonian();
    auto ideal = chi_diagonal(QuantumChannel::from_unitary(compile_sequence(ie_sequence(kIeTotalDuration / 8), h)));
    double ideal_max = 0;
    for (const auto &[s, v] : collective_coefficients(ideal).entries()) {
        ideal_max = std::max(ideal_max, v);
    }
    if (ideal_max >= 1e-10) {
        fail(o, fmt("ideal sequence leaves collective coefficient %.3g", ideal_max));
    }
    auto noisy =
        chi_diagonal(QuantumChannel::from_unitary(compile_sequence(ie_sequence(kIeTotalDuration / 8, 0.05), h)));
    double low = max_low_weight_coefficient(noisy, 2);
    double high = max_weight_coefficient(noisy, 2);
    if (!(low > 0)) {
        fail(o, "pulse error produced no weight-1/2 coefficients");
    }
    if (!(high < 0.1 * low)) {
        fail(o, fmt("weight-3+ max %.3g vs weight-1/2 max %.3g", high, low));
    }
    if (o.ok) {
        o.detail = fmt("ideal max %.2g; eps=0.05: weight-3+ / weight-1,2 = %.4f", ideal_max, high / low);
    }
    return o;
}

Outcome determinism() {
    Outcome o;
    auto dir = std::filesystem::temp_directory_path() / "pcorr_acceptance";
    std::filesystem::create_directories(dir);
    auto slurp = [](const std::filesystem::path &p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto cfg = parse_config(
        "gate = c12(0.4)\nn = 4\ntargets = 1-2; 2-3; 1-2-3\nmode = sampled\n"
        "delta = 0.02\nepsilon_n = 0.05\nseed = 987654321\neps0 = 0.01\n");
    const char *names[] = {"first", "second", "threaded"};
    for (int k = 0; k < 3; k++) {
        auto c = cfg;
        c.threads = k == 2 ? 8 : 1;
        report_write(run_experiment(c), dir / names[k]);
    }
    for (const char *ext : {".report", ".csv"}) {
        std::string a = slurp(dir / (std::string("first") + ext));
        if (a.empty()) {
            fail(o, std::string("empty ") + ext + " file");
        }
        for (const char *other : {"second", "threaded"}) {
            if (slurp(dir / (std::string(other) + ext)) != a) {
                fail(o, std::string(ext) + " differs for the " + other + " run");
            }
        }
    }
    if (o.ok) {
        o.detail = "report and csv identical across reruns and 1 vs 8 threads";
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "table reproduction", 10, table_reproduction},
        {2, "oracle equivalence", 60, oracle_equivalence},
        {3, "pool equivalence", 60, pool_equivalence},
        {4, "combination correctness", 0, combination},
        {5, "sampled statistics", 300, sampled_statistics},
        {6, "time-suspension refocusing", 0, refocusing},
        {7, "determinism", 0, determinism},
    };
    int failures = 0;
    for (const auto &c : criteria) {
        auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            fail(o, std::string("exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
            fail(o, fmt("took %.1f s, limit %.0f s", seconds, c.limit_seconds));
        }
        failures += !o.ok;
        std::printf("%s criterion %d (%s) [%.2f s]: %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, seconds,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 7 criteria passed\n", 7 - failures);
    return failures == 0 ? 0 : 1;
}
