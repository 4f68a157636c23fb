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

// Command-line runner for correlated-error characterization experiments.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcorr/experiment.h"
#include "pcorr/nmr.h"
#include "pcorr/pauli.h"
#include "pcorr/protocol.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Overrides {
    std::string config_path;
    std::optional<std::string> gate, mode, seed, n_realizations, pool, out, targets, n, threads;
    std::vector<std::string> sets;
};

pcorr::ExperimentConfig resolve(const Overrides &o) {
    pcorr::ExperimentConfig cfg;
    if (!o.config_path.empty()) {
        cfg = pcorr::load_config(o.config_path);
    }
    auto apply = [&](const char *key, const std::optional<std::string> &v) {
        if (v) {
            cfg.set(key, *v);
        }
    };
    apply("gate", o.gate);
    apply("n", o.n);
    apply("targets", o.targets);
    apply("mode", o.mode);
    apply("pool", o.pool);
    apply("seed", o.seed);
    apply("n_realizations", o.n_realizations);
    apply("threads", o.threads);
    apply("out", o.out);
    for (const auto &kv : o.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw pcorr::ConfigError("--set expects key=value, got '" + kv + "'");
        }
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

int run(const Overrides &o, bool print_table) {
    auto cfg = resolve(o);
    auto start = std::chrono::steady_clock::now();
    auto report = pcorr::run_experiment(cfg);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!cfg.out.empty()) {
        pcorr::report_write(report, cfg.out);
        std::cerr << "wrote " << cfg.out << ".report and " << cfg.out << ".csv\n";
    }
    if (print_table || cfg.out.empty()) {
        std::cout << pcorr::render_table(report);
    }
    std::cerr << "runtime_seconds = " << seconds << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Clifford-twirl characterization of spatially correlated errors"};
    app.require_subcommand(0, 1);

    Overrides o;
    bool print_table = false;
    app.add_option("-c,--config", o.config_path, "Key-value experiment config file")->check(CLI::ExistingFile);
    app.add_option("--gate", o.gate, "identity | ie-sequence | c12(beta) | cnot | cnot2 | matrix-file | ensemble-file");
    app.add_option("--n", o.n, "Qubit count");
    app.add_option("--targets", o.targets, "Target subsets, e.g. '1-2;2-3;1-4'");
    app.add_option("--mode", o.mode, "exact | sampled");
    app.add_option("--pool", o.pool, "full-24 | half-12:S1 | S1:I:X ...");
    app.add_option("--seed", o.seed, "64-bit seed for sampled mode");
    app.add_option("--n-realizations", o.n_realizations, "Realizations per campaign (sampled mode)");
    app.add_option("--threads", o.threads, "Worker threads for sampled campaigns");
    app.add_option("--out", o.out, "Output prefix; writes <prefix>.report and <prefix>.csv");
    app.add_option("--set", o.sets, "Any config key, as key=value (repeatable)");
    app.add_flag("--print", print_table, "Also print the table to stdout when --out is given");

    auto *plan_cmd = app.add_subcommand("plan", "Realizations needed for precision delta at failure probability epsilon");
    double delta = 0, epsilon = 0;
    plan_cmd->add_option("--delta", delta)->required();
    plan_cmd->add_option("--epsilon", epsilon)->required();

    auto *count_cmd = app.add_subcommand("count", "Experiment count N*C(n,w) against N*2^(4n)");
    int count_n = 0, count_w = 0;
    uint64_t count_realizations = 0;
    count_cmd->add_option("n", count_n)->required();
    count_cmd->add_option("w", count_w)->required();
    count_cmd->add_option("N", count_realizations)->required();

    auto *chi_cmd = app.add_subcommand("chi", "Print the chi diagonal and collective coefficients of the configured gate");
    chi_cmd->fallthrough();
    auto *pools_cmd = app.add_subcommand("pools", "Compare all twirl pools on each configured target (at most 2 qubits)");
    pools_cmd->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*plan_cmd) {
            auto plan = pcorr::sample_size(delta, epsilon);
            const char *dom = plan.dominant == pcorr::DominantBound::Chernoff ? "chernoff"
                              : plan.dominant == pcorr::DominantBound::Clt    ? "clt"
                                                                               : "tie";
            std::cout << "n = " << plan.n << "\nn_clt = " << plan.n_clt << "\nn_chernoff = " << plan.n_chernoff
                      << "\ndominant = " << dom << "\n";
            return kExitOk;
        }
        if (*count_cmd) {
            auto c = pcorr::experiment_count(count_n, count_w, count_realizations);
            std::cout << "protocol = " << c.protocol << "\nqpt = " << c.qpt << "\n";
            return kExitOk;
        }
        if (*chi_cmd) {
            auto cfg = resolve(o);
            cfg.validate();
            auto chi = pcorr::chi_diagonal(pcorr::build_channel(cfg));
            std::cout << "[chi]\n" << pcorr::serialize(chi) << "\n[collective]\n"
                      << pcorr::serialize(pcorr::collective_coefficients(chi));
            return kExitOk;
        }
        if (*pools_cmd) {
            auto cfg = resolve(o);
            cfg.validate();
            auto ch = pcorr::build_channel(cfg);
            bool ok = true;
            for (const auto &t : cfg.targets) {
                auto rep = pcorr::pool_equivalence_check(ch, t, pcorr::protocol_initial_state(cfg.n, t));
                std::cout << "[subset " << pcorr::format_subset(t, '-') << "]\n" << pcorr::serialize(rep);
                ok = ok && rep.consistent;
            }
            return ok ? kExitOk : kExitNumerical;
        }
        return run(o, print_table);
    } catch (const pcorr::NumericalInvariantError &e) {
        std::cerr << "numerical invariant violated: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
