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

#include "pcorr/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pcorr/nmr.h"
#include "pcorr/pauli.h"

namespace pcorr {

namespace {

std::string trim(std::string_view s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) {
        return "";
    }
    auto b = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(a, b - a + 1));
}

double to_double(std::string_view key, std::string_view value) {
    std::string v(value);
    char *end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || !std::isfinite(d)) {
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + v + "'");
    }
    return d;
}

int64_t to_int(std::string_view key, std::string_view value) {
    std::string v(value);
    char *end = nullptr;
    long long i = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') {
        throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + v + "'");
    }
    return i;
}

uint64_t to_uint(std::string_view key, std::string_view value) {
    std::string v(value);
    char *end = nullptr;
    if (v.empty() || v[0] == '-') {
        throw ConfigError("'" + std::string(key) + "' expects a nonnegative integer, got '" + v + "'");
    }
    unsigned long long u = std::strtoull(v.c_str(), &end, 10);
    if (*end != '\0') {
        throw ConfigError("'" + std::string(key) + "' expects a nonnegative integer, got '" + v + "'");
    }
    return u;
}

QubitSet to_subset(std::string_view text) {
    try {
        return parse_subset(text);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
}

std::vector<QubitSet> to_targets(std::string_view text) {
    std::vector<QubitSet> out;
    std::string token;
    for (char c : std::string(text) + ";") {
        if (c == ';' || c == ' ' || c == '\t') {
            if (!token.empty()) {
                out.push_back(to_subset(token));
                token.clear();
            }
        } else {
            token.push_back(c);
        }
    }
    return out;
}

std::string short_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

uint64_t target_seed(uint64_t seed, size_t k) {
    return seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(k);
}

}  // namespace

void ExperimentConfig::set(std::string_view key_in, std::string_view value_in) {
    std::string key = trim(key_in);
    std::string value = trim(value_in);
    if (key == "gate") {
        if (value.starts_with("c12(") && value.ends_with(")")) {
            gate = GateKind::C12;
            beta = to_double("gate", std::string_view(value).substr(4, value.size() - 5));
        } else if (value == "c12") {
            gate = GateKind::C12;
        } else if (value == "identity") {
            gate = GateKind::Identity;
        } else if (value == "ie-sequence") {
            gate = GateKind::IeSequence;
        } else if (value == "cnot") {
            gate = GateKind::Cnot;
        } else if (value == "cnot2") {
            gate = GateKind::Cnot2;
        } else if (value == "matrix-file") {
            gate = GateKind::MatrixFile;
        } else if (value == "ensemble-file") {
            gate = GateKind::EnsembleFile;
        } else {
            throw ConfigError("unknown gate '" + value + "'");
        }
    } else if (key == "beta") {
        beta = to_double(key, value);
    } else if (key == "gate_qubits") {
        gate_qubits = to_subset(value);
    } else if (key == "matrix_file") {
        matrix_file = value;
    } else if (key == "ensemble_file") {
        ensemble_file = value;
    } else if (key == "n") {
        n = static_cast<int>(to_int(key, value));
    } else if (key == "targets") {
        targets = to_targets(value);
    } else if (key == "mode") {
        if (value == "exact") {
            mode = RunMode::Exact;
        } else if (value == "sampled") {
            mode = RunMode::Sampled;
        } else {
            throw ConfigError("mode must be 'exact' or 'sampled', got '" + value + "'");
        }
    } else if (key == "pool") {
        pool = value;
    } else if (key == "delta") {
        delta = to_double(key, value);
    } else if (key == "epsilon_n") {
        epsilon = to_double(key, value);
    } else if (key == "n_realizations") {
        n_realizations = to_int(key, value);
    } else if (key == "seed") {
        seed = to_uint(key, value);
    } else if (key == "assignment") {
        if (value == "random") {
            assignment = AssignmentMode::Random;
        } else if (value == "cyclic") {
            assignment = AssignmentMode::Cyclic;
        } else {
            throw ConfigError("assignment must be 'random' or 'cyclic', got '" + value + "'");
        }
    } else if (key == "estimator") {
        if (value == "density-matrix") {
            estimator = SampledEstimator::DensityMatrix;
        } else if (value == "per-shot-ensemble") {
            estimator = SampledEstimator::PerShotEnsemble;
        } else {
            throw ConfigError("estimator must be 'density-matrix' or 'per-shot-ensemble', got '" + value + "'");
        }
    } else if (key == "threads") {
        threads = static_cast<int>(to_int(key, value));
    } else if (key == "eps0") {
        budget.eps0 = to_double(key, value);
    } else if (key == "eps1") {
        budget.eps1 = to_double(key, value);
    } else if (key == "hamiltonian") {
        hamiltonian = value;
    } else if (key == "ie_total_duration") {
        ie_total_duration = to_double(key, value);
    } else if (key == "pulse_error") {
        pulse_error = to_double(key, value);
    } else if (key == "sequence_file") {
        sequence_file = value;
    } else if (key == "out") {
        out = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

std::string ExperimentConfig::gate_name() const {
    switch (gate) {
        case GateKind::Identity:
            return "identity";
        case GateKind::IeSequence:
            return "ie-sequence";
        case GateKind::C12:
            return "c12(" + short_real(beta) + ")";
        case GateKind::Cnot:
            return "cnot";
        case GateKind::Cnot2:
            return "cnot2";
        case GateKind::MatrixFile:
            return "matrix-file";
        case GateKind::EnsembleFile:
            return "ensemble-file";
    }
    return "?";
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("gate", gate_name());
    if (gate == GateKind::C12 || gate == GateKind::Cnot || gate == GateKind::Cnot2) {
        out.emplace_back("gate_qubits", format_subset(gate_qubits));
    }
    if (gate == GateKind::MatrixFile) {
        out.emplace_back("matrix_file", matrix_file);
    }
    if (gate == GateKind::EnsembleFile) {
        out.emplace_back("ensemble_file", ensemble_file);
    }
    if (gate == GateKind::IeSequence) {
        out.emplace_back("hamiltonian", hamiltonian);
        if (sequence_file.empty()) {
            out.emplace_back("ie_total_duration", short_real(ie_total_duration));
            out.emplace_back("pulse_error", short_real(pulse_error));
        } else {
            out.emplace_back("sequence_file", sequence_file);
        }
    }
    out.emplace_back("n", std::to_string(n));
    std::string t;
    for (size_t k = 0; k < targets.size(); k++) {
        t += (k ? ";" : "") + format_subset(targets[k], '-');
    }
    out.emplace_back("targets", t);
    out.emplace_back("mode", mode == RunMode::Exact ? "exact" : "sampled");
    out.emplace_back("pool", pool);
    if (mode == RunMode::Sampled) {
        if (delta) {
            out.emplace_back("delta", short_real(*delta));
        }
        if (epsilon) {
            out.emplace_back("epsilon_n", short_real(*epsilon));
        }
        int64_t resolved = n_realizations ? *n_realizations : sample_size(*delta, *epsilon).n;
        out.emplace_back("n_realizations", std::to_string(resolved));
        out.emplace_back("seed", std::to_string(*seed));
        out.emplace_back("assignment", assignment == AssignmentMode::Random ? "random" : "cyclic");
        out.emplace_back(
            "estimator", estimator == SampledEstimator::DensityMatrix ? "density-matrix" : "per-shot-ensemble");
    }
    out.emplace_back("eps0", short_real(budget.eps0));
    out.emplace_back("eps1", short_real(budget.eps1));
    return out;
}

void ExperimentConfig::validate() const {
    if (n < 1 || n > kMaxQubits) {
        throw ConfigError("n must lie in [1," + std::to_string(kMaxQubits) + "]");
    }
    for (const auto &t : targets) {
        try {
            checked_subset(n, t);
        } catch (const std::invalid_argument &e) {
            throw ConfigError("target {" + format_subset(t) + "}: " + e.what());
        }
    }
    if (gate == GateKind::C12 || gate == GateKind::Cnot || gate == GateKind::Cnot2) {
        if (gate_qubits.size() != 2) {
            throw ConfigError("gate_qubits must name two qubits");
        }
        try {
            checked_subset(n, gate_qubits);
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("gate_qubits: ") + e.what());
        }
    }
    if (gate == GateKind::MatrixFile && matrix_file.empty()) {
        throw ConfigError("gate 'matrix-file' needs matrix_file");
    }
    if (gate == GateKind::EnsembleFile && ensemble_file.empty()) {
        throw ConfigError("gate 'ensemble-file' needs ensemble_file");
    }
    if (gate == GateKind::IeSequence && sequence_file.empty() && !(ie_total_duration > 0)) {
        throw ConfigError("ie_total_duration must be positive");
    }
    try {
        parse_pool(pool);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    if (!(budget.eps0 >= 0) || !(budget.eps1 >= 0)) {
        throw ConfigError("eps0 and eps1 must be nonnegative");
    }
    if (threads < 1) {
        throw ConfigError("threads must be at least 1");
    }
    if (mode == RunMode::Sampled) {
        if (!seed) {
            throw ConfigError("sampled mode needs a seed");
        }
        if (delta.has_value() != epsilon.has_value() && !n_realizations) {
            throw ConfigError("a sample plan needs both delta and epsilon_n");
        }
        if (!n_realizations && !delta) {
            throw ConfigError("sampled mode needs n_realizations or delta and epsilon_n");
        }
        SamplePlan plan;
        if (delta) {
            try {
                plan = sample_size(*delta, epsilon.value_or(0.5));
            } catch (const std::invalid_argument &e) {
                throw ConfigError(e.what());
            }
        }
        if (n_realizations) {
            if (*n_realizations <= 0) {
                throw ConfigError("n_realizations must be positive");
            }
            if (delta && *n_realizations < plan.n_clt) {
                throw ConfigError(
                    "n_realizations = " + std::to_string(*n_realizations) + " is below ceil(delta^-2) = " +
                    std::to_string(plan.n_clt));
            }
        }
    }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        base.set(std::string_view(line).substr(0, eq), std::string_view(line).substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path &path, ExperimentConfig base) {
    return parse_config(read_file(path.string()), std::move(base));
}

namespace {

struct MatrixReader {
    std::vector<std::vector<std::string>> lines;
    size_t pos = 0;

    explicit MatrixReader(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.resize(hash);
            }
            std::istringstream words(line);
            std::vector<std::string> w;
            std::string s;
            while (words >> s) {
                w.push_back(s);
            }
            if (!w.empty()) {
                lines.push_back(std::move(w));
            }
        }
    }

    bool done() const {
        return pos >= lines.size();
    }

    const std::vector<std::string> &next(const char *what) {
        if (done()) {
            throw ConfigError(std::string("gate file ended while reading ") + what);
        }
        return lines[pos++];
    }

    std::string keyword(const char *name) {
        const auto &w = next(name);
        if (w.size() != 2 || w[0] != name) {
            throw ConfigError(std::string("gate file: expected '") + name + " <value>'");
        }
        return w[1];
    }

    Matrix matrix(int n) {
        const Eigen::Index dim = Eigen::Index{1} << n;
        Matrix m(dim, dim);
        for (Eigen::Index r = 0; r < dim; r++) {
            const auto &w = next("matrix rows");
            if (static_cast<Eigen::Index>(w.size()) != 2 * dim) {
                throw ConfigError("gate file: matrix row needs " + std::to_string(2 * dim) + " numbers");
            }
            for (Eigen::Index c = 0; c < dim; c++) {
                m(r, c) = Complex(to_double("matrix entry", w[2 * c]), to_double("matrix entry", w[2 * c + 1]));
            }
        }
        return m;
    }
};

int read_qubits(MatrixReader &reader) {
    int64_t n = to_int("n", reader.keyword("n"));
    if (n < 1 || n > kMaxQubits) {
        throw ConfigError("gate file: n out of range");
    }
    return static_cast<int>(n);
}

template <typename Fn>
auto as_config_error(Fn fn) {
    try {
        return fn();
    } catch (const ConfigError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("gate file: ") + e.what());
    }
}

}  // namespace

QuantumChannel parse_matrix_file(std::string_view text) {
    return as_config_error([&] {
        MatrixReader reader(text);
        int n = read_qubits(reader);
        Matrix m = reader.matrix(n);
        if (!reader.done()) {
            throw ConfigError("gate file: trailing content after matrix");
        }
        return QuantumChannel::from_unitary(UnitaryMatrix(std::move(m)));
    });
}

QuantumChannel parse_ensemble_file(std::string_view text) {
    return as_config_error([&] {
        MatrixReader reader(text);
        int n = read_qubits(reader);
        std::string kind = reader.keyword("kind");
        ChannelKind ck;
        if (kind == "unitary-ensemble") {
            ck = ChannelKind::UnitaryEnsemble;
        } else if (kind == "kraus") {
            ck = ChannelKind::Kraus;
        } else {
            throw ConfigError("gate file: kind must be 'unitary-ensemble' or 'kraus'");
        }
        std::vector<ChannelTerm> terms;
        while (!reader.done()) {
            double w = to_double("term", reader.keyword("term"));
            terms.push_back({w, reader.matrix(n)});
        }
        return QuantumChannel(n, ck, std::move(terms));
    });
}

QuantumChannel build_channel(const ExperimentConfig &config) {
    const int n = config.n;
    const auto &q = config.gate_qubits;
    switch (config.gate) {
        case GateKind::Identity:
            return QuantumChannel::identity(n);
        case GateKind::C12:
            return QuantumChannel::from_unitary(gate_c12(config.beta, n, q[0], q[1]));
        case GateKind::Cnot:
            return QuantumChannel::from_unitary(gate_cnot(q[0], q[1], n));
        case GateKind::Cnot2: {
            auto c = gate_cnot(q[0], q[1], n);
            return QuantumChannel::from_unitary(c * c);
        }
        case GateKind::IeSequence: {
            NmrHamiltonian h = config.hamiltonian == "crotonic-400MHz"
                                   ? crotonic_hamiltonian()
                                   : as_config_error([&] {
                                         return parse_hamiltonian(read_file(config.hamiltonian));
                                     });
            if (h.n != n) {
                throw ConfigError(
                    "Hamiltonian has " + std::to_string(h.n) + " qubits but n = " + std::to_string(n));
            }
            PulseSequence seq = config.sequence_file.empty()
                                    ? ie_sequence(config.ie_total_duration / 8, config.pulse_error)
                                    : as_config_error([&] {
                                          return parse_sequence(read_file(config.sequence_file));
                                      });
            return QuantumChannel::from_unitary(compile_sequence(seq, h));
        }
        case GateKind::MatrixFile:
        case GateKind::EnsembleFile: {
            bool matrix = config.gate == GateKind::MatrixFile;
            std::string text = read_file(matrix ? config.matrix_file : config.ensemble_file);
            QuantumChannel ch = matrix ? parse_matrix_file(text) : parse_ensemble_file(text);
            if (ch.n() != n) {
                throw ConfigError(
                    "gate file has " + std::to_string(ch.n()) + " qubits but n = " + std::to_string(n));
            }
            return ch;
        }
    }
    throw ConfigError("unknown gate");
}

Report run_experiment(const ExperimentConfig &config) {
    config.validate();
    const QuantumChannel ch = build_channel(config);
    const CliffordPool pool = parse_pool(config.pool);
    const ChiDiagonal chi = chi_diagonal(ch);
    const CollectiveCoefficients col = collective_coefficients(chi);

    Report report;
    report.metadata = config.echo();
    report.gate = config.gate_name();
    report.chi_trace_preserving = chi.trace_preserving();

    std::map<int, double> pure;
    for (int qb = 1; qb <= config.n; qb++) {
        pure[qb] = 1.0;
    }
    SampledOptions options{config.assignment, config.estimator, config.threads};
    int64_t realizations = 0;
    if (config.mode == RunMode::Sampled) {
        realizations = config.n_realizations ? *config.n_realizations : sample_size(*config.delta, *config.epsilon).n;
    }

    for (size_t k = 0; k < config.targets.size(); k++) {
        SubsetResult r;
        r.subset = checked_subset(config.n, config.targets[k]);
        if (config.mode == RunMode::Exact) {
            r.gammas = gamma_exact_subsets(ch, r.subset, pool);
        } else {
            r.gammas = run_sampled_campaign(ch, r.subset, realizations, pool, target_seed(*config.seed, k), options);
        }
        std::map<QubitSet, double> values, sigmas, budgets;
        for (const auto &g : r.gammas) {
            double oracle = gamma_predicted(chi, pure, g.subset);
            double bound = gamma_error_bound(config.budget, std::clamp(g.value, 0.0, 1.0));
            r.gamma_oracle.push_back(oracle);
            r.gamma_budget.push_back(bound);
            values[g.subset] = g.value;
            sigmas[g.subset] = g.std_error;
            budgets[g.subset] = bound;
            if (config.mode == RunMode::Exact && std::abs(g.value - oracle) > kValidityTol) {
                throw NumericalInvariantError(
                    "gamma{" + format_subset(g.subset) + "} = " + format_real(g.value) +
                    " disagrees with the chi-diagonal prediction " + format_real(oracle));
            }
        }
        r.eta = combine_subset(values);
        r.eta_stderr = combine_subset_error(sigmas);
        r.eta_budget = combine_subset_error(budgets);
        r.oracle = col.at(r.subset);
        r.oracle_tail = col.superset_tail(r.subset);
        r.discrepancy = r.eta - r.oracle;
        if (config.mode == RunMode::Exact && std::abs(r.discrepancy - r.oracle_tail) > kValidityTol) {
            throw NumericalInvariantError(
                "combined coefficient for {" + format_subset(r.subset) + "} misses the oracle by " +
                format_real(r.discrepancy - r.oracle_tail));
        }
        report.subsets.push_back(std::move(r));
    }
    return report;
}

std::string render_report(const Report &report) {
    std::string out = "# pcorr report\n[metadata]\n";
    for (const auto &[k, v] : report.metadata) {
        out += k + " = " + v + "\n";
    }
    out += std::string("chi_trace_preserving = ") + (report.chi_trace_preserving ? "true" : "false") + "\n";
    for (const auto &r : report.subsets) {
        out += "\n[subset " + format_subset(r.subset, '-') + "]\n";
        for (size_t j = 0; j < r.gammas.size(); j++) {
            const auto &g = r.gammas[j];
            std::string key = "gamma." + format_subset(g.subset, '-');
            out += key + " = " + format_real(g.value) + "\n";
            out += key + ".stderr = " + format_real(g.std_error) + "\n";
            out += key + ".realizations = " + std::to_string(g.realizations) + "\n";
            out += key + ".oracle = " + format_real(r.gamma_oracle[j]) + "\n";
            out += key + ".budget_bound = " + format_real(r.gamma_budget[j]) + "\n";
        }
        out += "eta_col = " + format_real(r.eta) + "\n";
        out += "eta_col.stderr = " + format_real(r.eta_stderr) + "\n";
        out += "eta_col.budget_bound = " + format_real(r.eta_budget) + "\n";
        out += "oracle = " + format_real(r.oracle) + "\n";
        out += "oracle.tail = " + format_real(r.oracle_tail) + "\n";
        out += "discrepancy = " + format_real(r.discrepancy) + "\n";
    }
    return out;
}

std::string render_table(const Report &report) {
    std::string out = "gate,subset,gamma,stderr,eta_col,eta_stderr,oracle,discrepancy\n";
    for (const auto &r : report.subsets) {
        const auto &full = r.gammas.back();
        out += report.gate + "," + format_subset(r.subset, '-') + "," + format_real(full.value) + "," +
               format_real(full.std_error) + "," + format_real(r.eta) + "," + format_real(r.eta_stderr) + "," +
               format_real(r.oracle) + "," + format_real(r.discrepancy) + "\n";
    }
    return out;
}

void report_write(const Report &report, const std::filesystem::path &prefix) {
    auto write = [](const std::filesystem::path &path, const std::string &content) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        }
        f << content;
        f.close();
        if (!f) {
            throw std::runtime_error("failed writing '" + path.string() + "'");
        }
    };
    write(prefix.string() + ".report", render_report(report));
    write(prefix.string() + ".csv", render_table(report));
}

}  // namespace pcorr
