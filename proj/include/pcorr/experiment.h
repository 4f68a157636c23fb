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

#ifndef PCORR_EXPERIMENT_H
#define PCORR_EXPERIMENT_H

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcorr/clifford.h"
#include "pcorr/protocol.h"
#include "pcorr/state.h"

namespace pcorr {

/// Malformed or inconsistent experiment configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

enum class GateKind { Identity, IeSequence, C12, Cnot, Cnot2, MatrixFile, EnsembleFile };
enum class RunMode { Exact, Sampled };

struct ExperimentConfig {
    GateKind gate = GateKind::Identity;
    double beta = 0;
    QubitSet gate_qubits{1, 2};
    std::string matrix_file;
    std::string ensemble_file;

    int n = 4;
    std::vector<QubitSet> targets{{1, 2}};
    RunMode mode = RunMode::Exact;
    std::string pool = "S1:I:X";

    std::optional<double> delta;
    std::optional<double> epsilon;
    std::optional<int64_t> n_realizations;
    std::optional<uint64_t> seed;
    AssignmentMode assignment = AssignmentMode::Random;
    SampledEstimator estimator = SampledEstimator::DensityMatrix;
    int threads = 1;

    ErrorBudget budget;

    std::string hamiltonian = "crotonic-400MHz";
    double ie_total_duration = 12.2e-3;
    double pulse_error = 0;
    std::string sequence_file;

    std::string out;

    /// Applies one `key = value` setting; throws ConfigError on unknown keys or
    /// malformed values.
    void set(std::string_view key, std::string_view value);
    /// Resolved settings in a fixed order, as echoed in reports.
    std::vector<std::pair<std::string, std::string>> echo() const;
    std::string gate_name() const;
    /// Checks ranges and cross-field requirements; throws ConfigError.
    void validate() const;
};

/// Parses a flat `key = value` config (`#` comments, blank lines ignored).
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path &path, ExperimentConfig base = {});

/// Channel for the configured gate. Custom files are read relative to the
/// working directory.
QuantumChannel build_channel(const ExperimentConfig &config);

/// Custom gate files. Matrix: `n <k>` then 2^k rows of 2^(k+1) numbers (re im
/// pairs). Ensemble: `n <k>`, `kind <unitary-ensemble|kraus>`, then blocks of
/// `term <weight>` followed by 2^k such rows.
QuantumChannel parse_matrix_file(std::string_view text);
QuantumChannel parse_ensemble_file(std::string_view text);

struct SubsetResult {
    QubitSet subset;
    /// Every nonempty sub-subset of `subset`, size then lexicographic order.
    std::vector<GammaEstimate> gammas;
    /// gamma_predicted at purity 1 for each entry of `gammas`.
    std::vector<double> gamma_oracle;
    std::vector<double> gamma_budget;
    double eta = 0;
    double eta_stderr = 0;
    double eta_budget = 0;
    /// Collective coefficient with support exactly `subset`.
    double oracle = 0;
    /// Collective coefficients over strict supersets of `subset`.
    double oracle_tail = 0;
    /// eta - oracle.
    double discrepancy = 0;
};

struct Report {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::string gate;
    bool chi_trace_preserving = true;
    std::vector<SubsetResult> subsets;
};

/// Runs every target subset. Exact mode throws NumericalInvariantError if an
/// estimate leaves the oracle by more than kValidityTol.
Report run_experiment(const ExperimentConfig &config);

std::string render_report(const Report &report);
std::string render_table(const Report &report);

/// Writes `<prefix>.report` and `<prefix>.csv`; throws std::runtime_error
/// naming the path on I/O failure.
void report_write(const Report &report, const std::filesystem::path &prefix);

}  // namespace pcorr

#endif
