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

#ifndef PCORR_PROTOCOL_H
#define PCORR_PROTOCOL_H

#include <cstdint>
#include <map>
#include <vector>

#include "pcorr/clifford.h"
#include "pcorr/pauli.h"
#include "pcorr/state.h"

namespace pcorr {

/// Fidelity decay gamma^(M) for one measured subset. realizations == 0 marks an
/// exact (twirl-averaged) value with zero standard error.
struct GammaEstimate {
    QubitSet subset;
    double value = 0;
    double std_error = 0;
    int64_t realizations = 0;
};

enum class DominantBound { Clt, Chernoff, Tie };

struct SamplePlan {
    double delta = 0;
    double epsilon = 0;
    int64_t n = 0;
    int64_t n_clt = 0;
    int64_t n_chernoff = 0;
    DominantBound dominant = DominantBound::Tie;

    /// A plan with a caller-chosen realization count and no precision target.
    static SamplePlan with_count(int64_t n);
};

struct ErrorBudget {
    double eps0 = 0;  // initial-state preparation error
    double eps1 = 0;  // Clifford implementation error
};

/// All nonempty subsets of `m`, ordered by size then lexicographically.
std::vector<QubitSet> nonempty_subsets(const QubitSet &m);

/// Initial state |0..0><0..0| on `measured`, maximally mixed elsewhere.
DensityMatrix protocol_initial_state(int n, const QubitSet &measured);

/// 1 - <0..0|rho1^(M)|0..0> after an exact twirl of `ch` on M.
GammaEstimate gamma_exact(const QuantumChannel &ch, const QubitSet &measured, const CliffordPool &pool);

/// Every sub-subset's gamma from the single exact twirl on M: the all-zeros
/// projector of each sub-subset is read off the same twirled state.
std::vector<GammaEstimate> gamma_exact_subsets(
    const QuantumChannel &ch, const QubitSet &measured, const CliffordPool &pool);

/// sum_l <|eta_l|^2> (prod_j P_j - prod_j C_j(l)) with C_j = (2/3)(1 - P_j/2)
/// on a non-identity letter and P_j on an identity letter.
double gamma_predicted(const ChiDiagonal &chi, const std::map<int, double> &purities, const QubitSet &measured);

/// (9/4)(gamma_a + gamma_b - gamma_ab), unclamped.
double combine_pair(const GammaEstimate &a, const GammaEstimate &b, const GammaEstimate &ab);
double combine_pair(double a, double b, double ab);

/// Inclusion-exclusion over the nonempty subsets S of M:
///   (3/2)^|M| sum_S (-1)^(|S|+1) gamma^(S)
/// which equals the sum of collective coefficients over supports containing M
/// (pure measured qubits). For |M| = 2 this is combine_pair.
double combine_subset(const std::map<QubitSet, double> &gammas);

/// (3/2)^|M| sqrt(sum_S sigma_S^2), the propagated error of combine_subset.
double combine_subset_error(const std::map<QubitSet, double> &sigmas);

enum class AssignmentMode { Random, Cyclic };
enum class SampledEstimator { DensityMatrix, PerShotEnsemble };

struct SampledOptions {
    AssignmentMode assignment = AssignmentMode::Random;
    SampledEstimator estimator = SampledEstimator::DensityMatrix;
    int threads = 1;
};

/// Monte-Carlo protocol on M. Each realization prepares |0> on M and random
/// computational-basis bits elsewhere, draws a twirl assignment, applies the
/// channel and the inverse twirl, then samples the measured bits once. Returns
/// one estimate per nonempty sub-subset of M (nonempty_subsets order), all
/// tallied from the same realizations.
std::vector<GammaEstimate> run_sampled_campaign(
    const QuantumChannel &ch,
    const QubitSet &measured,
    int64_t realizations,
    const CliffordPool &pool,
    uint64_t seed,
    const SampledOptions &options = {});

GammaEstimate run_sampled_protocol(
    const QuantumChannel &ch,
    const QubitSet &measured,
    const SamplePlan &plan,
    const CliffordPool &pool,
    uint64_t seed,
    const SampledOptions &options = {});

/// N = max(ceil(ln(2/eps)/(2 delta^2)), ceil(delta^-2)).
SamplePlan sample_size(double delta, double epsilon);

/// sqrt(eps0^2 (1 + 4 gamma) + eps1^2).
double gamma_error_bound(const ErrorBudget &budget, double gamma);

/// (9/4) sqrt(sa^2 + sb^2 + sab^2).
double eta_error_pair(double sigma_a, double sigma_b, double sigma_ab);

struct ExperimentCount {
    uint64_t protocol = 0;  // N * C(n, w)
    uint64_t qpt = 0;       // N * 2^(4n)
};

/// Throws std::overflow_error when either count does not fit in 64 bits.
ExperimentCount experiment_count(int n, int w, uint64_t realizations);

}  // namespace pcorr

#endif
