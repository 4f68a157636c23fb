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

#ifndef PCORR_CLIFFORD_H
#define PCORR_CLIFFORD_H

#include <string>
#include <string_view>
#include <vector>

#include "pcorr/pauli.h"
#include "pcorr/state.h"

namespace pcorr {

/// The six symplectic generators. The first three are rotations by
/// nu*2pi/3 about (1,1,1)/sqrt(3); the last three are pi/2 rotations about a
/// Pauli axis.
enum class Symplectic { S1_0, S1_1, S1_2, S2_X, S2_Y, S2_Z };
enum class SymplecticSet { S1, S2 };

Matrix2 symplectic_matrix(Symplectic s);
std::string symplectic_name(Symplectic s);
std::vector<Symplectic> symplectic_members(SymplecticSet set);

struct CliffordElement {
    Symplectic symplectic_part;
    PauliLetter pauli_part;
    /// matrix(S) * matrix(P).
    Matrix2 matrix;

    static CliffordElement make(Symplectic s, PauliLetter p);
    std::string name() const;
};

/// |Tr[U^dagger V]| / 2, i.e. 1 exactly when U and V agree up to a global phase.
double phase_insensitive_overlap(const Matrix2 &u, const Matrix2 &v);

/// If conjugation U P U^dagger equals +-Q for a Pauli Q, returns (Q, sign);
/// throws NumericalInvariantError otherwise.
std::pair<PauliLetter, int> conjugate_pauli(const Matrix2 &u, PauliLetter p);

/// All 24 single-qubit Cliffords as (S1 u S2) x {I, X, Y, Z}.
std::vector<CliffordElement> enumerate_cliffords();

enum class PoolKind { Full24, Half12, Minimal6 };

struct PoolChoice {
    SymplecticSet sset = SymplecticSet::S1;
    PauliLetter p1 = PauliLetter::I;  // I or Z
    PauliLetter p2 = PauliLetter::X;  // X or Y

    bool operator==(const PoolChoice &) const = default;
};

class CliffordPool {
   public:
    PoolKind kind() const {
        return kind_;
    }
    const PoolChoice &choice() const {
        return choice_;
    }
    const std::vector<CliffordElement> &elements() const {
        return elements_;
    }
    size_t size() const {
        return elements_.size();
    }
    /// Canonical config spelling: "full-24", "half-12:S1", "S1:I:X".
    std::string name() const;

   private:
    friend CliffordPool build_pool(PoolKind kind, PoolChoice choice);
    PoolKind kind_ = PoolKind::Minimal6;
    PoolChoice choice_;
    std::vector<CliffordElement> elements_;
};

/// Full24 ignores `choice`; Half12 uses only `choice.sset`.
CliffordPool build_pool(PoolKind kind, PoolChoice choice = {});
CliffordPool default_pool();
/// Parses "full-24", "half-12[:S1|:S2]" or "S<1|2>:<I|Z>:<X|Y>".
CliffordPool parse_pool(std::string_view spec);
/// The eight minimal pools, ordered (S1,S2) x (I,Z) x (X,Y).
std::vector<CliffordPool> all_minimal_pools();

/// One pool element per measured qubit; the twirl operator is their tensor
/// product, with identity on unmeasured qubits.
struct TwirlAssignment {
    QubitSet qubits;
    std::vector<Matrix2> ops;

    /// Assignment number `index` in mixed radix over the pool, first qubit most
    /// significant.
    static TwirlAssignment from_index(const CliffordPool &pool, const QubitSet &qubits, uint64_t index);
    TwirlAssignment inverse() const;
    /// In-place C rho C^dagger on an n-qubit state.
    void conjugate(Matrix &rho, int n) const;
};

constexpr uint64_t kMaxExactAssignments = 1000000;

/// Number of assignments K^m, or 0 if it exceeds kMaxExactAssignments.
uint64_t assignment_count(const CliffordPool &pool, size_t m);

/// Exact twirl: (1/K^m) sum_k C_k^dagger S(C_k rho0 C_k^dagger) C_k over all
/// K^m assignments on the measured qubits.
DensityMatrix twirl_exact(
    const QuantumChannel &ch, const QubitSet &measured, const DensityMatrix &rho0, const CliffordPool &pool);

struct PoolEquivalenceReport {
    std::vector<std::string> pool_names;
    std::vector<double> probabilities;
    double max_spread = 0;
    bool consistent = true;
};

/// Projection onto |0..0>_M after twirling with full-24, half-12 and each of
/// the eight minimal pools.
PoolEquivalenceReport pool_equivalence_check(
    const QuantumChannel &ch, const QubitSet &measured, const DensityMatrix &rho0);
std::string serialize(const PoolEquivalenceReport &report);

}  // namespace pcorr

#endif
