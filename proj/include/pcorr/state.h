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

#ifndef PCORR_STATE_H
#define PCORR_STATE_H

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace pcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;

/// Qubits are numbered from 1; qubit 1 is the leftmost tensor factor, i.e. the
/// most significant bit of a computational-basis index.
using QubitSet = std::vector<int>;

constexpr int kMaxQubits = 10;
constexpr double kValidityTol = 1e-9;
constexpr double kExactTol = 1e-12;

/// Raised when a computed quantity violates a numerical invariant that should
/// hold for every valid input (as opposed to a malformed input).
class NumericalInvariantError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Bit position (from least significant) of a 1-based qubit in a basis index.
inline int qubit_bit(int n, int qubit) {
    return n - qubit;
}

/// Qubit count of a 2^n x 2^n matrix; throws if the dimension is not a power of
/// two or exceeds 2^kMaxQubits.
int qubit_count_of(const Matrix &m);

/// Validates a qubit subset against n: nonempty, in range, no duplicates.
/// Returns the subset sorted ascending.
QubitSet checked_subset(int n, const QubitSet &subset);

/// Kronecker product a (x) b. Rejects results beyond kMaxQubits qubits.
Matrix tensor(const Matrix &a, const Matrix &b);
Matrix tensor_all(std::span<const Matrix> factors);

/// Frobenius-norm distance of U^dagger U from the identity.
double unitarity_defect(const Matrix &u);

/// In-place U_q rho U_q^dagger for a single-qubit U acting on `qubit`.
void conjugate_local(Matrix &rho, int n, int qubit, const Matrix2 &u);

class DensityMatrix {
   public:
    /// Validates hermiticity, unit trace and positivity to kValidityTol.
    explicit DensityMatrix(Matrix data);

    static DensityMatrix pure_zero(int n);
    static DensityMatrix maximally_mixed(int n);
    static DensityMatrix basis_state(int n, unsigned long index);
    /// Diagonal state from probabilities over the computational basis.
    static DensityMatrix diagonal(std::span<const double> probabilities);

    int n() const {
        return n_;
    }
    const Matrix &data() const {
        return data_;
    }

   private:
    struct Unchecked {};
    DensityMatrix(Matrix data, Unchecked);
    friend DensityMatrix adopt_density(Matrix data);

    int n_;
    Matrix data_;
};

/// Wraps a matrix produced by a trusted computation (channel output, partial
/// trace) without re-running the eigenvalue check.
DensityMatrix adopt_density(Matrix data);

class UnitaryMatrix {
   public:
    explicit UnitaryMatrix(Matrix data);
    static UnitaryMatrix identity(int n);

    int n() const {
        return n_;
    }
    const Matrix &data() const {
        return data_;
    }
    UnitaryMatrix adjoint() const;
    UnitaryMatrix operator*(const UnitaryMatrix &rhs) const;

   private:
    int n_;
    Matrix data_;
};

enum class ChannelKind { UnitaryEnsemble, Kraus };

struct ChannelTerm {
    double weight;
    Matrix op;
};

/// Completely positive map as a finite operator ensemble: rho -> sum_k w_k A_k rho A_k^dagger.
class QuantumChannel {
   public:
    QuantumChannel(int n, ChannelKind kind, std::vector<ChannelTerm> terms);

    static QuantumChannel identity(int n);
    static QuantumChannel from_unitary(const UnitaryMatrix &u);
    static QuantumChannel mixture(std::span<const double> weights, std::span<const UnitaryMatrix> unitaries);
    static QuantumChannel kraus(std::vector<Matrix> ops);

    int n() const {
        return n_;
    }
    ChannelKind kind() const {
        return kind_;
    }
    const std::vector<ChannelTerm> &terms() const {
        return terms_;
    }

   private:
    int n_;
    ChannelKind kind_;
    std::vector<ChannelTerm> terms_;
};

/// Convex combination p*a + (1-p)*b of two channels on the same register.
QuantumChannel convex_combination(double p, const QuantumChannel &a, const QuantumChannel &b);

/// Raw matrix form of apply_channel, for intermediate states that are not
/// re-validated.
Matrix apply_channel_raw(const QuantumChannel &ch, const Matrix &rho);
DensityMatrix apply_channel(const QuantumChannel &ch, const DensityMatrix &rho);

DensityMatrix partial_trace(const DensityMatrix &rho, const QubitSet &keep);
Matrix partial_trace_raw(const Matrix &rho, int n, const QubitSet &keep);

double purity(const DensityMatrix &rho);

/// Tr[rho (|0..0><0..0|_subset (x) I_rest)], clamped to [0, 1].
double projection_probability(const DensityMatrix &rho, const QubitSet &subset);
double projection_probability_raw(const Matrix &rho, int n, const QubitSet &subset);

}  // namespace pcorr

#endif
