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

#ifndef PCORR_PAULI_H
#define PCORR_PAULI_H

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcorr/state.h"

namespace pcorr {

enum class PauliLetter : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_char(PauliLetter p);
PauliLetter letter_from_char(char c);
Matrix2 letter_matrix(PauliLetter p);

/// An n-fold tensor product of {I, X, Y, Z}. Letter k (0-based) acts on qubit
/// k+1, so the string reads left to right in tensor-factor order.
class PauliString {
   public:
    explicit PauliString(std::vector<PauliLetter> letters);
    static PauliString parse(std::string_view text);
    static PauliString identity(int n);
    /// Inverse of index(): base-4 digits, qubit 1 most significant, I<X<Y<Z.
    static PauliString from_index(int n, uint64_t index);

    int n() const {
        return static_cast<int>(letters_.size());
    }
    PauliLetter operator[](int qubit) const {
        return letters_[qubit - 1];
    }
    const std::vector<PauliLetter> &letters() const {
        return letters_;
    }
    uint64_t index() const;
    std::string str() const;
    /// Qubits carrying a non-identity letter.
    QubitSet support() const;

    bool operator==(const PauliString &other) const = default;

   private:
    std::vector<PauliLetter> letters_;
};

/// Dense 2^n x 2^n matrix of the tensor product.
UnitaryMatrix pauli_matrix(const PauliString &s);
int pauli_weight(const PauliString &s);

/// Diagonal of the chi matrix in the Pauli-string basis: <|eta_s|^2> for every
/// string s, including the identity string. Indexed by PauliString::index().
class ChiDiagonal {
   public:
    ChiDiagonal(int n, std::vector<double> values);

    int n() const {
        return n_;
    }
    double at(const PauliString &s) const;
    double at_index(uint64_t index) const {
        return values_[index];
    }
    const std::vector<double> &values() const {
        return values_;
    }
    double total() const;
    /// True when the values sum to 1 within kValidityTol.
    bool trace_preserving() const;

   private:
    int n_;
    std::vector<double> values_;
};

/// Values of Pauli-weight-coarse-grained coefficients keyed by exact support.
class CollectiveCoefficients {
   public:
    CollectiveCoefficients(int n, std::vector<double> by_mask);

    int n() const {
        return n_;
    }
    /// Value for an exact support set (1-based qubits).
    double at(const QubitSet &subset) const;
    /// Sum over strict supersets of `subset`.
    double superset_tail(const QubitSet &subset) const;
    /// All nonempty subsets in (size, lexicographic) order with their values.
    std::vector<std::pair<QubitSet, double>> entries() const;
    double total() const;

   private:
    int n_;
    // Bit (q-1) set for qubit q.
    std::vector<double> by_mask_;
};

uint64_t subset_mask(const QubitSet &subset);
QubitSet mask_subset(uint64_t mask);

/// <|eta_s|^2> = sum_k w_k |Tr[P_s A_k]|^2 / D^2.
ChiDiagonal chi_diagonal(const QuantumChannel &ch);
CollectiveCoefficients collective_coefficients(const ChiDiagonal &chi);
/// Largest collective coefficient over supports of size > w; 0 if none.
double max_weight_coefficient(const ChiDiagonal &chi, int w);
/// Largest collective coefficient over supports of size in [1, w].
double max_low_weight_coefficient(const ChiDiagonal &chi, int w);

std::string format_subset(const QubitSet &subset, char sep = ',');
QubitSet parse_subset(std::string_view text);

/// Key-value text: one `<letters> = <value>` line per string.
std::string serialize(const ChiDiagonal &chi);
/// Key-value text: one `<q1,q2,..> = <value>` line per subset.
std::string serialize(const CollectiveCoefficients &col);
ChiDiagonal parse_chi_diagonal(std::string_view text);
CollectiveCoefficients parse_collective(std::string_view text);

/// 15 significant digits; magnitudes below 1e-14 are written as 0.
std::string format_real(double v);

}  // namespace pcorr

#endif
