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

#ifndef PCORR_TEST_UTIL_H
#define PCORR_TEST_UTIL_H

#include <random>
#include <vector>

#include "pcorr/pauli.h"
#include "pcorr/state.h"

namespace pcorr::testutil {

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
Matrix random_unitary(int n, std::mt19937_64 &rng);
/// Random CPTP map with `count` Kraus operators (blocks of a random isometry).
QuantumChannel random_kraus_channel(int n, int count, std::mt19937_64 &rng);
/// Random convex mixture of `count` Haar unitaries.
QuantumChannel random_unitary_ensemble(int n, int count, std::mt19937_64 &rng);
/// Random mixed state rho = A A^dagger / Tr.
DensityMatrix random_density(int n, std::mt19937_64 &rng);

/// <|eta_s|^2> by dense trace Tr[pauli_matrix(s) A] over explicit Kronecker
/// products; independent of the permutation route used by chi_diagonal.
std::vector<double> chi_by_dense_trace(const QuantumChannel &ch);

/// Partial trace by explicit index summation over (kept, traced) digit tuples.
Matrix partial_trace_by_summation(const Matrix &rho, int n, const QubitSet &keep);

/// exp(-i theta P) for a Pauli string P (P^2 = I).
Matrix pauli_rotation(const PauliString &p, double theta);

}  // namespace pcorr::testutil

#endif
