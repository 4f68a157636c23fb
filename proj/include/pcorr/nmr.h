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

#ifndef PCORR_NMR_H
#define PCORR_NMR_H

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pcorr/state.h"

namespace pcorr {

/// Rotating-frame Hamiltonian
///   H = sum_j pi*shift_j sigma_z^j + sum_{j<k} (pi*J_jk / 2) sigma_z^j sigma_z^k
/// with shifts and couplings in Hz and H in rad/s (hbar = 1).
struct NmrHamiltonian {
    int n = 0;
    std::vector<double> shifts_hz;
    std::map<std::pair<int, int>, double> couplings_hz;

    double coupling(int j, int k) const;
    void set_coupling(int j, int k, double hz);
    double max_abs_coupling() const;
};

/// Four 13C spins of crotonic acid at 400 MHz.
NmrHamiltonian crotonic_hamiltonian();

/// Parses `shift j value_hz` and `coupling j k value_hz` lines; `#` starts a
/// comment. The qubit count is the largest index mentioned.
NmrHamiltonian parse_hamiltonian(std::string_view text);

enum class PulseAxis { PlusX, MinusX, PlusY, MinusY };

struct Delay {
    double seconds;
};
struct Pulse {
    QubitSet qubits;
    PulseAxis axis;
    double angle;
};
using SequenceEvent = std::variant<Delay, Pulse>;

class PulseSequence {
   public:
    PulseSequence() = default;
    explicit PulseSequence(std::vector<SequenceEvent> events);

    const std::vector<SequenceEvent> &events() const {
        return events_;
    }
    double total_duration() const;

   private:
    std::vector<SequenceEvent> events_;
};

/// One event per line: `delay <seconds>` or `pulse <q1,q2,..> <+x|-x|+y|-y> <angle_rad>`.
PulseSequence parse_sequence(std::string_view text);

/// The eight-interval time-suspension sequence: each delay tau is followed by
/// a pi pulse (+ angle_error) on {3,4}, {2}, {3,4}, {1,4} about +x, then the
/// same four about -x.
PulseSequence ie_sequence(double tau, double angle_error = 0);

constexpr double kIeTotalDuration = 12.2e-3;

/// Real diagonal matrix of H in rad/s.
Matrix hamiltonian_matrix(const NmrHamiltonian &h);
UnitaryMatrix free_evolution(const NmrHamiltonian &h, double tau);
/// exp(-i (angle/2) sum_{j in qubits} sigma_axis^j).
UnitaryMatrix pulse_unitary(int n, const Pulse &pulse);
/// Time-ordered product, first event rightmost, with the global phase fixed so
/// the first nonzero diagonal entry is real and positive.
UnitaryMatrix compile_sequence(const PulseSequence &seq, const NmrHamiltonian &h);
/// Multiplies by the phase that makes the first nonzero diagonal entry real
/// and positive.
Matrix remove_global_phase(const Matrix &u);

/// exp(-i beta sigma_z^a sigma_z^b) on an n-qubit register.
UnitaryMatrix gate_c12(double beta, int n = 4, int a = 1, int b = 2);
UnitaryMatrix gate_cnot(int control, int target, int n = 4);

}  // namespace pcorr

#endif
