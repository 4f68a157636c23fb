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

#include "pcorr/clifford.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pcorr {

namespace {

/// exp(-i theta (n . sigma)) for a unit axis n.
Matrix2 axis_rotation(double theta, double nx, double ny, double nz) {
    const Complex i(0, 1);
    Matrix2 generator = nx * letter_matrix(PauliLetter::X) + ny * letter_matrix(PauliLetter::Y) +
                        nz * letter_matrix(PauliLetter::Z);
    return std::cos(theta) * Matrix2::Identity() - i * std::sin(theta) * generator;
}

}  // namespace

Matrix2 symplectic_matrix(Symplectic s) {
    const double third = std::numbers::pi / 3;
    const double diag = 1 / std::sqrt(3.0);
    switch (s) {
        case Symplectic::S1_0:
            return Matrix2::Identity();
        case Symplectic::S1_1:
            return axis_rotation(third, diag, diag, diag);
        case Symplectic::S1_2:
            return axis_rotation(2 * third, diag, diag, diag);
        case Symplectic::S2_X:
            return axis_rotation(std::numbers::pi / 4, 1, 0, 0);
        case Symplectic::S2_Y:
            return axis_rotation(std::numbers::pi / 4, 0, 1, 0);
        case Symplectic::S2_Z:
            return axis_rotation(std::numbers::pi / 4, 0, 0, 1);
    }
    throw std::invalid_argument("unknown symplectic generator");
}

std::string symplectic_name(Symplectic s) {
    switch (s) {
        case Symplectic::S1_0:
            return "S1.0";
        case Symplectic::S1_1:
            return "S1.1";
        case Symplectic::S1_2:
            return "S1.2";
        case Symplectic::S2_X:
            return "S2.x";
        case Symplectic::S2_Y:
            return "S2.y";
        case Symplectic::S2_Z:
            return "S2.z";
    }
    return "?";
}

std::vector<Symplectic> symplectic_members(SymplecticSet set) {
    if (set == SymplecticSet::S1) {
        return {Symplectic::S1_0, Symplectic::S1_1, Symplectic::S1_2};
    }
    return {Symplectic::S2_X, Symplectic::S2_Y, Symplectic::S2_Z};
}

CliffordElement CliffordElement::make(Symplectic s, PauliLetter p) {
    return {s, p, symplectic_matrix(s) * letter_matrix(p)};
}

std::string CliffordElement::name() const {
    return symplectic_name(symplectic_part) + "*" + letter_char(pauli_part);
}

double phase_insensitive_overlap(const Matrix2 &u, const Matrix2 &v) {
    return std::abs((u.adjoint() * v).trace()) / 2;
}

std::pair<PauliLetter, int> conjugate_pauli(const Matrix2 &u, PauliLetter p) {
    Matrix2 image = u * letter_matrix(p) * u.adjoint();
    for (auto q : {PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
        for (int sign : {1, -1}) {
            if ((image - static_cast<double>(sign) * letter_matrix(q)).cwiseAbs().maxCoeff() <= kValidityTol) {
                return {q, sign};
            }
        }
    }
    throw NumericalInvariantError("conjugation does not map a Pauli to a signed Pauli");
}

std::vector<CliffordElement> enumerate_cliffords() {
    std::vector<CliffordElement> out;
    for (auto set : {SymplecticSet::S1, SymplecticSet::S2}) {
        for (auto s : symplectic_members(set)) {
            for (auto p : {PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
                out.push_back(CliffordElement::make(s, p));
            }
        }
    }
    return out;
}

std::string CliffordPool::name() const {
    std::string sset = choice_.sset == SymplecticSet::S1 ? "S1" : "S2";
    switch (kind_) {
        case PoolKind::Full24:
            return "full-24";
        case PoolKind::Half12:
            return "half-12:" + sset;
        case PoolKind::Minimal6:
            return sset + ":" + letter_char(choice_.p1) + ":" + letter_char(choice_.p2);
    }
    return "?";
}

CliffordPool build_pool(PoolKind kind, PoolChoice choice) {
    CliffordPool pool;
    pool.kind_ = kind;
    pool.choice_ = choice;
    switch (kind) {
        case PoolKind::Full24:
            pool.choice_ = {};
            pool.elements_ = enumerate_cliffords();
            break;
        case PoolKind::Half12:
            for (auto s : symplectic_members(choice.sset)) {
                for (auto p : {PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
                    pool.elements_.push_back(CliffordElement::make(s, p));
                }
            }
            break;
        case PoolKind::Minimal6:
            if (choice.p1 != PauliLetter::I && choice.p1 != PauliLetter::Z) {
                throw std::invalid_argument("minimal pool P1 must be I or Z");
            }
            if (choice.p2 != PauliLetter::X && choice.p2 != PauliLetter::Y) {
                throw std::invalid_argument("minimal pool P2 must be X or Y");
            }
            for (auto s : symplectic_members(choice.sset)) {
                for (auto p : {choice.p1, choice.p2}) {
                    pool.elements_.push_back(CliffordElement::make(s, p));
                }
            }
            break;
    }
    return pool;
}

CliffordPool default_pool() {
    return build_pool(PoolKind::Minimal6, {SymplecticSet::S1, PauliLetter::I, PauliLetter::X});
}

CliffordPool parse_pool(std::string_view spec) {
    auto sset_of = [&](std::string_view s) {
        if (s == "S1") {
            return SymplecticSet::S1;
        }
        if (s == "S2") {
            return SymplecticSet::S2;
        }
        throw std::invalid_argument("unknown symplectic set '" + std::string(s) + "' in pool '" + std::string(spec) + "'");
    };
    if (spec == "full-24") {
        return build_pool(PoolKind::Full24);
    }
    if (spec == "half-12") {
        return build_pool(PoolKind::Half12);
    }
    if (spec.starts_with("half-12:")) {
        return build_pool(PoolKind::Half12, {sset_of(spec.substr(8)), PauliLetter::I, PauliLetter::X});
    }
    if (spec.size() == 6 && spec[2] == ':' && spec[4] == ':') {
        PoolChoice choice{sset_of(spec.substr(0, 2)), letter_from_char(spec[3]), letter_from_char(spec[5])};
        return build_pool(PoolKind::Minimal6, choice);
    }
    throw std::invalid_argument("unrecognized pool '" + std::string(spec) + "'");
}

std::vector<CliffordPool> all_minimal_pools() {
    std::vector<CliffordPool> out;
    for (auto set : {SymplecticSet::S1, SymplecticSet::S2}) {
        for (auto p1 : {PauliLetter::I, PauliLetter::Z}) {
            for (auto p2 : {PauliLetter::X, PauliLetter::Y}) {
                out.push_back(build_pool(PoolKind::Minimal6, {set, p1, p2}));
            }
        }
    }
    return out;
}

TwirlAssignment TwirlAssignment::from_index(const CliffordPool &pool, const QubitSet &qubits, uint64_t index) {
    TwirlAssignment a;
    a.qubits = qubits;
    a.ops.resize(qubits.size());
    const uint64_t k = pool.size();
    for (size_t j = qubits.size(); j-- > 0;) {
        a.ops[j] = pool.elements()[index % k].matrix;
        index /= k;
    }
    return a;
}

TwirlAssignment TwirlAssignment::inverse() const {
    TwirlAssignment a = *this;
    for (auto &op : a.ops) {
        op = op.adjoint().eval();
    }
    return a;
}

void TwirlAssignment::conjugate(Matrix &rho, int n) const {
    for (size_t j = 0; j < qubits.size(); j++) {
        conjugate_local(rho, n, qubits[j], ops[j]);
    }
}

uint64_t assignment_count(const CliffordPool &pool, size_t m) {
    uint64_t total = 1;
    for (size_t j = 0; j < m; j++) {
        total *= pool.size();
        if (total > kMaxExactAssignments) {
            return 0;
        }
    }
    return total;
}

DensityMatrix twirl_exact(
    const QuantumChannel &ch, const QubitSet &measured, const DensityMatrix &rho0, const CliffordPool &pool) {
    if (rho0.n() != ch.n()) {
        throw std::invalid_argument("state and channel dimensions differ");
    }
    QubitSet m = checked_subset(ch.n(), measured);
    uint64_t count = assignment_count(pool, m.size());
    if (count == 0) {
        throw std::invalid_argument("exact twirl needs more than 10^6 assignments; use sampled mode");
    }
    Matrix acc = Matrix::Zero(rho0.data().rows(), rho0.data().cols());
    for (uint64_t k = 0; k < count; k++) {
        auto assignment = TwirlAssignment::from_index(pool, m, k);
        Matrix rho = rho0.data();
        assignment.conjugate(rho, ch.n());
        rho = apply_channel_raw(ch, rho);
        assignment.inverse().conjugate(rho, ch.n());
        acc += rho;
    }
    acc /= static_cast<double>(count);
    return adopt_density(std::move(acc));
}

PoolEquivalenceReport pool_equivalence_check(
    const QuantumChannel &ch, const QubitSet &measured, const DensityMatrix &rho0) {
    if (measured.size() > 2) {
        throw std::invalid_argument("pool equivalence check supports at most two measured qubits");
    }
    std::vector<CliffordPool> pools{build_pool(PoolKind::Full24), build_pool(PoolKind::Half12)};
    for (auto &p : all_minimal_pools()) {
        pools.push_back(std::move(p));
    }
    PoolEquivalenceReport report;
    for (const auto &pool : pools) {
        auto rho1 = twirl_exact(ch, measured, rho0, pool);
        report.pool_names.push_back(pool.name());
        report.probabilities.push_back(projection_probability(rho1, measured));
    }
    auto [lo, hi] = std::minmax_element(report.probabilities.begin(), report.probabilities.end());
    report.max_spread = *hi - *lo;
    report.consistent = report.max_spread <= kValidityTol;
    return report;
}

std::string serialize(const PoolEquivalenceReport &report) {
    std::string out;
    for (size_t k = 0; k < report.pool_names.size(); k++) {
        out += report.pool_names[k] + " = " + format_real(report.probabilities[k]) + "\n";
    }
    out += "max_spread = " + format_real(report.max_spread) + "\n";
    out += std::string("consistent = ") + (report.consistent ? "true" : "false") + "\n";
    return out;
}

}  // namespace pcorr
