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

#include "pcorr/state.h"

#include <algorithm>
#include <string>

namespace pcorr {

namespace {

void require(bool cond, const std::string &message) {
    if (!cond) {
        throw std::invalid_argument(message);
    }
}

int log2_exact(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        n++;
    }
    if ((Eigen::Index{1} << n) != dim) {
        return -1;
    }
    return n;
}

}  // namespace

int qubit_count_of(const Matrix &m) {
    require(m.rows() == m.cols(), "matrix is not square");
    int n = log2_exact(m.rows());
    require(n >= 0, "matrix dimension " + std::to_string(m.rows()) + " is not a power of two");
    require(n <= kMaxQubits, "register exceeds " + std::to_string(kMaxQubits) + " qubits");
    return n;
}

QubitSet checked_subset(int n, const QubitSet &subset) {
    require(!subset.empty(), "qubit subset is empty");
    QubitSet sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    for (size_t k = 0; k < sorted.size(); k++) {
        require(sorted[k] >= 1 && sorted[k] <= n,
                "qubit " + std::to_string(sorted[k]) + " out of range [1," + std::to_string(n) + "]");
        require(k == 0 || sorted[k] != sorted[k - 1], "duplicate qubit " + std::to_string(sorted[k]));
    }
    return sorted;
}

Matrix tensor(const Matrix &a, const Matrix &b) {
    int na = qubit_count_of(a);
    int nb = qubit_count_of(b);
    require(na + nb <= kMaxQubits, "tensor product exceeds " + std::to_string(kMaxQubits) + " qubits");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix tensor_all(std::span<const Matrix> factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto &f : factors) {
        out = tensor(out, f);
    }
    return out;
}

double unitarity_defect(const Matrix &u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

void conjugate_local(Matrix &rho, int n, int qubit, const Matrix2 &u) {
    const Eigen::Index dim = rho.rows();
    const Eigen::Index step = Eigen::Index{1} << qubit_bit(n, qubit);
    // Rows: rho <- U rho.
    for (Eigen::Index i = 0; i < dim; i++) {
        if (i & step) {
            continue;
        }
        for (Eigen::Index c = 0; c < dim; c++) {
            Complex a = rho(i, c);
            Complex b = rho(i | step, c);
            rho(i, c) = u(0, 0) * a + u(0, 1) * b;
            rho(i | step, c) = u(1, 0) * a + u(1, 1) * b;
        }
    }
    // Columns: rho <- rho U^dagger.
    for (Eigen::Index j = 0; j < dim; j++) {
        if (j & step) {
            continue;
        }
        for (Eigen::Index r = 0; r < dim; r++) {
            Complex a = rho(r, j);
            Complex b = rho(r, j | step);
            rho(r, j) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
            rho(r, j | step) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
        }
    }
}

DensityMatrix::DensityMatrix(Matrix data) : n_(qubit_count_of(data)), data_(std::move(data)) {
    require((data_ - data_.adjoint()).cwiseAbs().maxCoeff() <= kValidityTol, "density matrix is not Hermitian");
    require(std::abs(data_.trace() - Complex(1, 0)) <= kValidityTol, "density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(data_, Eigen::EigenvaluesOnly);
    require(eig.eigenvalues().minCoeff() >= -kValidityTol, "density matrix has a negative eigenvalue");
}

DensityMatrix::DensityMatrix(Matrix data, Unchecked) : n_(qubit_count_of(data)), data_(std::move(data)) {
}

DensityMatrix adopt_density(Matrix data) {
    return DensityMatrix(std::move(data), DensityMatrix::Unchecked{});
}

DensityMatrix DensityMatrix::pure_zero(int n) {
    return basis_state(n, 0);
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    require(n >= 0 && n <= kMaxQubits, "qubit count out of range");
    Eigen::Index dim = Eigen::Index{1} << n;
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim), Unchecked{});
}

DensityMatrix DensityMatrix::basis_state(int n, unsigned long index) {
    require(n >= 0 && n <= kMaxQubits, "qubit count out of range");
    Eigen::Index dim = Eigen::Index{1} << n;
    require(static_cast<Eigen::Index>(index) < dim, "basis index out of range");
    Matrix m = Matrix::Zero(dim, dim);
    m(index, index) = 1.0;
    return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
    Eigen::Index dim = static_cast<Eigen::Index>(probabilities.size());
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        m(i, i) = probabilities[i];
    }
    return DensityMatrix(std::move(m));
}

UnitaryMatrix::UnitaryMatrix(Matrix data) : n_(qubit_count_of(data)), data_(std::move(data)) {
    require(unitarity_defect(data_) <= kValidityTol, "matrix is not unitary");
}

UnitaryMatrix UnitaryMatrix::identity(int n) {
    Eigen::Index dim = Eigen::Index{1} << n;
    return UnitaryMatrix(Matrix::Identity(dim, dim));
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
    return UnitaryMatrix(data_.adjoint());
}

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix &rhs) const {
    require(n_ == rhs.n_, "unitary dimension mismatch");
    return UnitaryMatrix(data_ * rhs.data_);
}

QuantumChannel::QuantumChannel(int n, ChannelKind kind, std::vector<ChannelTerm> terms)
    : n_(n), kind_(kind), terms_(std::move(terms)) {
    require(n >= 0 && n <= kMaxQubits, "qubit count out of range");
    require(!terms_.empty(), "channel has no terms");
    Eigen::Index dim = Eigen::Index{1} << n;
    for (const auto &t : terms_) {
        require(t.op.rows() == dim && t.op.cols() == dim, "channel operator dimension mismatch");
        require(t.weight >= 0, "channel weight is negative");
    }
    if (kind_ == ChannelKind::UnitaryEnsemble) {
        double total = 0;
        for (const auto &t : terms_) {
            require(unitarity_defect(t.op) <= kValidityTol, "ensemble operator is not unitary");
            total += t.weight;
        }
        require(std::abs(total - 1.0) <= kValidityTol, "ensemble weights do not sum to 1");
    } else {
        Matrix sum = Matrix::Zero(dim, dim);
        for (const auto &t : terms_) {
            require(t.weight == 1.0, "Kraus operators carry unit weight");
            sum += t.op.adjoint() * t.op;
        }
        require((sum - Matrix::Identity(dim, dim)).norm() <= kValidityTol, "Kraus operators are not trace preserving");
    }
}

QuantumChannel QuantumChannel::identity(int n) {
    return from_unitary(UnitaryMatrix::identity(n));
}

QuantumChannel QuantumChannel::from_unitary(const UnitaryMatrix &u) {
    return QuantumChannel(u.n(), ChannelKind::UnitaryEnsemble, {{1.0, u.data()}});
}

QuantumChannel QuantumChannel::mixture(std::span<const double> weights, std::span<const UnitaryMatrix> unitaries) {
    require(weights.size() == unitaries.size() && !weights.empty(), "mixture weights and unitaries differ in length");
    std::vector<ChannelTerm> terms;
    for (size_t k = 0; k < weights.size(); k++) {
        terms.push_back({weights[k], unitaries[k].data()});
    }
    return QuantumChannel(unitaries[0].n(), ChannelKind::UnitaryEnsemble, std::move(terms));
}

QuantumChannel QuantumChannel::kraus(std::vector<Matrix> ops) {
    require(!ops.empty(), "no Kraus operators");
    int n = qubit_count_of(ops[0]);
    std::vector<ChannelTerm> terms;
    for (auto &op : ops) {
        terms.push_back({1.0, std::move(op)});
    }
    return QuantumChannel(n, ChannelKind::Kraus, std::move(terms));
}

QuantumChannel convex_combination(double p, const QuantumChannel &a, const QuantumChannel &b) {
    require(a.n() == b.n(), "channel dimension mismatch");
    require(p >= 0 && p <= 1, "mixing probability outside [0,1]");
    // Both sides are expressed as weighted Kraus-like terms; a unitary ensemble
    // stays a unitary ensemble only when both inputs are.
    std::vector<ChannelTerm> terms;
    bool ensemble = a.kind() == ChannelKind::UnitaryEnsemble && b.kind() == ChannelKind::UnitaryEnsemble;
    auto add = [&](const QuantumChannel &ch, double w) {
        for (const auto &t : ch.terms()) {
            if (ensemble) {
                terms.push_back({w * t.weight, t.op});
            } else {
                terms.push_back({1.0, std::sqrt(w * t.weight) * t.op});
            }
        }
    };
    add(a, p);
    add(b, 1 - p);
    return QuantumChannel(a.n(), ensemble ? ChannelKind::UnitaryEnsemble : ChannelKind::Kraus, std::move(terms));
}

Matrix apply_channel_raw(const QuantumChannel &ch, const Matrix &rho) {
    require(rho.rows() == (Eigen::Index{1} << ch.n()), "state and channel dimensions differ");
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto &t : ch.terms()) {
        if (t.weight == 0) {
            continue;
        }
        out.noalias() += t.weight * (t.op * rho * t.op.adjoint());
    }
    return out;
}

DensityMatrix apply_channel(const QuantumChannel &ch, const DensityMatrix &rho) {
    require(rho.n() == ch.n(), "state and channel dimensions differ");
    return adopt_density(apply_channel_raw(ch, rho.data()));
}

Matrix partial_trace_raw(const Matrix &rho, int n, const QubitSet &keep) {
    QubitSet kept = checked_subset(n, keep);
    const int m = static_cast<int>(kept.size());
    const Eigen::Index dim_out = Eigen::Index{1} << m;
    const Eigen::Index dim_in = Eigen::Index{1} << n;

    // Scatter map: output index bit (m-1-k) comes from kept[k].
    std::vector<Eigen::Index> kept_masks(m);
    Eigen::Index kept_mask = 0;
    for (int k = 0; k < m; k++) {
        kept_masks[k] = Eigen::Index{1} << qubit_bit(n, kept[k]);
        kept_mask |= kept_masks[k];
    }
    auto compress = [&](Eigen::Index full) {
        Eigen::Index out = 0;
        for (int k = 0; k < m; k++) {
            if (full & kept_masks[k]) {
                out |= Eigen::Index{1} << (m - 1 - k);
            }
        }
        return out;
    };

    Matrix out = Matrix::Zero(dim_out, dim_out);
    for (Eigen::Index i = 0; i < dim_in; i++) {
        for (Eigen::Index j = 0; j < dim_in; j++) {
            if ((i & ~kept_mask) != (j & ~kept_mask)) {
                continue;
            }
            out(compress(i), compress(j)) += rho(i, j);
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, const QubitSet &keep) {
    return adopt_density(partial_trace_raw(rho.data(), rho.n(), keep));
}

double purity(const DensityMatrix &rho) {
    // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
    return rho.data().squaredNorm();
}

double projection_probability_raw(const Matrix &rho, int n, const QubitSet &subset) {
    QubitSet s = checked_subset(n, subset);
    Eigen::Index mask = 0;
    for (int q : s) {
        mask |= Eigen::Index{1} << qubit_bit(n, q);
    }
    double p = 0;
    for (Eigen::Index i = 0; i < rho.rows(); i++) {
        if ((i & mask) == 0) {
            p += rho(i, i).real();
        }
    }
    if (p < -kValidityTol || p > 1 + kValidityTol) {
        throw NumericalInvariantError("projection probability " + std::to_string(p) + " outside [0,1]");
    }
    return std::clamp(p, 0.0, 1.0);
}

double projection_probability(const DensityMatrix &rho, const QubitSet &subset) {
    return projection_probability_raw(rho.data(), rho.n(), subset);
}

}  // namespace pcorr
