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

#include "pcorr/nmr.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pcorr {

double NmrHamiltonian::coupling(int j, int k) const {
    auto it = couplings_hz.find({std::min(j, k), std::max(j, k)});
    return it == couplings_hz.end() ? 0.0 : it->second;
}

void NmrHamiltonian::set_coupling(int j, int k, double hz) {
    if (j == k) {
        throw std::invalid_argument("a coupling needs two distinct qubits");
    }
    couplings_hz[{std::min(j, k), std::max(j, k)}] = hz;
}

double NmrHamiltonian::max_abs_coupling() const {
    double best = 0;
    for (const auto &[pair, hz] : couplings_hz) {
        best = std::max(best, std::abs(hz));
    }
    return best;
}

NmrHamiltonian crotonic_hamiltonian() {
    NmrHamiltonian h;
    h.n = 4;
    h.shifts_hz = {6650.6, 1695.8, 4210.0, -8796.7};
    h.set_coupling(1, 2, 72.6);
    h.set_coupling(2, 3, 69.8);
    h.set_coupling(1, 4, 7.1);
    h.set_coupling(2, 4, 1.6);
    h.set_coupling(1, 3, 1.3);
    h.set_coupling(3, 4, 41.6);
    return h;
}

namespace {

std::vector<std::string> split_words(const std::string &line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

double parse_number(const std::string &s, int line_no) {
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || !std::isfinite(v)) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

int parse_qubit(const std::string &s, int line_no) {
    double v = parse_number(s, line_no);
    if (v != std::floor(v) || v < 1 || v > kMaxQubits) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad qubit index '" + s + "'");
    }
    return static_cast<int>(v);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn fn) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        auto words = split_words(line);
        if (!words.empty()) {
            fn(words, line_no);
        }
    }
}

PulseAxis parse_axis(const std::string &s, int line_no) {
    if (s == "+x" || s == "x") {
        return PulseAxis::PlusX;
    }
    if (s == "-x") {
        return PulseAxis::MinusX;
    }
    if (s == "+y" || s == "y") {
        return PulseAxis::PlusY;
    }
    if (s == "-y") {
        return PulseAxis::MinusY;
    }
    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad pulse axis '" + s + "'");
}

}  // namespace

NmrHamiltonian parse_hamiltonian(std::string_view text) {
    std::map<int, double> shifts;
    NmrHamiltonian h;
    int n = 0;
    for_each_line(text, [&](const std::vector<std::string> &w, int line_no) {
        if (w[0] == "shift" && w.size() == 3) {
            int j = parse_qubit(w[1], line_no);
            shifts[j] = parse_number(w[2], line_no);
            n = std::max(n, j);
        } else if (w[0] == "coupling" && w.size() == 4) {
            int j = parse_qubit(w[1], line_no);
            int k = parse_qubit(w[2], line_no);
            if (j == k) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": self coupling");
            }
            h.set_coupling(j, k, parse_number(w[3], line_no));
            n = std::max({n, j, k});
        } else {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'shift j hz' or 'coupling j k hz'");
        }
    });
    if (n == 0) {
        throw std::invalid_argument("Hamiltonian file defines no qubits");
    }
    h.n = n;
    h.shifts_hz.assign(n, 0.0);
    for (const auto &[j, hz] : shifts) {
        h.shifts_hz[j - 1] = hz;
    }
    return h;
}

PulseSequence::PulseSequence(std::vector<SequenceEvent> events) : events_(std::move(events)) {
    for (const auto &e : events_) {
        if (auto d = std::get_if<Delay>(&e)) {
            if (!(d->seconds > 0)) {
                throw std::invalid_argument("delays must be positive");
            }
        } else {
            const auto &p = std::get<Pulse>(e);
            if (p.qubits.empty()) {
                throw std::invalid_argument("pulse addresses no qubits");
            }
        }
    }
}

double PulseSequence::total_duration() const {
    double t = 0;
    for (const auto &e : events_) {
        if (auto d = std::get_if<Delay>(&e)) {
            t += d->seconds;
        }
    }
    return t;
}

PulseSequence parse_sequence(std::string_view text) {
    std::vector<SequenceEvent> events;
    for_each_line(text, [&](const std::vector<std::string> &w, int line_no) {
        if (w[0] == "delay" && w.size() == 2) {
            events.emplace_back(Delay{parse_number(w[1], line_no)});
        } else if (w[0] == "pulse" && w.size() == 4) {
            QubitSet qubits;
            std::istringstream list(w[1]);
            std::string item;
            while (std::getline(list, item, ',')) {
                qubits.push_back(parse_qubit(item, line_no));
            }
            events.emplace_back(Pulse{qubits, parse_axis(w[2], line_no), parse_number(w[3], line_no)});
        } else {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'delay s' or 'pulse qubits axis angle'");
        }
    });
    return PulseSequence(std::move(events));
}

PulseSequence ie_sequence(double tau, double angle_error) {
    const double angle = std::numbers::pi + angle_error;
    const std::vector<QubitSet> targets{{3, 4}, {2}, {3, 4}, {1, 4}};
    std::vector<SequenceEvent> events;
    for (auto axis : {PulseAxis::PlusX, PulseAxis::MinusX}) {
        for (const auto &t : targets) {
            events.emplace_back(Delay{tau});
            events.emplace_back(Pulse{t, axis, angle});
        }
    }
    return PulseSequence(std::move(events));
}

Matrix hamiltonian_matrix(const NmrHamiltonian &h) {
    if (h.n < 1 || h.n > kMaxQubits || static_cast<int>(h.shifts_hz.size()) != h.n) {
        throw std::invalid_argument("Hamiltonian qubit count and shift list disagree");
    }
    const Eigen::Index dim = Eigen::Index{1} << h.n;
    Matrix out = Matrix::Zero(dim, dim);
    auto z = [&](Eigen::Index i, int q) {
        return (i >> qubit_bit(h.n, q)) & 1 ? -1.0 : 1.0;
    };
    for (Eigen::Index i = 0; i < dim; i++) {
        double e = 0;
        for (int j = 1; j <= h.n; j++) {
            e += std::numbers::pi * h.shifts_hz[j - 1] * z(i, j);
        }
        for (const auto &[pair, hz] : h.couplings_hz) {
            if (pair.second > h.n) {
                throw std::invalid_argument("coupling refers to a qubit beyond the register");
            }
            e += std::numbers::pi * hz / 2 * z(i, pair.first) * z(i, pair.second);
        }
        out(i, i) = e;
    }
    return out;
}

UnitaryMatrix free_evolution(const NmrHamiltonian &h, double tau) {
    if (tau < 0) {
        throw std::invalid_argument("evolution time must be nonnegative");
    }
    Matrix hm = hamiltonian_matrix(h);
    Matrix u = Matrix::Zero(hm.rows(), hm.cols());
    for (Eigen::Index i = 0; i < hm.rows(); i++) {
        u(i, i) = std::polar(1.0, -hm(i, i).real() * tau);
    }
    return UnitaryMatrix(std::move(u));
}

UnitaryMatrix pulse_unitary(int n, const Pulse &pulse) {
    const Complex i(0, 1);
    Matrix2 sigma;
    switch (pulse.axis) {
        case PulseAxis::PlusX:
            sigma << 0, 1, 1, 0;
            break;
        case PulseAxis::MinusX:
            sigma << 0, -1, -1, 0;
            break;
        case PulseAxis::PlusY:
            sigma << 0, -i, i, 0;
            break;
        case PulseAxis::MinusY:
            sigma << 0, i, -i, 0;
            break;
    }
    Matrix2 r = std::cos(pulse.angle / 2) * Matrix2::Identity() - i * std::sin(pulse.angle / 2) * sigma;
    QubitSet qubits = checked_subset(n, pulse.qubits);
    std::vector<Matrix> factors;
    for (int q = 1; q <= n; q++) {
        bool hit = std::binary_search(qubits.begin(), qubits.end(), q);
        factors.emplace_back(hit ? Matrix(r) : Matrix(Matrix2::Identity()));
    }
    return UnitaryMatrix(tensor_all(factors));
}

Matrix remove_global_phase(const Matrix &u) {
    for (Eigen::Index i = 0; i < u.rows(); i++) {
        if (std::abs(u(i, i)) > kExactTol) {
            return u * (std::abs(u(i, i)) / u(i, i));
        }
    }
    return u;
}

UnitaryMatrix compile_sequence(const PulseSequence &seq, const NmrHamiltonian &h) {
    const Eigen::Index dim = Eigen::Index{1} << h.n;
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto &e : seq.events()) {
        if (auto d = std::get_if<Delay>(&e)) {
            u = free_evolution(h, d->seconds).data() * u;
        } else {
            u = pulse_unitary(h.n, std::get<Pulse>(e)).data() * u;
        }
    }
    return UnitaryMatrix(remove_global_phase(u));
}

UnitaryMatrix gate_c12(double beta, int n, int a, int b) {
    QubitSet pair = checked_subset(n, {a, b});
    if (pair.size() != 2) {
        throw std::invalid_argument("C12 needs two distinct qubits");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix u = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        int za = (i >> qubit_bit(n, a)) & 1;
        int zb = (i >> qubit_bit(n, b)) & 1;
        double zz = (za ^ zb) ? -1.0 : 1.0;
        u(i, i) = std::polar(1.0, -beta * zz);
    }
    return UnitaryMatrix(std::move(u));
}

UnitaryMatrix gate_cnot(int control, int target, int n) {
    if (control == target) {
        throw std::invalid_argument("CNOT control and target must differ");
    }
    checked_subset(n, {control, target});
    const Eigen::Index dim = Eigen::Index{1} << n;
    const Eigen::Index cbit = Eigen::Index{1} << qubit_bit(n, control);
    const Eigen::Index tbit = Eigen::Index{1} << qubit_bit(n, target);
    Matrix u = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        u((i & cbit) ? (i ^ tbit) : i, i) = 1.0;
    }
    return UnitaryMatrix(std::move(u));
}

}  // namespace pcorr
