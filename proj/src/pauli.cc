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

#include "pcorr/pauli.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace pcorr {

char letter_char(PauliLetter p) {
    return "IXYZ"[static_cast<int>(p)];
}

PauliLetter letter_from_char(char c) {
    switch (c) {
        case 'I':
            return PauliLetter::I;
        case 'X':
            return PauliLetter::X;
        case 'Y':
            return PauliLetter::Y;
        case 'Z':
            return PauliLetter::Z;
        default:
            throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
    }
}

Matrix2 letter_matrix(PauliLetter p) {
    const Complex i(0, 1);
    Matrix2 m;
    switch (p) {
        case PauliLetter::I:
            m << 1, 0, 0, 1;
            break;
        case PauliLetter::X:
            m << 0, 1, 1, 0;
            break;
        case PauliLetter::Y:
            m << 0, -i, i, 0;
            break;
        case PauliLetter::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

PauliString::PauliString(std::vector<PauliLetter> letters) : letters_(std::move(letters)) {
    if (letters_.size() > static_cast<size_t>(kMaxQubits)) {
        throw std::invalid_argument("Pauli string longer than " + std::to_string(kMaxQubits) + " qubits");
    }
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<PauliLetter> letters;
    for (char c : text) {
        letters.push_back(letter_from_char(c));
    }
    return PauliString(std::move(letters));
}

PauliString PauliString::identity(int n) {
    return PauliString(std::vector<PauliLetter>(n, PauliLetter::I));
}

PauliString PauliString::from_index(int n, uint64_t index) {
    std::vector<PauliLetter> letters(n);
    for (int k = n - 1; k >= 0; k--) {
        letters[k] = static_cast<PauliLetter>(index & 3);
        index >>= 2;
    }
    return PauliString(std::move(letters));
}

uint64_t PauliString::index() const {
    uint64_t out = 0;
    for (auto p : letters_) {
        out = (out << 2) | static_cast<uint64_t>(p);
    }
    return out;
}

std::string PauliString::str() const {
    std::string out;
    for (auto p : letters_) {
        out.push_back(letter_char(p));
    }
    return out;
}

QubitSet PauliString::support() const {
    QubitSet out;
    for (int k = 0; k < n(); k++) {
        if (letters_[k] != PauliLetter::I) {
            out.push_back(k + 1);
        }
    }
    return out;
}

UnitaryMatrix pauli_matrix(const PauliString &s) {
    std::vector<Matrix> factors;
    for (auto p : s.letters()) {
        factors.emplace_back(letter_matrix(p));
    }
    return UnitaryMatrix(tensor_all(factors));
}

int pauli_weight(const PauliString &s) {
    return static_cast<int>(std::count_if(s.letters().begin(), s.letters().end(), [](PauliLetter p) {
        return p != PauliLetter::I;
    }));
}

ChiDiagonal::ChiDiagonal(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != (uint64_t{1} << (2 * n))) {
        throw std::invalid_argument("chi diagonal needs 4^n values");
    }
    for (auto &v : values_) {
        if (v < 0) {
            if (v < -kExactTol) {
                throw NumericalInvariantError("chi diagonal entry " + std::to_string(v) + " is negative");
            }
            v = 0;
        }
    }
}

double ChiDiagonal::at(const PauliString &s) const {
    if (s.n() != n_) {
        throw std::invalid_argument("Pauli string length differs from chi register size");
    }
    return values_[s.index()];
}

double ChiDiagonal::total() const {
    double t = 0;
    for (double v : values_) {
        t += v;
    }
    return t;
}

bool ChiDiagonal::trace_preserving() const {
    return std::abs(total() - 1.0) <= kValidityTol;
}

uint64_t subset_mask(const QubitSet &subset) {
    uint64_t m = 0;
    for (int q : subset) {
        m |= uint64_t{1} << (q - 1);
    }
    return m;
}

QubitSet mask_subset(uint64_t mask) {
    QubitSet out;
    for (int q = 1; mask; q++, mask >>= 1) {
        if (mask & 1) {
            out.push_back(q);
        }
    }
    return out;
}

CollectiveCoefficients::CollectiveCoefficients(int n, std::vector<double> by_mask)
    : n_(n), by_mask_(std::move(by_mask)) {
    if (by_mask_.size() != (uint64_t{1} << n)) {
        throw std::invalid_argument("collective coefficients need 2^n slots");
    }
    by_mask_[0] = 0;
    for (auto &v : by_mask_) {
        if (v < 0) {
            if (v < -kExactTol) {
                throw NumericalInvariantError("collective coefficient " + std::to_string(v) + " is negative");
            }
            v = 0;
        }
    }
}

double CollectiveCoefficients::at(const QubitSet &subset) const {
    return by_mask_[subset_mask(checked_subset(n_, subset))];
}

double CollectiveCoefficients::superset_tail(const QubitSet &subset) const {
    uint64_t m = subset_mask(checked_subset(n_, subset));
    double t = 0;
    for (uint64_t k = 0; k < by_mask_.size(); k++) {
        if ((k & m) == m && k != m) {
            t += by_mask_[k];
        }
    }
    return t;
}

std::vector<std::pair<QubitSet, double>> CollectiveCoefficients::entries() const {
    std::vector<std::pair<QubitSet, double>> out;
    for (uint64_t k = 1; k < by_mask_.size(); k++) {
        out.emplace_back(mask_subset(k), by_mask_[k]);
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
        if (a.first.size() != b.first.size()) {
            return a.first.size() < b.first.size();
        }
        return a.first < b.first;
    });
    return out;
}

double CollectiveCoefficients::total() const {
    double t = 0;
    for (double v : by_mask_) {
        t += v;
    }
    return t;
}

ChiDiagonal chi_diagonal(const QuantumChannel &ch) {
    const int n = ch.n();
    const uint64_t dim = uint64_t{1} << n;
    const uint64_t count = dim * dim;
    const double norm = 1.0 / static_cast<double>(count);
    static const Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

    std::vector<double> values(count, 0.0);
    for (uint64_t s = 0; s < count; s++) {
        // P_s |k> = i^{#Y} (-1)^{|k & z|} |k ^ x>.
        uint64_t xmask = 0, zmask = 0;
        int ys = 0;
        for (int q = 1; q <= n; q++) {
            auto letter = static_cast<PauliLetter>((s >> (2 * (n - q))) & 3);
            uint64_t bit = uint64_t{1} << qubit_bit(n, q);
            if (letter == PauliLetter::X || letter == PauliLetter::Y) {
                xmask |= bit;
            }
            if (letter == PauliLetter::Z || letter == PauliLetter::Y) {
                zmask |= bit;
            }
            ys += letter == PauliLetter::Y;
        }
        const Complex global = kIPowers[ys & 3];
        double acc = 0;
        for (const auto &t : ch.terms()) {
            Complex tr = 0;
            for (uint64_t k = 0; k < dim; k++) {
                double sign = (std::popcount(k & zmask) & 1) ? -1.0 : 1.0;
                tr += sign * t.op(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ xmask));
            }
            acc += t.weight * std::norm(global * tr);
        }
        values[s] = acc * norm;
    }
    return ChiDiagonal(n, std::move(values));
}

CollectiveCoefficients collective_coefficients(const ChiDiagonal &chi) {
    const int n = chi.n();
    std::vector<double> by_mask(uint64_t{1} << n, 0.0);
    for (uint64_t s = 1; s < chi.values().size(); s++) {
        uint64_t m = 0;
        for (int q = 1; q <= n; q++) {
            if ((s >> (2 * (n - q))) & 3) {
                m |= uint64_t{1} << (q - 1);
            }
        }
        by_mask[m] += chi.values()[s];
    }
    return CollectiveCoefficients(n, std::move(by_mask));
}

double max_weight_coefficient(const ChiDiagonal &chi, int w) {
    if (w < 0 || w > chi.n()) {
        throw std::invalid_argument("weight cutoff outside [0,n]");
    }
    double best = 0;
    for (const auto &[subset, v] : collective_coefficients(chi).entries()) {
        if (static_cast<int>(subset.size()) > w) {
            best = std::max(best, v);
        }
    }
    return best;
}

double max_low_weight_coefficient(const ChiDiagonal &chi, int w) {
    double best = 0;
    for (const auto &[subset, v] : collective_coefficients(chi).entries()) {
        if (static_cast<int>(subset.size()) <= w) {
            best = std::max(best, v);
        }
    }
    return best;
}

std::string format_subset(const QubitSet &subset, char sep) {
    std::string out;
    for (size_t k = 0; k < subset.size(); k++) {
        if (k) {
            out.push_back(sep);
        }
        out += std::to_string(subset[k]);
    }
    return out;
}

QubitSet parse_subset(std::string_view text) {
    QubitSet out;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) {
            throw std::invalid_argument("malformed qubit subset '" + std::string(text) + "'");
        }
        char *end = nullptr;
        long v = std::strtol(token.c_str(), &end, 10);
        if (*end != '\0') {
            throw std::invalid_argument("malformed qubit index '" + token + "'");
        }
        out.push_back(static_cast<int>(v));
        token.clear();
    };
    for (char c : text) {
        if (c == ',' || c == '-') {
            flush();
        } else if (c != ' ') {
            token.push_back(c);
        }
    }
    flush();
    return out;
}

std::string format_real(double v) {
    // Rounding residue from exact cancellations is written as a clean zero.
    if (std::abs(v) < 1e-14) {
        return "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

namespace {

std::vector<std::pair<std::string, double>> parse_key_values(std::string_view text) {
    std::vector<std::pair<std::string, double>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw std::invalid_argument("expected 'key = value' but got '" + line + "'");
            }
            continue;
        }
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        char *end = nullptr;
        double v = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0') {
            throw std::invalid_argument("malformed value '" + value + "' for key '" + key + "'");
        }
        out.emplace_back(key, v);
    }
    return out;
}

}  // namespace

std::string serialize(const ChiDiagonal &chi) {
    std::string out;
    for (uint64_t s = 0; s < chi.values().size(); s++) {
        out += PauliString::from_index(chi.n(), s).str() + " = " + format_real(chi.values()[s]) + "\n";
    }
    return out;
}

std::string serialize(const CollectiveCoefficients &col) {
    std::string out;
    for (const auto &[subset, v] : col.entries()) {
        out += format_subset(subset) + " = " + format_real(v) + "\n";
    }
    return out;
}

ChiDiagonal parse_chi_diagonal(std::string_view text) {
    auto kv = parse_key_values(text);
    if (kv.empty()) {
        throw std::invalid_argument("empty chi diagonal");
    }
    int n = static_cast<int>(kv[0].first.size());
    std::vector<double> values(uint64_t{1} << (2 * n), 0.0);
    for (const auto &[key, v] : kv) {
        auto s = PauliString::parse(key);
        if (s.n() != n) {
            throw std::invalid_argument("inconsistent Pauli string length in '" + key + "'");
        }
        values[s.index()] = v;
    }
    return ChiDiagonal(n, std::move(values));
}

CollectiveCoefficients parse_collective(std::string_view text) {
    auto kv = parse_key_values(text);
    std::vector<std::pair<QubitSet, double>> parsed;
    int n = 0;
    for (const auto &[key, v] : kv) {
        auto subset = parse_subset(key);
        for (int q : subset) {
            n = std::max(n, q);
        }
        parsed.emplace_back(std::move(subset), v);
    }
    std::vector<double> by_mask(uint64_t{1} << n, 0.0);
    for (const auto &[subset, v] : parsed) {
        by_mask[subset_mask(checked_subset(n, subset))] = v;
    }
    return CollectiveCoefficients(n, std::move(by_mask));
}

}  // namespace pcorr
