// Copyright 2026 The CMM Authors
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
#ifndef CMM_QUANTUM_SEARCH_H
#define CMM_QUANTUM_SEARCH_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmm/quantum.h"

namespace cmm {

/// Two-qubit CHSH configuration: a pure state and four Bloch directions. A_i acts on the first
/// qubit, B_j on the second.
struct ChshWitness {
    std::vector<Complex> state;
    std::array<std::array<double, 3>, 2> a{};
    std::array<std::array<double, 3>, 2> b{};

    /// <psi| A1(B1 + B2) + A2(B1 - B2) |psi>.
    double value() const;
    /// Model with observables A1, A2, B1, B2 and the context "psi".
    QuantumModel model() const;
    std::string describe() const;
};

/// The singlet with the standard optimal directions.
ChshWitness singlet_chsh_witness();

struct ChshSearchResult {
    double value = 0;
    ChshWitness witness;
};

/// Random restarts followed by cyclic coordinate ascent with step halving. The returned value is
/// recomputed from the witness model through chsh_value.
ChshSearchResult chsh_maximize(std::size_t dim, std::uint64_t seed, std::size_t restarts = 8,
                               bool separable_only = false);

struct OeRreSearchResult {
    bool found = false;
    std::optional<Instrument> instrument_a;
    std::optional<Instrument> instrument_b;
    std::optional<DensityMatrix> context;
    double oe_margin = 0;
    double rre_residual = 0;
    std::size_t candidates = 0;

    /// Model holding instruments "A" and "B" and the context "witness". Requires found.
    QuantumModel model() const;
};

/// Qubit measure-and-prepare pair: A reads Z and prepares X eigenstates, B reads X and prepares
/// Z eigenstates. On |0> it shows an order effect and repeats both orders.
std::pair<Instrument, Instrument> canonical_oe_rre_pair();

/// Seeded search over instrument pairs for a context with an order effect and the
/// response-replicability identities. With lueders_only the candidates are Lüders instruments of
/// random Hermitian operators.
OeRreSearchResult search_oe_rre(std::size_t dim, std::uint64_t seed, std::size_t budget = 64,
                                bool lueders_only = false);

}  // namespace cmm

#endif
