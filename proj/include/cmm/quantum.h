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
#ifndef CMM_QUANTUM_H
#define CMM_QUANTUM_H

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmm/contextual_model.h"
#include "cmm/diagnostics.h"
#include "cmm/errors.h"
#include "cmm/linalg.h"
#include "cmm/rng.h"

namespace cmm {

namespace pauli {
CMatrix x();
CMatrix y();
CMatrix z();
/// n(0) X + n(1) Y + n(2) Z for a unit vector n.
CMatrix along(double nx, double ny, double nz);
}  // namespace pauli

/// Computational basis vector |k> of dimension dim.
std::vector<Complex> basis_vector(std::size_t dim, std::size_t k);

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
   public:
    explicit DensityMatrix(CMatrix m, const Tolerances &tol = {});
    static DensityMatrix pure(std::span<const Complex> psi);
    static DensityMatrix maximally_mixed(std::size_t dim);
    /// Skips validation; for states produced by exact-by-construction updates.
    static DensityMatrix trusted(CMatrix m);

    static std::vector<InvariantCheck> check(const CMatrix &m, const Tolerances &tol = {});

    std::size_t dim() const {
        return matrix_.rows();
    }
    const CMatrix &matrix() const {
        return matrix_;
    }
    /// Tr(E rho), real part.
    double expectation(const CMatrix &op) const;

   private:
    DensityMatrix() = default;
    CMatrix matrix_;
};

/// Haar-random unit vector.
std::vector<Complex> random_pure_state(std::size_t dim, CounterRng &rng);
/// Ginibre-induced random mixed state G G^dagger / Tr.
DensityMatrix random_density_matrix(std::size_t dim, CounterRng &rng);
/// Haar-random unitary (QR of a Ginibre matrix by Gram-Schmidt).
CMatrix random_unitary(std::size_t dim, CounterRng &rng);
/// Random Hermitian matrix with standard-normal entries.
CMatrix random_hermitian(std::size_t dim, CounterRng &rng);

/// Self-adjoint operator with its clustered spectral decomposition. Outcomes are the distinct
/// eigenvalues in descending order.
class HermitianObservable {
   public:
    HermitianObservable(std::string name, const CMatrix &matrix, const Tolerances &tol = {},
                        std::vector<std::string> labels = {});

    const std::string &name() const {
        return name_;
    }
    const CMatrix &matrix() const {
        return matrix_;
    }
    const SpectralDecomposition &spectral() const {
        return spectral_;
    }
    const std::vector<Outcome> &outcomes() const {
        return outcomes_;
    }
    const CMatrix &projector(std::size_t x) const;
    /// Index of the eigenvalue cluster containing value. Throws LookupError.
    std::size_t outcome_index(double value) const;

   private:
    std::string name_;
    CMatrix matrix_;
    SpectralDecomposition spectral_;
    std::vector<Outcome> outcomes_;
    double cluster_gap_;
};

/// Tr(E_A(x) rho), clamped to [0, 1].
double born_prob(const DensityMatrix &rho, const HermitianObservable &a, std::size_t x);

/// E(x) rho E(x) / Tr(E(x) rho). Throws ConditioningError below eps_cond.
DensityMatrix luders_update(const DensityMatrix &rho, const HermitianObservable &a, std::size_t x,
                            const Tolerances &tol = {});

/// f(A) = sum f(x) E_A(x).
HermitianObservable function_of_observable(const HermitianObservable &a, const std::function<double(double)> &f,
                                           std::string name = {});

/// Positive operators indexed by outcome, summing to the identity.
class Povm {
   public:
    Povm(std::vector<CMatrix> effects, std::vector<Outcome> outcomes, const Tolerances &tol = {});

    static std::vector<InvariantCheck> check(const std::vector<CMatrix> &effects, const Tolerances &tol = {});

    std::size_t dim() const {
        return effects_.front().rows();
    }
    const std::vector<CMatrix> &effects() const {
        return effects_;
    }
    const std::vector<Outcome> &outcomes() const {
        return outcomes_;
    }
    /// A(Delta) = sum of A(x) over x in subset.
    CMatrix effect(std::span<const std::size_t> subset) const;
    Distribution probabilities(const DensityMatrix &rho) const;

   private:
    std::vector<CMatrix> effects_;
    std::vector<Outcome> outcomes_;
};

Povm pvm_of(const HermitianObservable &a);

enum class InstrumentKind { projection, atomic, measure_and_prepare, general };

std::string_view to_string(InstrumentKind kind);
InstrumentKind instrument_kind_from_string(std::string_view s);

/// Outcome-indexed superoperators, stored as dim^2 x dim^2 matrices acting on column-stacked operators.
class Instrument {
   public:
    static Instrument projection(std::vector<CMatrix> projectors, std::vector<Outcome> outcomes,
                                 const Tolerances &tol = {});
    /// One Kraus operator V(x) per outcome, rho -> V(x) rho V(x)^dagger.
    static Instrument atomic(std::vector<CMatrix> kraus, std::vector<Outcome> outcomes, const Tolerances &tol = {});
    /// rho -> Tr(A(x) rho) phi_x.
    static Instrument measure_and_prepare(std::vector<CMatrix> effects, std::vector<CMatrix> prepared,
                                          std::vector<Outcome> outcomes, const Tolerances &tol = {});
    static Instrument general(std::vector<CMatrix> superoperators, std::vector<Outcome> outcomes,
                              const Tolerances &tol = {});

    /// Invariants for the instrument's kind, computed without throwing.
    std::vector<InvariantCheck> check(const Tolerances &tol = {}) const;

    InstrumentKind kind() const {
        return kind_;
    }
    std::size_t dim() const {
        return dim_;
    }
    const std::vector<Outcome> &outcomes() const {
        return outcomes_;
    }
    const CMatrix &superoperator(std::size_t x) const;
    /// Projectors (projection kind) or Kraus operators (atomic kind); empty otherwise.
    const std::vector<CMatrix> &operators() const {
        return operators_;
    }
    /// Effects and prepared states of the measure-and-prepare kind.
    const std::vector<CMatrix> &prepared_states() const {
        return prepared_;
    }
    const std::vector<CMatrix> &stored_effects() const {
        return stored_effects_;
    }

    /// I(x) rho, not normalized.
    CMatrix apply(std::size_t x, const CMatrix &rho) const;
    /// I*(x) applied to an operator (adjoint for the trace inner product).
    CMatrix apply_adjoint(std::size_t x, const CMatrix &op) const;

   private:
    Instrument() = default;
    InstrumentKind kind_ = InstrumentKind::general;
    std::size_t dim_ = 0;
    std::vector<Outcome> outcomes_;
    std::vector<CMatrix> superops_;
    std::vector<CMatrix> operators_;
    std::vector<CMatrix> stored_effects_;
    std::vector<CMatrix> prepared_;
};

/// Superoperator of rho -> V rho V^dagger.
CMatrix kraus_superoperator(const CMatrix &v);
/// Choi matrix sum_ij |i><j| (x) S(|i><j|).
CMatrix choi_matrix(const CMatrix &superoperator, std::size_t dim);

struct InstrumentApplication {
    CMatrix subnormalized;
    double prob = 0;
    std::optional<DensityMatrix> updated;
};

InstrumentApplication instrument_apply(const Instrument &inst, std::size_t x, const DensityMatrix &rho,
                                       const Tolerances &tol = {});

/// Projection instrument E(x) rho E(x) built from the observable's spectral family.
Instrument luders_instrument(const HermitianObservable &a, const Tolerances &tol = {});

/// Effects A(x) = I*(x) identity. Throws InvariantError if they do not form a POVM.
Povm povm_from_instrument(const Instrument &inst, const Tolerances &tol = {});

/// Per-outcome complete positivity via the Choi matrix.
std::vector<bool> cp_check(const Instrument &inst, const Tolerances &tol = {});

struct PovmCompatibility {
    bool compatible = false;
    double residual = 0;
    std::string reason;
};

/// Checks that table (row-major over X_A x X_B) is a joint POVM with marginals A and B.
PovmCompatibility povm_compat_verify(const Povm &a, const Povm &b, const std::vector<CMatrix> &table,
                                     const Tolerances &tol = {});
/// P(x, y) = Tr C(x, y) rho.
JointDistribution joint_born(const std::vector<CMatrix> &table, std::size_t na, std::size_t nb,
                             const DensityMatrix &rho);

struct QuantumInterference {
    /// Cross-term sum over alpha != alpha' of Tr(E_A(alpha) E_B(y) E_A(alpha') rho).
    double delta_cross_terms = 0;
    /// Generic total-probability route, including lambda and theta.
    InterferenceDatum datum;
    /// 2 cos(theta) sqrt(...) when theta is available.
    std::optional<double> delta_from_theta;
    bool pure = false;
};

QuantumInterference quantum_interference(const DensityMatrix &rho, const HermitianObservable &a,
                                         const HermitianObservable &b, std::size_t y, const Tolerances &tol = {});

class QuantumContext final : public ContextState {
   public:
    explicit QuantumContext(DensityMatrix rho) : rho_(std::move(rho)) {
    }
    const DensityMatrix &rho() const {
        return rho_;
    }
    std::string describe() const override;

   private:
    DensityMatrix rho_;
};

const DensityMatrix &density_of(const Context &context);
Context make_quantum_context(DensityMatrix rho);

/// Density-matrix contextual model. With only Hermitian observables it is the von Neumann model
/// (each observable carries its Lüders instrument); adding general instruments gives the instrument model.
class QuantumModel final : public ContextualModel {
   public:
    explicit QuantumModel(std::size_t dim, Tolerances tolerances = {});

    /// Registers the observable and its Lüders instrument under the same name.
    void add_observable(HermitianObservable a);
    /// Registers an instrument and the POVM it induces, both under name.
    void add_instrument(const std::string &name, Instrument inst);
    /// Registers an instrument that measures an already registered observable; its induced POVM must match.
    void add_instrument_for(const std::string &name, const std::string &observable, Instrument inst);
    void add_context(const std::string &name, DensityMatrix rho);

    std::string_view backend() const override;
    std::vector<std::string> observables() const override;
    std::vector<std::string> instruments() const override;
    const std::vector<Outcome> &outcomes(std::string_view observable) const override;
    const std::string &observable_of(std::string_view instrument) const override;
    Distribution distribution(const Context &context, std::string_view observable) const override;
    std::optional<Context> update(const Context &context, std::string_view instrument,
                                  std::size_t outcome) const override;
    std::vector<NamedContext> named_contexts() const override;
    /// Named contexts, 20 Haar-random pure states and the maximally mixed state.
    std::vector<Context> default_context_sample(std::uint64_t seed) const override;
    /// Two-qubit CHSH search over the projective model class.
    std::optional<ChshClassMaximum> chsh_class_maximum(std::uint64_t seed) const override;

    std::size_t dim() const {
        return dim_;
    }
    const Povm &povm(std::string_view observable) const;
    const Instrument &instrument(std::string_view name) const;
    /// Null when the observable was not given as a Hermitian operator.
    const HermitianObservable *hermitian(std::string_view observable) const;
    bool all_projective() const;

   private:
    struct ObservableEntry {
        Povm povm;
        std::optional<HermitianObservable> hermitian;
    };
    struct InstrumentEntry {
        Instrument inst;
        std::string observable;
    };
    std::size_t dim_;
    std::map<std::string, ObservableEntry, std::less<>> observables_;
    std::map<std::string, InstrumentEntry, std::less<>> instruments_;
    std::vector<std::pair<std::string, DensityMatrix>> contexts_;
};

}  // namespace cmm

#endif
