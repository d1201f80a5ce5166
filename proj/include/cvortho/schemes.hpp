// Copyright 2026 The cvortho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Operator constructions built on fock-core: the mean-value orthogonalizer
// C - <C>, the identity-admixed qubit generator, the repeated-orthogonalizer
// family, the two-operator generalization, and the two heralded
// beam-splitter schemes that realize them physically.

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cvortho/fock.hpp"

namespace cvortho {

enum class OperatorKind { Creation, Number, Custom };

/// Operator C together with its mean value on the input state.
class OrthogonalizerSpec {
 public:
  static OrthogonalizerSpec creation(cplx mean);
  /// Throws DomainError for |Im nbar| >= 1e-12.
  static OrthogonalizerSpec number(cplx nbar);
  static OrthogonalizerSpec custom(ModeOperator c, cplx mean);

  /// Spec whose mean value is measured on psi.
  static OrthogonalizerSpec measured(OperatorKind kind, const StateVector& psi);
  static OrthogonalizerSpec measured(ModeOperator c, const StateVector& psi);

  OperatorKind kind() const noexcept { return kind_; }
  cplx mean_value() const noexcept { return mean_; }

  /// The bare operator C at the given truncation.
  ModeOperator base_operator(const Truncation& trunc) const;

 private:
  OrthogonalizerSpec(OperatorKind kind, cplx mean,
                     std::optional<ModeOperator> custom)
      : kind_(kind), mean_(mean), custom_(std::move(custom)) {}

  OperatorKind kind_;
  cplx mean_;
  std::optional<ModeOperator> custom_;
};

/// C - <C> 1.
ModeOperator build_orthogonalizer(const OrthogonalizerSpec& spec,
                                  const Truncation& trunc);

/// Normalized (C - <C>)|psi>.
///
/// Throws PreconditionError when the spec's mean differs from <psi|C|psi> by
/// more than 1e-8, EigenstateError when the unnormalized output has norm
/// below 1e-12, and TruncationError when the output leaks past the top level.
StateVector orthogonalize(const StateVector& psi,
                          const OrthogonalizerSpec& spec);

/// Normalized O^m|psi> for m = 1..k with O = a^dag - <a^dag>. Requires a
/// Creation spec.
std::vector<StateVector> orthogonal_family(const StateVector& psi,
                                           const OrthogonalizerSpec& spec,
                                           int k);

/// C + (c - <C>) 1.
ModeOperator qubit_operator(const OrthogonalizerSpec& spec, cplx c,
                            const Truncation& trunc);

/// Normalized qubit_operator(spec, c)|psi>, tail-checked.
StateVector make_qubit(const StateVector& psi, const OrthogonalizerSpec& spec,
                       cplx c);

/// Weights of a CV qubit A|psi> + B|psi_perp>.
struct QubitSpec {
  cplx c;
  cplx A;
  cplx B;
};

/// Closed-form weights for the Creation spec on a coherent input, where the
/// generator output is D(alpha)(c|0> + |1>) / sqrt(1 + |c|^2), i.e.
/// A = c / sqrt(1 + |c|^2) and B = 1 / sqrt(1 + |c|^2).
QubitSpec coherent_qubit_spec(cplx c);

struct QubitDecomposition {
  cplx A;
  cplx B;
  /// Norm of the part of the state outside span{psi, psi_perp}.
  double residual;
};

/// Projects a normalized state on {psi, psi_perp}.
QubitDecomposition decompose_qubit(const StateVector& state,
                                   const StateVector& psi,
                                   const StateVector& psi_perp);

/// Parameters of a heralded beam-splitter scheme. t = cos(theta) and
/// r = sin(theta), so t^2 + r^2 = 1 by construction.
struct HeraldModel {
  cplx beta{0.0, 0.0};
  double theta = 0.0;
  double phi = 0.0;
  Truncation herald_trunc{12};

  double t() const { return std::cos(theta); }
  double r() const { return std::sin(theta); }
};

/// max(min(signal_dim, 12), smallest dim holding |beta> within tail_tol).
Truncation default_herald_truncation(int signal_dim, double beta_abs,
                                     double tail_tol = kDefaultTailTol);

struct HeraldedOutput {
  StateVector out;
  /// Squared norm of the herald contraction of the unit-gain first-order
  /// joint state (a relative success probability).
  double success_prob;
};

/// Photon addition superposed with the identity.
///
/// Joint state over modes (idler, ancilla, signal):
///   |0>|beta e^{i phi}>|psi> + |1>|beta e^{i phi}> a^dag|psi>.
/// The beam splitter mixes idler and ancilla and the herald is |1>|0>. The
/// conditional operator is e^{-|beta|^2/2} (t a^dag - r beta e^{i phi}), with
/// no further phase.
HeraldedOutput heralded_addition_model(const StateVector& psi,
                                       const HeraldModel& model);

/// Conditional operator of heralded_addition_model, column n obtained by
/// pushing |n> through the same joint-state pipeline (unnormalized).
ModeOperator heralded_addition_operator(const HeraldModel& model,
                                        const Truncation& signal);

/// Ancilla amplitude that turns the addition scheme into the orthogonalizer
/// of a coherent input: r beta e^{i phi} / t = conj(alpha). Requires r != 0.
cplx orthogonalizing_beta(cplx alpha, double theta, double phi = 0.0);

/// Ordered addition/subtraction pairs with which-order erasure.
///
/// Joint state over modes (herald 1, herald 2, signal):
///   e^{i phi} |1,0> a^dag a|psi> + |0,1> a a^dag|psi>,
/// beam splitter on the two heralds, herald |1>|0>. The conditional operator
/// is t e^{i phi} a^dag a - r a a^dag; at phi = 0 it is proportional to
/// n - r/(t-r).
///
/// Throws SingularConfigurationError for |t - r| < 1e-12.
HeraldedOutput number_scheme_model(const StateVector& psi,
                                   const HeraldModel& model);

ModeOperator number_scheme_operator(const HeraldModel& model,
                                    const Truncation& signal);

/// Beam-splitter angle with r/(t-r) = nbar, i.e. tan(theta) = nbar/(1+nbar).
double number_scheme_angle(double nbar);

/// C1 - (<C1>/<C2>) C2 on psi. Throws DegenerateDenominatorError when
/// |<C2>| <= 1e-12.
ModeOperator two_operator_orthogonalizer(const ModeOperator& c1,
                                         const ModeOperator& c2,
                                         const StateVector& psi);

}  // namespace cvortho
