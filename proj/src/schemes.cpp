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

#include "cvortho/schemes.hpp"

#include <cmath>
#include <string>

namespace cvortho {
namespace {

constexpr double kMeanTol = 1e-8;
constexpr double kDenominatorTol = 1e-12;

void require_herald_dim(const HeraldModel& model, int min_dim) {
  if (model.herald_trunc.dim() < min_dim) {
    throw DomainError("herald truncation must be >= " +
                      std::to_string(min_dim));
  }
}

KetVector<double> addition_contraction(const StateVector& psi,
                                       const HeraldModel& model) {
  require_herald_dim(model, 2);
  const Truncation& ht = model.herald_trunc;
  const auto ancilla =
      coherent_state(model.beta * std::polar(1.0, model.phi), ht);
  const auto added = ladder_operators(psi.truncation()).a_dag * psi;
  const auto joint = tensor<double>({fock_state(0, ht), ancilla, psi}) +
                     tensor<double>({fock_state(1, ht), ancilla, added});
  const auto mixed =
      apply_two_mode(beam_splitter_op(model.theta, ht, ht), joint, 0);
  return herald_contract(mixed, {1, 0});
}

KetVector<double> number_contraction(const StateVector& psi,
                                     const HeraldModel& model) {
  require_herald_dim(model, 2);
  if (std::abs(model.t() - model.r()) < kDenominatorTol) {
    throw SingularConfigurationError(
        "number scheme needs t != r (theta = pi/4 is singular)");
  }
  const Truncation& ht = model.herald_trunc;
  const auto lad = ladder_operators(psi.truncation());
  const auto sub_then_add = lad.a_dag * (lad.a * psi);
  const auto add_then_sub = lad.a * (lad.a_dag * psi);
  const auto f0 = fock_state(0, ht);
  const auto f1 = fock_state(1, ht);
  const auto joint =
      std::polar(1.0, model.phi) * tensor<double>({f1, f0, sub_then_add}) +
      tensor<double>({f0, f1, add_then_sub});
  const auto mixed =
      apply_two_mode(beam_splitter_op(model.theta, ht, ht), joint, 0);
  return herald_contract(mixed, {1, 0});
}

HeraldedOutput finish(KetVector<double> c, const Truncation& signal,
                      const char* what) {
  const double n = c.norm();
  if (n < kZeroNorm) {
    throw HeraldImpossibleError(std::string(what) +
                                ": herald outcome has zero probability");
  }
  StateVector out(c / n, signal);
  check_tail(out, what);
  return {std::move(out), n * n};
}

}  // namespace

OrthogonalizerSpec OrthogonalizerSpec::creation(cplx mean) {
  return {OperatorKind::Creation, mean, std::nullopt};
}

OrthogonalizerSpec OrthogonalizerSpec::number(cplx nbar) {
  if (std::abs(nbar.imag()) >= 1e-12) {
    throw DomainError("number-operator mean must be real");
  }
  return {OperatorKind::Number, cplx(nbar.real(), 0.0), std::nullopt};
}

OrthogonalizerSpec OrthogonalizerSpec::custom(ModeOperator c, cplx mean) {
  return {OperatorKind::Custom, mean, std::move(c)};
}

OrthogonalizerSpec OrthogonalizerSpec::measured(OperatorKind kind,
                                                const StateVector& psi) {
  if (kind == OperatorKind::Custom) {
    throw DomainError("a Custom spec needs its operator");
  }
  const auto unit = psi.normalized();
  const auto lad = ladder_operators(psi.truncation());
  if (kind == OperatorKind::Creation) {
    return creation(expectation(lad.a_dag, unit));
  }
  return number(cplx(expectation(lad.n_op, unit).real(), 0.0));
}

OrthogonalizerSpec OrthogonalizerSpec::measured(ModeOperator c,
                                                const StateVector& psi) {
  const cplx mean = expectation(c, psi.normalized());
  return custom(std::move(c), mean);
}

ModeOperator OrthogonalizerSpec::base_operator(const Truncation& trunc) const {
  switch (kind_) {
    case OperatorKind::Creation:
      return ladder_operators(trunc).a_dag;
    case OperatorKind::Number:
      return ladder_operators(trunc).n_op;
    case OperatorKind::Custom:
      if (custom_->dim() != trunc.dim()) {
        throw DimensionMismatch("custom operator truncation differs");
      }
      return *custom_;
  }
  throw DomainError("unknown operator kind");
}

ModeOperator build_orthogonalizer(const OrthogonalizerSpec& spec,
                                  const Truncation& trunc) {
  return spec.base_operator(trunc) - spec.mean_value() * identity_op(trunc);
}

StateVector orthogonalize(const StateVector& psi,
                          const OrthogonalizerSpec& spec) {
  const auto unit = psi.normalized();
  check_tail(unit, "orthogonalize input");
  const auto c = spec.base_operator(psi.truncation());
  const cplx measured = expectation(c, unit);
  if (std::abs(measured - spec.mean_value()) > kMeanTol) {
    throw PreconditionError("orthogonalizer mean value differs from <C> on "
                            "the input by " +
                            std::to_string(std::abs(measured -
                                                    spec.mean_value())));
  }
  const auto raw = build_orthogonalizer(spec, psi.truncation()) * unit;
  if (raw.norm() < kZeroNorm) {
    throw EigenstateError(
        "input is an eigenstate of the orthogonalizing operator");
  }
  auto out = raw.normalized();
  check_tail(out, "orthogonalize");
  return out;
}

std::vector<StateVector> orthogonal_family(const StateVector& psi,
                                           const OrthogonalizerSpec& spec,
                                           int k) {
  if (spec.kind() != OperatorKind::Creation) {
    throw DomainError("orthogonal_family requires a Creation spec");
  }
  if (k < 1) throw DomainError("orthogonal_family needs k >= 1");
  const auto op = build_orthogonalizer(spec, psi.truncation());
  std::vector<StateVector> family;
  family.reserve(k);
  StateVector current = orthogonalize(psi, spec);
  family.push_back(current);
  for (int m = 2; m <= k; ++m) {
    current = (op * current).normalized();
    check_tail(current, "orthogonal_family level " + std::to_string(m));
    family.push_back(current);
  }
  return family;
}

ModeOperator qubit_operator(const OrthogonalizerSpec& spec, cplx c,
                            const Truncation& trunc) {
  return spec.base_operator(trunc) +
         (c - spec.mean_value()) * identity_op(trunc);
}

StateVector make_qubit(const StateVector& psi, const OrthogonalizerSpec& spec,
                       cplx c) {
  const auto unit = psi.normalized();
  check_tail(unit, "make_qubit input");
  const auto raw = qubit_operator(spec, c, psi.truncation()) * unit;
  if (raw.norm() < kZeroNorm) {
    throw EigenstateError("qubit operator annihilates the input");
  }
  auto out = raw.normalized();
  check_tail(out, "make_qubit");
  return out;
}

QubitSpec coherent_qubit_spec(cplx c) {
  const double s = std::sqrt(1.0 + std::norm(c));
  return {c, c / s, cplx(1.0 / s, 0.0)};
}

QubitDecomposition decompose_qubit(const StateVector& state,
                                   const StateVector& psi,
                                   const StateVector& psi_perp) {
  const auto s = state.normalized();
  const auto u = psi.normalized();
  const auto v = psi_perp.normalized();
  const cplx a = inner_product(u, s);
  const cplx b = inner_product(v, s);
  const double residual = (s.amps() - a * u.amps() - b * v.amps()).norm();
  return {a, b, residual};
}

Truncation default_herald_truncation(int signal_dim, double beta_abs,
                                     double tail_tol) {
  const int base = std::max(2, std::min(signal_dim, 12));
  const int needed =
      detail::coherent_required_dim(beta_abs * beta_abs, tail_tol);
  return Truncation(std::max(base, needed), tail_tol);
}

HeraldedOutput heralded_addition_model(const StateVector& psi,
                                       const HeraldModel& model) {
  const auto unit = psi.normalized();
  check_tail(unit, "heralded_addition_model input");
  return finish(addition_contraction(unit, model), psi.truncation(),
                "heralded_addition_model");
}

ModeOperator heralded_addition_operator(const HeraldModel& model,
                                        const Truncation& signal) {
  Eigen::MatrixXcd m(signal.dim(), signal.dim());
  for (int n = 0; n < signal.dim(); ++n) {
    m.col(n) = addition_contraction(fock_state(n, signal), model);
  }
  return {std::move(m), signal};
}

cplx orthogonalizing_beta(cplx alpha, double theta, double phi) {
  const double r = std::sin(theta);
  if (std::abs(r) < kDenominatorTol) {
    throw SingularConfigurationError(
        "orthogonalizing beta needs a nonzero reflectivity");
  }
  return std::cos(theta) * std::conj(alpha) * std::polar(1.0, -phi) / r;
}

HeraldedOutput number_scheme_model(const StateVector& psi,
                                   const HeraldModel& model) {
  const auto unit = psi.normalized();
  check_tail(unit, "number_scheme_model input");
  return finish(number_contraction(unit, model), psi.truncation(),
                "number_scheme_model");
}

ModeOperator number_scheme_operator(const HeraldModel& model,
                                    const Truncation& signal) {
  Eigen::MatrixXcd m(signal.dim(), signal.dim());
  for (int n = 0; n < signal.dim(); ++n) {
    m.col(n) = number_contraction(fock_state(n, signal), model);
  }
  return {std::move(m), signal};
}

double number_scheme_angle(double nbar) {
  if (!(nbar >= 0.0)) throw DomainError("mean photon number must be >= 0");
  return std::atan(nbar / (1.0 + nbar));
}

ModeOperator two_operator_orthogonalizer(const ModeOperator& c1,
                                         const ModeOperator& c2,
                                         const StateVector& psi) {
  const auto unit = psi.normalized();
  const cplx m2 = expectation(c2, unit);
  if (std::abs(m2) <= kDenominatorTol) {
    throw DegenerateDenominatorError("<C2> vanishes on the input state");
  }
  const cplx m1 = expectation(c1, unit);
  return c1 - (m1 / m2) * c2;
}

}  // namespace cvortho
