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

#include "cvortho/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "cvortho/experiment.hpp"
#include "cvortho/homodyne.hpp"
#include "cvortho/phase_space.hpp"
#include "cvortho/schemes.hpp"
#include "cvortho/serialization.hpp"

namespace cvortho {
namespace {

constexpr double kPi = std::numbers::pi;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Random state on levels below `support`, tail-compliant at dim.
StateVector random_state(std::mt19937_64& rng, int dim, int support) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n < support; ++n) v(n) = cplx(g(rng), g(rng));
  return StateVector(v, Truncation(dim)).normalized();
}

struct Outcome {
  bool passed;
  std::string detail;
};

Outcome check_commutator() {
  const Truncation t(30);
  const auto lad = ladder_operators(t);
  const Eigen::MatrixXcd comm =
      lad.a.matrix() * lad.a_dag.matrix() - lad.a_dag.matrix() * lad.a.matrix();
  const double err =
      (comm.topLeftCorner(29, 29) - Eigen::MatrixXcd::Identity(29, 29))
          .cwiseAbs()
          .maxCoeff();
  return {err < 1e-14, "max |[a,a^dag]-1| = " + sci(err)};
}

Outcome check_beam_splitter() {
  const double theta = kPi / 5;
  const Truncation h(20);
  const auto bs = beam_splitter_op(theta, h, h);
  const cplx beta(1.0, 0.5);
  const auto out = apply_two_mode(
      bs, tensor(fock_state(0, h), coherent_state(beta, h)), 0);
  const auto ref = tensor(coherent_state(-std::sin(theta) * beta, h),
                          coherent_state(std::cos(theta) * beta, h));
  const double f1 = std::norm(ref.amps().dot(out.amps()));
  const auto one = apply_two_mode(bs, tensor(fock_state(1, h), fock_state(0, h)),
                                  0);
  const double e2 =
      std::abs(one.amplitude({1, 0}) - std::cos(theta)) +
      std::abs(one.amplitude({0, 1}) - std::sin(theta)) +
      std::abs(one.amps().squaredNorm() - 1.0);
  return {f1 > 1 - 1e-8 && e2 < 1e-13,
          "coherent infidelity " + sci(std::max(0.0, 1 - f1)) + ", |1,0> error " + sci(e2)};
}

Outcome check_herald_completeness() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<Truncation> modes{Truncation(3), Truncation(4),
                                        Truncation(6)};
    Eigen::VectorXcd v(3 * 4 * 6);
    for (auto& a : v) a = cplx(g(rng), g(rng));
    v.normalize();
    const MultiModeState joint(v, modes);
    double total = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 4; ++b) {
        total += herald_project(joint, {a, b}).probability;
      }
    }
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return {worst < 1e-10, "max |sum p - 1| = " + sci(worst)};
}

Outcome check_orthogonality() {
  std::mt19937_64 rng(11);
  const int dim = 40;
  const Truncation t(dim);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto psi = random_state(rng, dim, 12);
    const auto spec_c = OrthogonalizerSpec::measured(OperatorKind::Creation, psi);
    const auto spec_n = OrthogonalizerSpec::measured(OperatorKind::Number, psi);
    const auto lad = ladder_operators(t);
    const auto spec_x = OrthogonalizerSpec::measured(lad.a + lad.a_dag, psi);
    for (const auto* spec : {&spec_c, &spec_n, &spec_x}) {
      worst = std::max(worst,
                       std::abs(inner_product(psi, orthogonalize(psi, *spec))));
    }
    const auto op = two_operator_orthogonalizer(lad.n_op, lad.a_dag * lad.a_dag
                                                              + identity_op(t),
                                                psi);
    const auto raw = op * psi;
    worst = std::max(worst, std::abs(inner_product(psi, raw)) / raw.norm());
  }
  bool eigen_error = false;
  try {
    orthogonalize(fock_state(3, t), OrthogonalizerSpec::number(3.0));
  } catch (const EigenstateError&) {
    eigen_error = true;
  }
  return {worst < 1e-10 && eigen_error,
          "max overlap " + sci(worst) +
              (eigen_error ? ", eigenstate rejected" : ", eigenstate MISSED")};
}

Outcome check_displaced_fock() {
  const Truncation t(60);
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const auto psi = coherent_state(cplx(a), t);
    const auto out = orthogonalize(
        psi, OrthogonalizerSpec::measured(OperatorKind::Creation, psi));
    worst = std::max(worst, 1.0 - fidelity(out, displace(cplx(a), fock_state(1, t))));
  }
  return {worst < 1e-8, "max infidelity " + sci(worst)};
}

Outcome check_family() {
  const Truncation t(60);
  const auto psi = coherent_state(cplx(1.0), t);
  const auto fam = orthogonal_family(
      psi, OrthogonalizerSpec::measured(OperatorKind::Creation, psi), 4);
  double worst = 0.0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      worst = std::max(worst, std::abs(inner_product(fam[i], fam[j])));
    }
  }
  return {worst < 1e-8, "max pairwise overlap " + sci(worst)};
}

Outcome check_heralded_addition() {
  const Truncation t(40);
  const auto lad = ladder_operators(t);
  double worst = 0.0;
  for (double theta : {kPi / 16, kPi / 4}) {
    for (cplx beta : {cplx(0.5), std::polar(2.0, kPi / 3)}) {
      HeraldModel model;
      model.theta = theta;
      model.beta = beta;
      model.herald_trunc = default_herald_truncation(40, std::abs(beta));
      const auto psi = coherent_state(cplx(1.0), t);
      const auto h = heralded_addition_model(psi, model);
      const auto ideal = (model.t() * lad.a_dag -
                          model.r() * beta * identity_op(t)) * psi;
      worst = std::max(worst, 1.0 - fidelity(h.out, ideal));
    }
  }
  return {worst < 1e-8, "max infidelity " + sci(worst)};
}

Outcome check_number_scheme() {
  const Truncation t(40);
  const auto psi = coherent_state(cplx(1.0), t);
  HeraldModel model;
  model.theta = number_scheme_angle(1.0);
  model.herald_trunc = Truncation(2);
  const auto h = number_scheme_model(psi, model);
  const double overlap = std::abs(inner_product(psi, h.out));
  return {overlap < 1e-8, "overlap " + sci(overlap)};
}

Outcome check_qubit() {
  const Truncation t(40);
  const auto psi = coherent_state(cplx(1.0), t);
  const auto q = make_qubit(
      psi, OrthogonalizerSpec::measured(OperatorKind::Creation, psi), 1.0);
  Eigen::VectorXcd ref = Eigen::VectorXcd::Zero(40);
  ref(0) = ref(1) = 1.0 / std::sqrt(2.0);
  const double inf =
      1.0 - fidelity(q, displace(cplx(1.0), StateVector(ref, t)));
  return {inf < 1e-8, "infidelity " + sci(inf)};
}

Outcome check_wigner() {
  const Truncation t(20);
  const auto vac = DensityMatrix::pure(fock_state(0, t));
  const auto one = DensityMatrix::pure(fock_state(1, t));
  const double e0 = std::abs(wigner_at(vac, 0, 0) - 1 / kPi) +
                    std::abs(wigner_at(one, 0, 0) + 1 / kPi);
  const auto coh = DensityMatrix::pure(coherent_state(cplx(1.0), t));
  const double norm_err = std::abs(integrate(wigner(coh)) - 1.0);
  double cross = 0.0;
  for (auto [x, p] : {std::pair{0.3, -0.7}, std::pair{1.2, 0.4}}) {
    cross = std::max(cross, std::abs(wigner_at(coh, x, p) -
                                     displaced_parity(coh, x, p)));
  }
  return {e0 < 1e-9 && norm_err < 1e-4 && cross < 1e-9,
          "origin " + sci(e0) + ", normalization " + sci(norm_err) +
              ", parity cross-check " + sci(cross)};
}

Outcome check_loss() {
  const Truncation t(30);
  const double eta = 0.6;
  const auto lossy =
      apply_loss(DensityMatrix::pure(fock_state(1, t)), LossChannel(eta));
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(30, 30);
  ref(0, 0) = 1 - eta;
  ref(1, 1) = eta;
  const double e1 = (lossy.matrix() - ref).cwiseAbs().maxCoeff();
  const auto coh = apply_loss(DensityMatrix::pure(coherent_state(cplx(1.0), t)),
                              LossChannel(eta));
  const double f =
      fidelity(coh, coherent_state(cplx(std::sqrt(eta)), t));
  return {e1 < 1e-14 && f > 1 - 1e-10,
          "|1> error " + sci(e1) + ", coherent infidelity " + sci(1 - f)};
}

Outcome check_tomography() {
  const Truncation t(10);
  const auto rho = DensityMatrix::pure(fock_state(0, t));
  SamplingPlan plan{SamplingPlan::equally_spaced(10), 5000, 42, 1.0};
  const auto samples = sample_quadratures(rho, plan);
  ReconstructionOptions opt;
  opt.dim = 8;
  opt.max_iter = 300;
  const auto rec = maxlik_reconstruct(samples, opt);
  const double f = fidelity(rec.rho_hat, fock_state(0, Truncation(8)));
  bool monotone = true;
  for (std::size_t k = 1; k < rec.log_likelihood_trace.size(); ++k) {
    monotone = monotone && rec.log_likelihood_trace[k] >=
                               rec.log_likelihood_trace[k - 1] - 1e-9;
  }
  return {f >= 0.99 && monotone,
          "vacuum fidelity " + std::to_string(f) +
              (monotone ? ", likelihood monotone" : ", likelihood DECREASED")};
}

Outcome check_serialization() {
  const auto psi = coherent_state(cplx(0.7, -0.3), Truncation(20));
  const auto rho = DensityMatrix::pure(psi);
  const auto back = density_from_json(nlohmann::json::parse(to_json(rho).dump()));
  const double err = (back.matrix() - rho.matrix()).cwiseAbs().maxCoeff();
  return {err <= 1e-15, "round-trip error " + sci(err)};
}

}  // namespace

std::vector<CheckResult> run_verify_battery() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"commutator on valid subspace", check_commutator},
      {"beam-splitter identities", check_beam_splitter},
      {"herald completeness", check_herald_completeness},
      {"orthogonality battery", check_orthogonality},
      {"displaced-Fock identity", check_displaced_fock},
      {"orthogonal family", check_family},
      {"heralded addition = ideal", check_heralded_addition},
      {"number-scheme orthogonalizer", check_number_scheme},
      {"balanced qubit", check_qubit},
      {"Wigner values", check_wigner},
      {"loss channel", check_loss},
      {"tomography round trip", check_tomography},
      {"JSON round trip", check_serialization},
  };
  std::vector<CheckResult> rows;
  for (const auto& [name, fn] : checks) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    rows.push_back({name, o.passed, o.detail, secs});
  }
  return rows;
}

void print_check_table(std::ostream& os, const std::vector<CheckResult>& rows) {
  int failed = 0;
  for (const auto& r : rows) {
    os << (r.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(32)
       << r.name << ' ' << r.detail << "  (" << std::fixed
       << std::setprecision(2) << r.seconds << " s)\n";
    os.unsetf(std::ios::fixed);
    if (!r.passed) ++failed;
  }
  os << rows.size() - failed << '/' << rows.size() << " checks passed\n";
}

}  // namespace cvortho
