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

// Acceptance suite: one PASS/FAIL line per criterion with its measured
// figure of merit and wall time against the time budget.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cvortho/experiment.hpp"
#include "cvortho/homodyne.hpp"
#include "cvortho/phase_space.hpp"
#include "cvortho/schemes.hpp"
#include "cvortho/serialization.hpp"

namespace {

using namespace cvortho;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0: no limit
  std::function<Outcome()> body;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

StateVector random_state(std::mt19937_64& rng, int dim, int support) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (int n = 0; n < support; ++n) v(n) = cplx(g(rng), g(rng));
  return StateVector(v, Truncation(dim)).normalized();
}

double normalized_overlap(const StateVector& psi, const ModeOperator& o) {
  const auto out = o * psi;
  return std::abs(inner_product(psi, out)) / out.norm();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("cvortho_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

// 1. Orthogonality battery.
Outcome orthogonality_battery() {
  const Truncation t(40);
  const auto lad = ladder_operators(t);
  std::mt19937_64 rng(1001);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto psi = random_state(rng, 40, 4 + trial % 16);
    // Custom operator acting on the low block only keeps outputs in range.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(40, 40);
    for (int i = 0; i < 24; ++i)
      for (int j = 0; j < 24; ++j) m(i, j) = cplx(g(rng), g(rng));
    const ModeOperator custom(m, t);
    std::vector<ModeOperator> ops{
        build_orthogonalizer(
            OrthogonalizerSpec::measured(OperatorKind::Creation, psi), t),
        build_orthogonalizer(
            OrthogonalizerSpec::measured(OperatorKind::Number, psi), t),
        build_orthogonalizer(OrthogonalizerSpec::measured(custom, psi), t),
        two_operator_orthogonalizer(lad.a_dag, custom, psi)};
    for (const auto& o : ops) worst = std::max(worst, normalized_overlap(psi, o));
    for (auto kind : {OperatorKind::Creation, OperatorKind::Number}) {
      const auto out = orthogonalize(psi, OrthogonalizerSpec::measured(kind, psi));
      worst = std::max(worst, std::abs(inner_product(psi, out)));
    }
  }
  int eigen_errors = 0;
  for (int n = 0; n < 10; ++n) {
    try {
      orthogonalize(fock_state(n, t), OrthogonalizerSpec::number(double(n)));
    } catch (const EigenstateError&) {
      ++eigen_errors;
    }
  }
  return {worst < 1e-10 && eigen_errors == 10,
          "max overlap " + sci(worst) + ", eigenstate errors " +
              std::to_string(eigen_errors) + "/10"};
}

// 2. Displaced-Fock identity and emitted marginals.
Outcome displaced_fock() {
  double worst_inf = 0.0, worst_marg = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const auto dir = scratch("fig1b");
    const auto res = run(parse_config(
        {{"experiment", "orthogonalize"},
         {"trunc", 60},
         {"input_state", {{"kind", "coherent"}, {"alpha", a}}},
         {"marginal", {{"phases", {0.0, kPi / 4, kPi / 2}}}},
         {"output_dir", dir.string()}}));
    worst_inf = std::max(
        worst_inf, 1 - res.report["fidelity_displaced_fock1"].get<double>());
    for (const auto& f : res.manifest["files"]) {
      const std::string path = f["path"];
      if (path.rfind("marginal_output_phase_", 0) != 0) continue;
      // File names carry the phase to 4 decimals; use the exact value.
      const double named = std::stod(path.substr(22, path.size() - 26));
      double phase = 0.0;
      for (double p : {0.0, kPi / 4, kPi / 2})
        if (std::abs(p - named) < 1e-4) phase = p;
      const double mu = std::sqrt(2.0) * a * std::cos(phase);
      std::ifstream in(dir / path);
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        double x, d;
        char comma;
        std::istringstream(line) >> x >> comma >> d;
        const double y = x - mu;
        const double ref = 2 * y * y * std::exp(-y * y) / std::sqrt(kPi);
        worst_marg = std::max(worst_marg, std::abs(d - ref));
      }
    }
  }
  return {worst_inf < 1e-8 && worst_marg < 1e-6,
          "max infidelity " + sci(std::max(0.0, worst_inf)) +
              ", marginal sup error " + sci(worst_marg)};
}

// 3. Heralded addition against the ideal operator.
Outcome physical_equivalence() {
  const Truncation sig(40);
  const auto lad = ladder_operators(sig);
  const std::vector<StateVector> inputs{
      coherent_state(cplx(0.5), sig), coherent_state(cplx(1.0), sig),
      fock_state(1, sig),
      (fock_state(0, sig) + fock_state(2, sig)).normalized()};
  double worst_inf = 0.0, worst_ratio = 0.0;
  for (double theta : {kPi / 16, kPi / 8, kPi / 4}) {
    for (cplx beta : {cplx(0.5), cplx(1.0), std::polar(2.0, kPi / 3)}) {
      HeraldModel model{beta, theta, 0.0,
                        default_herald_truncation(40, std::abs(beta))};
      std::vector<double> ratios;
      for (const auto& psi : inputs) {
        const auto h = heralded_addition_model(psi, model);
        const auto ideal =
            model.t() * (lad.a_dag * psi) - (model.r() * beta) * psi;
        worst_inf = std::max(worst_inf, 1 - fidelity(h.out, ideal.normalized()));
        ratios.push_back(h.success_prob / std::pow(ideal.norm(), 2));
      }
      for (double q : ratios)
        worst_ratio = std::max(worst_ratio, std::abs(q / ratios[0] - 1));
    }
  }
  return {worst_inf < 1e-8 && worst_ratio < 1e-6,
          "max infidelity " + sci(std::max(0.0, worst_inf)) +
              ", ratio spread " + sci(worst_ratio)};
}

// 4. Number-scheme orthogonalizer.
Outcome number_scheme() {
  const Truncation sig(40);
  const auto lad = ladder_operators(sig);
  double worst_overlap = 0.0, worst_elem = 0.0;
  for (double a : {0.5, 1.0, 1.5}) {
    const double theta = number_scheme_angle(a * a);
    HeraldModel model{0.0, theta, 0.0, Truncation(2)};
    const auto psi = coherent_state(cplx(a), sig);
    const auto h = number_scheme_model(psi, model);
    worst_overlap = std::max(worst_overlap, std::abs(inner_product(psi, h.out)));
    for (double phi : {0.0, 0.7, kPi / 2}) {
      model.phi = phi;
      const auto op = number_scheme_operator(model, sig);
      const Eigen::MatrixXcd aad = lad.a.matrix() * lad.a_dag.matrix();
      const Eigen::MatrixXcd ref =
          model.t() * std::polar(1.0, phi) * lad.n_op.matrix() - model.r() * aad;
      worst_elem = std::max(
          worst_elem,
          (op.matrix() - ref).topLeftCorner(39, 39).cwiseAbs().maxCoeff());
    }
  }
  return {worst_overlap < 1e-8 && worst_elem < 1e-10,
          "max overlap " + sci(worst_overlap) + ", elementwise " +
              sci(worst_elem)};
}

// 5. Wigner correctness.
Outcome wigner_correctness() {
  const Truncation t(40);
  const double w0 = wigner_at(DensityMatrix::pure(fock_state(0, t)), 0, 0);
  const double w1 = wigner_at(DensityMatrix::pure(fock_state(1, t)), 0, 0);
  const double origin = std::max(std::abs(w0 - 1 / kPi), std::abs(w1 + 1 / kPi));
  std::vector<StateVector> states{fock_state(0, t), fock_state(1, t)};
  for (cplx a : {cplx(0.5), cplx(1.0), cplx(0.0, 1.5), cplx(2.0)}) {
    states.push_back(coherent_state(a, t));
    states.push_back(displace(a, fock_state(1, t)));
  }
  for (cplx c : {cplx(1), cplx(-1), cplx(0, 1), cplx(0, -1)})
    states.push_back(make_qubit(coherent_state(cplx(1.0), t),
                                OrthogonalizerSpec::creation(1.0), c));
  double norm_err = 0.0;
  for (const auto& s : states)
    norm_err = std::max(norm_err,
                        std::abs(integrate(wigner(DensityMatrix::pure(s))) - 1));
  // Covariance: shift by (10, 5) grid cells of 0.05.
  const auto base = DensityMatrix::pure(
      (fock_state(0, t) + cplx(0.3, 0.4) * fock_state(2, t)).normalized());
  const cplx alpha = cplx(0.5, 0.25) / std::sqrt(2.0);
  const auto d = displacement_op(alpha, t).matrix();
  const DensityMatrix moved(d * base.matrix() * d.adjoint(), t);
  const auto wa = wigner(base), wb = wigner(moved);
  double cov = 0.0;
  for (int i = 0; i + 10 < 241; ++i)
    for (int j = 0; j + 5 < 241; ++j)
      cov = std::max(cov, std::abs(wb.values(i + 10, j + 5) - wa.values(i, j)));
  return {origin < 1e-9 && norm_err < 1e-4 && cov < 1e-9,
          "origin " + sci(origin) + ", normalization " + sci(norm_err) +
              ", covariance " + sci(cov)};
}

// 6. Balanced qubit Wigner maps and their loss behaviour.
Outcome fig2_maps() {
  const Truncation t(40);
  const auto psi = coherent_state(cplx(1.0), t);
  const auto spec = OrthogonalizerSpec::creation(1.0);
  const auto d = displacement_op(cplx(1.0), t);
  const auto f0 = fock_state(0, t), f1 = fock_state(1, t);
  const cplx i(0, 1);
  const std::vector<std::pair<cplx, StateVector>> cases{
      {cplx(1), f0 + f1}, {cplx(-1), f0 - f1}, {i, f0 - i * f1}, {-i, f0 + i * f1}};
  double pointwise = 0.0, norm_err = 0.0;
  bool monotone = true;
  std::string mins;
  for (const auto& [c, kernel] : cases) {
    const auto q = make_qubit(psi, spec, c);
    const auto ideal = d * kernel.normalized();
    const auto wq = wigner(DensityMatrix::pure(q));
    const auto wi = wigner(DensityMatrix::pure(ideal));
    pointwise = std::max(pointwise, (wq.values - wi.values).cwiseAbs().maxCoeff());
    double previous = wq.values.minCoeff();
    for (double eta : {0.9, 0.8, 0.7, 0.6}) {
      const auto w = wigner(apply_loss(DensityMatrix::pure(q), LossChannel(eta)));
      const double m = w.values.minCoeff();
      monotone = monotone && m > previous && m <= 0.0;
      previous = m;
      norm_err = std::max(norm_err, std::abs(integrate(w) - 1));
    }
    mins += " " + sci(previous);
  }
  return {pointwise < 1e-9 && monotone && norm_err < 1e-4,
          "pointwise " + sci(pointwise) + ", eta=0.6 minima" + mins +
              ", normalization " + sci(norm_err)};
}

// 7. Mutually orthogonal family.
Outcome family() {
  const Truncation t(60);
  const auto psi = coherent_state(cplx(1.0), t);
  auto all = orthogonal_family(psi, OrthogonalizerSpec::creation(1.0), 4);
  all.insert(all.begin(), psi);
  double worst = 0.0;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b)
      worst = std::max(worst, std::abs(inner_product(all[a], all[b])));
  return {worst < 1e-8, "max pairwise overlap " + sci(worst)};
}

// 8. Tomography round trip for one state at eta = 1 and 0.6.
Outcome tomography(const std::string& label, const StateVector& truth,
                   std::uint64_t seed) {
  const Truncation big(truth.dim());
  const auto rho = DensityMatrix::pure(truth);
  std::string detail = label + ":";
  bool ok = true;
  for (double eta : {1.0, 0.6}) {
    SamplingPlan plan{SamplingPlan::equally_spaced(10), 50000, seed, eta};
    const auto samples = sample_quadratures(rho, plan);
    const auto rec = maxlik_reconstruct(samples, ReconstructionOptions{});
    const auto target = eta < 1 ? apply_loss(rho, LossChannel(eta)) : rho;
    const double f = fidelity(embed(rec.rho_hat, big), target);
    bool mono = true;
    const auto& tr = rec.log_likelihood_trace;
    for (std::size_t k = 1; k < tr.size(); ++k)
      mono = mono && tr[k] >= tr[k - 1] - 1e-9;
    ok = ok && mono && f >= (eta < 1 ? 0.98 : 0.99) &&
         rec.iterations_used <= 2000;
    char buf[96];
    std::snprintf(buf, sizeof buf, " eta=%.1f F=%.4f iters=%d%s", eta, f,
                  rec.iterations_used, mono ? "" : " NON-MONOTONE");
    detail += buf;
  }
  return {ok, detail};
}

int exit_code(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 9. CLI determinism and the verify battery.
Outcome cli_determinism() {
  const std::string cli = CVORTHO_CLI_PATH;
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  write_json_file(dir / "config.json",
                  {{"experiment", "tomography"},
                   {"trunc", 20},
                   {"scheme", {{"prepare", "qubit"}}},
                   {"sampling", {{"phases", 6}, {"samples_per_phase", 5000}}}});
  std::vector<nlohmann::json> files;
  for (const char* out : {"a", "b"}) {
    const int code = exit_code(cli + " run " + (dir / "config.json").string() +
                               " --seed 4242 --output-dir " + (dir / out).string());
    if (code != 0) return {false, "run exited " + std::to_string(code)};
    files.push_back(read_json_file(dir / out / "manifest.json")["files"]);
  }
  const bool same = files[0] == files[1] && !files[0].empty();
  const int verify = exit_code(cli + " verify");
  return {same && verify == 0,
          std::to_string(files[0].size()) + " files " +
              (same ? "identical" : "DIFFER") + ", verify exit " +
              std::to_string(verify)};
}

}  // namespace

int main() {
  const Truncation t(30);
  const auto coh = coherent_state(cplx(1.0), t);
  const auto spec = OrthogonalizerSpec::creation(1.0);
  std::vector<Criterion> criteria{
      {1, "orthogonality battery", 30, orthogonality_battery},
      {2, "displaced-Fock identity", 10, displaced_fock},
      {3, "physical-model equivalence", 60, physical_equivalence},
      {4, "number-scheme orthogonalizer", 10, number_scheme},
      {5, "Wigner correctness", 60, wigner_correctness},
      {6, "balanced-qubit Wigner maps", 120, fig2_maps},
      {7, "mutually orthogonal family", 10, family},
      {8, "tomography: vacuum", 300,
       [&] { return tomography("vacuum", fock_state(0, t), 801); }},
      {8, "tomography: coherent", 300,
       [&] { return tomography("coherent", coh, 802); }},
      {8, "tomography: orthogonal", 300,
       [&] { return tomography("orthogonal", orthogonalize(coh, spec), 803); }},
      {8, "tomography: balanced qubit", 300,
       [&] { return tomography("qubit", make_qubit(coh, spec, 1.0), 804); }},
      {9, "CLI determinism", 0, cli_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    const bool in_time = c.budget_s == 0 || secs < c.budget_s;
    const bool pass = o.passed && in_time;
    failed += !pass;
    char timing[64];
    if (c.budget_s > 0)
      std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, c.budget_s);
    else
      std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name
              << " -- " << o.detail << " (" << timing
              << (in_time ? "" : ", over budget") << ")" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size()
            << " acceptance checks passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
