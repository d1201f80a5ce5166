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

#include "cvortho/experiment.hpp"

#include <openssl/evp.h>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "cvortho/schemes.hpp"
#include "cvortho/serialization.hpp"
#include "cvortho/verify.hpp"

namespace cvortho {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kOverlapTol = 1e-10;
constexpr double kPhysicalOverlapTol = 1e-8;

/// Reads typed fields and records every problem instead of stopping at the
/// first one.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& out) : out_(out) {}

  void fail(const std::string& field, const std::string& msg) {
    out_.push_back(field + ": " + msg);
  }

  const json* find(const json& obj, const std::string& key) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  void known_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> keys) {
    if (!obj.is_object()) return;
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) {
        fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
      }
    }
  }

  void number(const json& obj, const std::string& key, const std::string& name,
              double& dst) {
    if (const json* v = find(obj, key)) {
      if (v->is_number()) {
        dst = v->get<double>();
        if (!std::isfinite(dst)) fail(name, "must be finite");
      } else {
        fail(name, "must be a number");
      }
    }
  }

  void integer(const json& obj, const std::string& key,
               const std::string& name, int& dst) {
    if (const json* v = find(obj, key)) {
      if (v->is_number_integer()) {
        dst = v->get<int>();
      } else {
        fail(name, "must be an integer");
      }
    }
  }

  void boolean(const json& obj, const std::string& key,
               const std::string& name, bool& dst) {
    if (const json* v = find(obj, key)) {
      if (v->is_boolean()) {
        dst = v->get<bool>();
      } else {
        fail(name, "must be true or false");
      }
    }
  }

  void string(const json& obj, const std::string& key, const std::string& name,
              std::string& dst) {
    if (const json* v = find(obj, key)) {
      if (v->is_string()) {
        dst = v->get<std::string>();
      } else {
        fail(name, "must be a string");
      }
    }
  }

  std::optional<cplx> complex_value(const json& v, const std::string& name) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() &&
        v[1].is_number()) {
      return cplx(v[0].get<double>(), v[1].get<double>());
    }
    fail(name, "must be a number or an [re, im] pair");
    return std::nullopt;
  }

  void complex_field(const json& obj, const std::string& key,
                     const std::string& name, cplx& dst) {
    if (const json* v = find(obj, key)) {
      if (auto c = complex_value(*v, name)) dst = *c;
    }
  }

  const json& object(const json& obj, const std::string& key,
                     const std::string& name) {
    static const json empty = json::object();
    const json* v = find(obj, key);
    if (!v) return empty;
    if (!v->is_object()) {
      fail(name, "must be an object");
      return empty;
    }
    return *v;
  }

 private:
  std::vector<std::string>& out_;
};

std::optional<Experiment> experiment_from(const std::string& s) {
  if (s == "orthogonalize") return Experiment::Orthogonalize;
  if (s == "qubit_wigner") return Experiment::QubitWigner;
  if (s == "number_scheme") return Experiment::NumberScheme;
  if (s == "tomography") return Experiment::Tomography;
  if (s == "verify") return Experiment::Verify;
  return std::nullopt;
}

ExperimentConfig parse_impl(const json& doc, std::vector<std::string>& errs) {
  Reader rd(errs);
  ExperimentConfig cfg;
  cfg.echo = doc;
  if (!doc.is_object()) {
    rd.fail("config", "must be a JSON object");
    return cfg;
  }
  rd.known_keys(doc, "",
                {"experiment", "input_state", "scheme", "trunc", "tail_tol",
                 "eta", "grid", "marginal", "sampling", "reconstruction",
                 "output_dir"});

  std::string exp_name;
  if (!rd.find(doc, "experiment")) {
    rd.fail("experiment", "missing");
  } else {
    rd.string(doc, "experiment", "experiment", exp_name);
    if (auto e = experiment_from(exp_name)) {
      cfg.experiment = *e;
    } else if (!exp_name.empty()) {
      rd.fail("experiment", "unknown experiment '" + exp_name + "'");
    }
  }

  rd.integer(doc, "trunc", "trunc", cfg.trunc);
  if (cfg.trunc < 2) {
    rd.fail("trunc", "must be >= 2 (got " + std::to_string(cfg.trunc) + ")");
  }
  rd.number(doc, "tail_tol", "tail_tol", cfg.tail_tol);
  if (!(cfg.tail_tol >= 0.0)) rd.fail("tail_tol", "must be >= 0");
  rd.number(doc, "eta", "eta", cfg.eta);
  if (!(cfg.eta >= 0.0 && cfg.eta <= 1.0)) rd.fail("eta", "must lie in [0, 1]");
  if (const json* v = rd.find(doc, "output_dir")) {
    if (v->is_string()) {
      cfg.output_dir = v->get<std::string>();
    } else {
      rd.fail("output_dir", "must be a string");
    }
  }

  // input state
  const json& in = rd.object(doc, "input_state", "input_state");
  rd.known_keys(in, "input_state", {"kind", "alpha", "n", "amps"});
  rd.string(in, "kind", "input_state.kind", cfg.input_state.kind);
  rd.complex_field(in, "alpha", "input_state.alpha", cfg.input_state.alpha);
  rd.integer(in, "n", "input_state.n", cfg.input_state.n);
  if (const json* a = rd.find(in, "amps")) {
    if (!a->is_array()) {
      rd.fail("input_state.amps", "must be an array");
    } else {
      for (std::size_t k = 0; k < a->size(); ++k) {
        if (auto c = rd.complex_value((*a)[k], "input_state.amps[" +
                                                   std::to_string(k) + "]")) {
          cfg.input_state.amps.push_back(*c);
        }
      }
    }
  }
  const auto& is = cfg.input_state;
  if (cfg.trunc >= 2 && cfg.tail_tol >= 0.0) {
    if (is.kind == "coherent") {
      const double mean = std::norm(is.alpha);
      if (detail::poisson_tail(mean, cfg.trunc) > cfg.tail_tol) {
        rd.fail("input_state.alpha",
                "|alpha|^2 = " + std::to_string(mean) + " needs trunc >= " +
                    std::to_string(
                        detail::coherent_required_dim(mean, cfg.tail_tol)));
      }
    } else if (is.kind == "fock") {
      if (is.n < 0 || is.n >= cfg.trunc) {
        rd.fail("input_state.n", "must lie in [0, trunc)");
      }
    } else if (is.kind == "custom") {
      if (static_cast<int>(is.amps.size()) != cfg.trunc) {
        rd.fail("input_state.amps", "must hold exactly trunc amplitudes");
      } else {
        double n2 = 0.0;
        for (const auto& c : is.amps) n2 += std::norm(c);
        if (n2 < kZeroNorm * kZeroNorm) {
          rd.fail("input_state.amps", "must not be the zero vector");
        } else if (std::norm(is.amps.back()) / n2 > cfg.tail_tol) {
          rd.fail("input_state.amps", "top level exceeds tail_tol");
        }
      }
    } else {
      rd.fail("input_state.kind", "must be coherent, fock or custom");
    }
  }

  // scheme
  const json& sc = rd.object(doc, "scheme", "scheme");
  rd.known_keys(sc, "scheme",
                {"operator", "physical", "theta", "beta", "phi", "herald_dim",
                 "c", "prepare", "prepare_c"});
  auto& s = cfg.scheme;
  rd.string(sc, "operator", "scheme.operator", s.op);
  if (s.op != "creation" && s.op != "number") {
    rd.fail("scheme.operator", "must be creation or number");
  }
  rd.boolean(sc, "physical", "scheme.physical", s.physical);
  if (rd.find(sc, "theta")) {
    double th = 0.0;
    rd.number(sc, "theta", "scheme.theta", th);
    s.theta = th;
  }
  if (const json* b = rd.find(sc, "beta")) {
    s.beta = rd.complex_value(*b, "scheme.beta");
  }
  rd.number(sc, "phi", "scheme.phi", s.phi);
  if (rd.find(sc, "herald_dim")) {
    int hd = 0;
    rd.integer(sc, "herald_dim", "scheme.herald_dim", hd);
    if (hd < 2) rd.fail("scheme.herald_dim", "must be >= 2");
    s.herald_dim = hd;
  }
  if (const json* cs = rd.find(sc, "c")) {
    if (!cs->is_array() || cs->empty()) {
      rd.fail("scheme.c", "must be a non-empty array");
    } else {
      s.c_values.clear();
      for (std::size_t k = 0; k < cs->size(); ++k) {
        if (auto c =
                rd.complex_value((*cs)[k], "scheme.c[" + std::to_string(k) + "]")) {
          s.c_values.push_back(*c);
        }
      }
    }
  }
  rd.string(sc, "prepare", "scheme.prepare", s.prepare);
  if (s.prepare != "input" && s.prepare != "orthogonal" &&
      s.prepare != "qubit") {
    rd.fail("scheme.prepare", "must be input, orthogonal or qubit");
  }
  rd.complex_field(sc, "prepare_c", "scheme.prepare_c", s.prepare_c);

  const bool number_physical =
      cfg.experiment == Experiment::NumberScheme ||
      (cfg.experiment == Experiment::Orthogonalize && s.physical &&
       s.op == "number");
  if (s.theta && number_physical &&
      std::abs(std::cos(*s.theta) - std::sin(*s.theta)) < 1e-12) {
    rd.fail("scheme.theta",
            "singular configuration t = r for the number scheme");
  }
  if (s.theta && cfg.experiment == Experiment::Orthogonalize && s.physical &&
      s.op == "creation" && !s.beta && std::abs(std::sin(*s.theta)) < 1e-12) {
    rd.fail("scheme.theta",
            "r = 0 cannot realize the orthogonalizer (beta undetermined)");
  }

  // grid
  const json& g = rd.object(doc, "grid", "grid");
  rd.known_keys(g, "grid", {"x_min", "x_max", "p_min", "p_max", "nx", "np"});
  rd.number(g, "x_min", "grid.x_min", cfg.grid.x_min);
  rd.number(g, "x_max", "grid.x_max", cfg.grid.x_max);
  rd.number(g, "p_min", "grid.p_min", cfg.grid.p_min);
  rd.number(g, "p_max", "grid.p_max", cfg.grid.p_max);
  rd.integer(g, "nx", "grid.nx", cfg.grid.nx);
  rd.integer(g, "np", "grid.np", cfg.grid.np);
  if (!(cfg.grid.x_min < cfg.grid.x_max)) rd.fail("grid.x_max", "must exceed x_min");
  if (!(cfg.grid.p_min < cfg.grid.p_max)) rd.fail("grid.p_max", "must exceed p_min");
  if (cfg.grid.nx < 2) rd.fail("grid.nx", "must be >= 2");
  if (cfg.grid.np < 2) rd.fail("grid.np", "must be >= 2");

  // marginal
  const json& m = rd.object(doc, "marginal", "marginal");
  rd.known_keys(m, "marginal", {"phases", "x_min", "x_max", "points"});
  if (const json* ph = rd.find(m, "phases")) {
    if (!ph->is_array() || ph->empty()) {
      rd.fail("marginal.phases", "must be a non-empty array of numbers");
    } else {
      cfg.marginal.phases.clear();
      for (const auto& v : *ph) {
        if (v.is_number()) {
          cfg.marginal.phases.push_back(v.get<double>());
        } else {
          rd.fail("marginal.phases", "entries must be numbers");
        }
      }
    }
  }
  rd.number(m, "x_min", "marginal.x_min", cfg.marginal.x_min);
  rd.number(m, "x_max", "marginal.x_max", cfg.marginal.x_max);
  rd.integer(m, "points", "marginal.points", cfg.marginal.points);
  if (!(cfg.marginal.x_min < cfg.marginal.x_max)) {
    rd.fail("marginal.x_max", "must exceed x_min");
  }
  if (cfg.marginal.points < 2) rd.fail("marginal.points", "must be >= 2");

  // sampling
  const json& sp = rd.object(doc, "sampling", "sampling");
  rd.known_keys(sp, "sampling", {"phases", "samples_per_phase", "seed"});
  if (const json* ph = rd.find(sp, "phases")) {
    if (ph->is_number_integer()) {
      const int count = ph->get<int>();
      if (count < 1) {
        rd.fail("sampling.phases", "phase count must be >= 1");
      } else {
        cfg.sampling.phases = SamplingPlan::equally_spaced(count);
      }
    } else if (ph->is_array() && !ph->empty()) {
      cfg.sampling.phases.clear();
      for (const auto& v : *ph) {
        if (!v.is_number()) {
          rd.fail("sampling.phases", "entries must be numbers");
          continue;
        }
        const double phase = v.get<double>();
        if (!(phase >= 0.0 && phase < std::numbers::pi)) {
          rd.fail("sampling.phases", "entries must lie in [0, pi)");
        }
        cfg.sampling.phases.push_back(phase);
      }
      std::set<double> uniq(cfg.sampling.phases.begin(),
                            cfg.sampling.phases.end());
      if (uniq.size() != cfg.sampling.phases.size()) {
        rd.fail("sampling.phases", "entries must be distinct");
      }
    } else {
      rd.fail("sampling.phases", "must be a count or a non-empty array");
    }
  }
  rd.integer(sp, "samples_per_phase", "sampling.samples_per_phase",
             cfg.sampling.samples_per_phase);
  if (cfg.sampling.samples_per_phase < 1) {
    rd.fail("sampling.samples_per_phase", "must be >= 1");
  }
  if (const json* sd = rd.find(sp, "seed")) {
    if (sd->is_number_unsigned()) {
      cfg.sampling.seed = sd->get<std::uint64_t>();
    } else {
      rd.fail("sampling.seed", "must be a non-negative integer");
    }
  }
  cfg.sampling.eta = cfg.eta;

  // reconstruction
  const json& rc = rd.object(doc, "reconstruction", "reconstruction");
  rd.known_keys(rc, "reconstruction", {"dim", "max_iter", "tol", "bin_width"});
  auto& ro = cfg.reconstruction;
  rd.integer(rc, "dim", "reconstruction.dim", ro.dim);
  rd.integer(rc, "max_iter", "reconstruction.max_iter", ro.max_iter);
  rd.number(rc, "tol", "reconstruction.tol", ro.tol);
  rd.number(rc, "bin_width", "reconstruction.bin_width", ro.bin_width);
  if (ro.dim < 2 || ro.dim > 30) rd.fail("reconstruction.dim", "must lie in [2, 30]");
  if (ro.max_iter < 0) rd.fail("reconstruction.max_iter", "must be >= 0");
  if (!(ro.tol >= 0.0)) rd.fail("reconstruction.tol", "must be >= 0");
  if (!(ro.bin_width >= 0.0)) rd.fail("reconstruction.bin_width", "must be >= 0");
  if (cfg.experiment == Experiment::Tomography && ro.dim > cfg.trunc) {
    rd.fail("reconstruction.dim", "must not exceed trunc");
  }
  return cfg;
}

std::string c_label(cplx c) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "c_%+.4f_%+.4fi", c.real(), c.imag());
  return buf;
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

/// Collects output files in write order.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  const fs::path& dir() const { return dir_; }

  void add(const fs::path& path, const std::string& kind) {
    files_.push_back({fs::relative(path, dir_).generic_string(), kind});
  }

  void json_file(const std::string& name, const json& j,
                 const std::string& kind) {
    write_json_file(dir_ / name, j);
    add(dir_ / name, kind);
  }

  json manifest_files() const {
    json arr = json::array();
    for (const auto& [rel, kind] : files_) {
      arr.push_back(
          {{"path", rel}, {"sha256", sha256_hex(dir_ / rel)}, {"kind", kind}});
    }
    return arr;
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

void emit_marginals(Artifacts& art, const std::string& prefix,
                    const DensityMatrix& rho, const MarginalConfig& mc) {
  const auto xs = linspace(mc.x_min, mc.x_max, mc.points);
  for (double phase : mc.phases) {
    art.add(write_marginal_csv(art.dir(), prefix, marginal(rho, phase, xs)),
            "marginal-csv");
  }
}

DensityMatrix observed(const StateVector& psi, double eta) {
  const auto rho = DensityMatrix::pure(psi);
  return eta < 1.0 ? apply_loss(rho, LossChannel(eta)) : rho;
}

json wigner_summary(const WignerMap& w) {
  return {{"min", w.values.minCoeff()},
          {"max", w.values.maxCoeff()},
          {"integral", integrate(w)}};
}

bool run_orthogonalize(const ExperimentConfig& cfg, const StateVector& psi,
                       Artifacts& art, json& report) {
  const auto& s = cfg.scheme;
  const auto kind =
      s.op == "number" ? OperatorKind::Number : OperatorKind::Creation;
  const auto spec = OrthogonalizerSpec::measured(kind, psi);
  report["operator"] = s.op;
  report["mean_value"] = complex_json(spec.mean_value());
  StateVector out = psi;
  double tol = kOverlapTol;
  if (!s.physical) {
    out = orthogonalize(psi, spec);
  } else {
    tol = kPhysicalOverlapTol;
    HeraldModel model;
    model.phi = s.phi;
    if (kind == OperatorKind::Creation) {
      model.theta = s.theta.value_or(std::numbers::pi / 8);
      const cplx mean_a = std::conj(spec.mean_value());
      model.beta = s.beta.value_or(
          orthogonalizing_beta(mean_a, model.theta, model.phi));
      model.herald_trunc =
          s.herald_dim ? Truncation(*s.herald_dim, cfg.tail_tol)
                       : default_herald_truncation(cfg.trunc,
                                                   std::abs(model.beta),
                                                   cfg.tail_tol);
      const auto h = heralded_addition_model(psi, model);
      out = h.out;
      report["success_prob"] = h.success_prob;
    } else {
      model.theta =
          s.theta.value_or(number_scheme_angle(spec.mean_value().real()));
      model.herald_trunc = Truncation(s.herald_dim.value_or(2), cfg.tail_tol);
      const auto h = number_scheme_model(psi, model);
      out = h.out;
      report["success_prob"] = h.success_prob;
    }
    report["theta"] = model.theta;
    report["beta"] = complex_json(model.beta);
    report["herald_dim"] = model.herald_trunc.dim();
  }
  const double overlap = std::abs(inner_product(psi.normalized(), out));
  report["overlap_abs"] = overlap;
  report["overlap_tol"] = tol;
  if (cfg.input_state.kind == "coherent") {
    const auto ref = displace(cfg.input_state.alpha,
                              fock_state(1, psi.truncation()));
    report["fidelity_displaced_fock1"] = fidelity(out, ref);
  }
  art.json_file("input_state.json", to_json(psi), "state-json");
  art.json_file("output_state.json", to_json(out), "state-json");
  emit_marginals(art, "marginal_input", observed(psi, cfg.eta), cfg.marginal);
  emit_marginals(art, "marginal_output", observed(out, cfg.eta), cfg.marginal);
  return overlap < tol;
}

bool run_qubit_wigner(const ExperimentConfig& cfg, const StateVector& psi,
                      Artifacts& art, json& report) {
  const auto spec = OrthogonalizerSpec::measured(OperatorKind::Creation, psi);
  const auto perp = orthogonalize(psi, spec);
  json entries = json::array();
  bool ok = true;
  for (const cplx c : cfg.scheme.c_values) {
    const auto q = make_qubit(psi, spec, c);
    const auto parts = decompose_qubit(q, psi, perp);
    const auto rho = observed(q, cfg.eta);
    const auto w = wigner(rho, cfg.grid);
    const std::string label = c_label(c);
    write_wigner_grid(art.dir() / ("wigner_" + label + ".txt"), w);
    art.add(art.dir() / ("wigner_" + label + ".txt"), "wigner-grid");
    art.json_file("rho_" + label + ".json", to_json(rho), "density-json");
    const double weight = std::norm(parts.A) + std::norm(parts.B);
    ok = ok && std::abs(weight - 1.0) < 1e-10;
    entries.push_back({{"c", complex_json(c)},
                       {"A", complex_json(parts.A)},
                       {"B", complex_json(parts.B)},
                       {"residual", parts.residual},
                       {"wigner", wigner_summary(w)}});
  }
  report["qubits"] = std::move(entries);
  return ok;
}

bool run_number_scheme(const ExperimentConfig& cfg, const StateVector& psi,
                       Artifacts& art, json& report) {
  const auto spec = OrthogonalizerSpec::measured(OperatorKind::Number, psi);
  const double nbar = spec.mean_value().real();
  HeraldModel model;
  model.phi = cfg.scheme.phi;
  model.theta = cfg.scheme.theta.value_or(number_scheme_angle(nbar));
  model.herald_trunc =
      Truncation(cfg.scheme.herald_dim.value_or(2), cfg.tail_tol);
  const auto h = number_scheme_model(psi, model);
  const double overlap = std::abs(inner_product(psi.normalized(), h.out));
  report["nbar"] = nbar;
  report["theta"] = model.theta;
  report["shift"] = model.r() / (model.t() - model.r());
  report["success_prob"] = h.success_prob;
  report["overlap_abs"] = overlap;
  art.json_file("input_state.json", to_json(psi), "state-json");
  art.json_file("output_state.json", to_json(h.out), "state-json");
  const auto rho_in = observed(psi, cfg.eta);
  const auto rho_out = observed(h.out, cfg.eta);
  emit_marginals(art, "marginal_input", rho_in, cfg.marginal);
  emit_marginals(art, "marginal_output", rho_out, cfg.marginal);
  write_wigner_grid(art.dir() / "wigner_input.txt", wigner(rho_in, cfg.grid));
  art.add(art.dir() / "wigner_input.txt", "wigner-grid");
  write_wigner_grid(art.dir() / "wigner_output.txt",
                    wigner(rho_out, cfg.grid));
  art.add(art.dir() / "wigner_output.txt", "wigner-grid");
  // Only the tuned angle orthogonalizes.
  if (!cfg.scheme.theta) return overlap < kPhysicalOverlapTol;
  return true;
}

bool run_tomography(const ExperimentConfig& cfg, const StateVector& psi,
                    Artifacts& art, json& report) {
  StateVector target = psi;
  const auto& s = cfg.scheme;
  if (s.prepare != "input") {
    const auto spec = OrthogonalizerSpec::measured(OperatorKind::Creation, psi);
    target = s.prepare == "orthogonal" ? orthogonalize(psi, spec)
                                       : make_qubit(psi, spec, s.prepare_c);
  }
  const auto rho_true = DensityMatrix::pure(target);
  const auto samples = sample_quadratures(rho_true, cfg.sampling);
  const auto rec = maxlik_reconstruct(samples, cfg.reconstruction);
  const auto lossy = observed(target, cfg.eta);
  const double fid = fidelity(embed(rec.rho_hat, lossy.truncation()), lossy);
  bool monotone = true;
  for (std::size_t k = 1; k < rec.log_likelihood_trace.size(); ++k) {
    monotone = monotone && rec.log_likelihood_trace[k] >=
                               rec.log_likelihood_trace[k - 1] - 1e-9;
  }
  write_samples_csv(art.dir() / "samples.csv", samples);
  art.add(art.dir() / "samples.csv", "samples-csv");
  art.json_file("rho_true.json", to_json(lossy), "density-json");
  art.json_file("rho_hat.json", to_json(rec.rho_hat), "density-json");
  write_likelihood_csv(art.dir() / "likelihood.csv",
                       rec.log_likelihood_trace);
  art.add(art.dir() / "likelihood.csv", "likelihood-csv");
  report["prepare"] = s.prepare;
  report["samples"] = samples.size();
  report["iterations_used"] = rec.iterations_used;
  report["fidelity_to_lossy_truth"] = fid;
  report["likelihood_monotone"] = monotone;
  return monotone;
}

}  // namespace

std::string ValidationReport::str() const {
  if (ok()) return "OK";
  std::string out;
  for (const auto& v : violations) out += v + "\n";
  return out;
}

ValidationReport validate_config(const json& doc) {
  ValidationReport report;
  parse_impl(doc, report.violations);
  return report;
}

ValidationReport validate_config_file(const fs::path& path) {
  return validate_config(read_json_file(path));
}

ExperimentConfig parse_config(const json& doc) {
  std::vector<std::string> errs;
  auto cfg = parse_impl(doc, errs);
  if (!errs.empty()) {
    ValidationReport r{errs};
    throw PreconditionError("invalid config:\n" + r.str());
  }
  return cfg;
}

StateVector make_input_state(const ExperimentConfig& cfg) {
  const Truncation trunc(cfg.trunc, cfg.tail_tol);
  const auto& is = cfg.input_state;
  if (is.kind == "coherent") return coherent_state(is.alpha, trunc);
  if (is.kind == "fock") return fock_state(is.n, trunc);
  Eigen::VectorXcd amps(cfg.trunc);
  for (int k = 0; k < cfg.trunc; ++k) amps(k) = is.amps[k];
  return StateVector(std::move(amps), trunc).normalized();
}

DensityMatrix embed(const DensityMatrix& rho, const Truncation& target) {
  if (target.dim() < rho.dim()) {
    throw DimensionMismatch("embed target is smaller than the source");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(target.dim(), target.dim());
  m.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
  return {std::move(m), target};
}

std::string sha256_hex(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char pair[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(pair, sizeof pair, "%02x", digest[k]);
    hex += pair;
  }
  return hex;
}

RunResult run(const ExperimentConfig& cfg) {
  Artifacts art(cfg.output_dir);
  json report;
  bool passed = false;
  if (cfg.experiment == Experiment::Verify) {
    const auto rows = run_verify_battery();
    json checks = json::array();
    passed = true;
    for (const auto& r : rows) {
      checks.push_back(
          {{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      passed = passed && r.passed;
    }
    report["experiment"] = "verify";
    report["checks"] = std::move(checks);
  } else {
    const auto psi = make_input_state(cfg);
    switch (cfg.experiment) {
      case Experiment::Orthogonalize:
        report["experiment"] = "orthogonalize";
        passed = run_orthogonalize(cfg, psi, art, report);
        break;
      case Experiment::QubitWigner:
        report["experiment"] = "qubit_wigner";
        passed = run_qubit_wigner(cfg, psi, art, report);
        break;
      case Experiment::NumberScheme:
        report["experiment"] = "number_scheme";
        passed = run_number_scheme(cfg, psi, art, report);
        break;
      case Experiment::Tomography:
        report["experiment"] = "tomography";
        passed = run_tomography(cfg, psi, art, report);
        break;
      case Experiment::Verify:
        break;
    }
  }
  report["passed"] = passed;
  art.json_file("report.json", report, "report-json");

  json manifest = {
      {"files", art.manifest_files()},
      {"config_echo", cfg.echo},
      {"versions",
       {{"cvortho", kVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json",
         std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
             std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
             std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
  write_json_file(art.dir() / "manifest.json", manifest);
  return {std::move(manifest), std::move(report), passed};
}

}  // namespace cvortho
