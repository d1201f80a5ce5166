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

#include "cvortho/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cvortho/phase_space.hpp"

namespace cvortho {
namespace {

constexpr double kProjectorFloor = 1e-250;
constexpr double kMinDilution = 1e-9;

double unit_uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

/// Projectors of one phase: rows of `h` are Hermite vectors at the bin
/// centres, `counts` their multiplicities.
struct PhaseGroup {
  double phase;
  Eigen::MatrixXd h;
  Eigen::VectorXd counts;
  Eigen::VectorXcd rot;  // e^{i n phase}
};

struct Evaluation {
  double log_likelihood;
  Eigen::MatrixXcd r;
};

Evaluation evaluate(const std::vector<PhaseGroup>& groups,
                    const Eigen::MatrixXcd& rho, double total) {
  const Eigen::Index dim = rho.rows();
  Evaluation ev{0.0, Eigen::MatrixXcd::Zero(dim, dim)};
  for (const auto& g : groups) {
    // <x_phi|rho|x_phi> = h^T Re(R^dag rho R) h for real h.
    const Eigen::MatrixXcd rotated =
        g.rot.asDiagonal().inverse() * rho * g.rot.asDiagonal();
    const Eigen::MatrixXd s = rotated.real();
    const Eigen::VectorXd probs = (g.h * s).cwiseProduct(g.h).rowwise().sum();
    Eigen::VectorXd scale(probs.size());
    for (Eigen::Index b = 0; b < probs.size(); ++b) {
      ev.log_likelihood += g.counts(b) * std::log(probs(b));
      scale(b) = g.counts(b) / probs(b);
    }
    const Eigen::MatrixXd middle = g.h.transpose() * scale.asDiagonal() * g.h;
    ev.r += g.rot.asDiagonal() * middle.cast<cplx>() *
            g.rot.conjugate().asDiagonal();
  }
  ev.r /= total;
  return ev;
}

Eigen::MatrixXcd normalized_step(const Eigen::MatrixXcd& left,
                                 const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd next = left * rho * left.adjoint();
  next = 0.5 * (next + next.adjoint()).eval();
  next /= next.trace().real();
  return next;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> SamplingPlan::equally_spaced(int count) {
  if (count < 1) throw PreconditionError("need at least one phase");
  std::vector<double> phases(count);
  for (int k = 0; k < count; ++k) phases[k] = k * std::numbers::pi / count;
  return phases;
}

void SamplingPlan::validate() const {
  if (phases.empty()) throw PreconditionError("sampling plan has no phases");
  if (std::set<double>(phases.begin(), phases.end()).size() != phases.size()) {
    throw PreconditionError("sampling plan phases must be distinct");
  }
  if (samples_per_phase < 1) {
    throw PreconditionError("samples_per_phase must be positive");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("sampling eta must lie in [0, 1]");
  }
}

std::vector<QuadratureSample> sample_quadratures(const DensityMatrix& rho,
                                                 const SamplingPlan& plan) {
  plan.validate();
  const DensityMatrix lossy =
      plan.eta < 1.0 ? apply_loss(rho, LossChannel(plan.eta)) : rho;
  const auto xs = linspace(-kSamplingGridHalfWidth, kSamplingGridHalfWidth,
                           kSamplingGridPoints);
  std::vector<QuadratureSample> out;
  out.reserve(plan.phases.size() * std::size_t(plan.samples_per_phase));
  for (std::size_t k = 0; k < plan.phases.size(); ++k) {
    const double phase = plan.phases[k];
    const auto q = marginal(lossy, phase, xs);
    std::vector<double> cdf(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      cdf[i] = cdf[i - 1] +
               0.5 * (q.density[i] + q.density[i - 1]) * (xs[i] - xs[i - 1]);
    }
    const double total = cdf.back();
    for (double& c : cdf) c /= total;
    std::mt19937_64 rng(plan.seed + k);
    for (int s = 0; s < plan.samples_per_phase; ++s) {
      const double u = unit_uniform(rng);
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      std::size_t hi = std::clamp<std::size_t>(it - cdf.begin(), 1,
                                               cdf.size() - 1);
      const std::size_t lo = hi - 1;
      const double span = cdf[hi] - cdf[lo];
      const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
      out.push_back({phase, xs[lo] + frac * (xs[hi] - xs[lo])});
    }
  }
  return out;
}

ReconstructionResult maxlik_reconstruct(
    const std::vector<QuadratureSample>& samples,
    const ReconstructionOptions& options) {
  if (samples.empty()) throw PreconditionError("no quadrature samples");
  if (options.dim < 2 || options.dim > 30) {
    throw PreconditionError("reconstruction dim must lie in [2, 30]");
  }
  if (options.max_iter < 0 || !(options.bin_width >= 0.0)) {
    throw PreconditionError("invalid reconstruction options");
  }
  const int dim = options.dim;

  std::map<double, std::map<long long, double>> binned;
  std::map<double, std::vector<double>> exact;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto& s = samples[j];
    const auto h = hermite_functions({s.x}, dim);
    if (!std::isfinite(s.x) || !std::isfinite(s.phase) ||
        h.squaredNorm() < kProjectorFloor) {
      throw DataError("sample " + std::to_string(j) + " (phase " +
                      num(s.phase) + ", x " + num(s.x) +
                      ") lies outside the numerical support");
    }
    if (options.bin_width > 0.0) {
      binned[s.phase][std::llround(s.x / options.bin_width)] += 1.0;
    } else {
      exact[s.phase].push_back(s.x);
    }
  }

  std::vector<PhaseGroup> groups;
  auto add_group = [&](double phase, const std::vector<double>& xs,
                       Eigen::VectorXd counts) {
    PhaseGroup g{phase, hermite_functions(xs, dim), std::move(counts),
                 Eigen::VectorXcd(dim)};
    for (int n = 0; n < dim; ++n) g.rot(n) = std::polar(1.0, n * phase);
    groups.push_back(std::move(g));
  };
  for (const auto& [phase, bins] : binned) {
    std::vector<double> centres;
    Eigen::VectorXd counts(static_cast<Eigen::Index>(bins.size()));
    Eigen::Index b = 0;
    for (const auto& [idx, count] : bins) {
      centres.push_back(double(idx) * options.bin_width);
      counts(b++) = count;
    }
    add_group(phase, centres, std::move(counts));
  }
  for (const auto& [phase, xs] : exact) {
    add_group(phase, xs,
              Eigen::VectorXd::Ones(static_cast<Eigen::Index>(xs.size())));
  }
  const double total = double(samples.size());

  Eigen::MatrixXcd rho =
      Eigen::MatrixXcd::Identity(dim, dim) / double(dim);
  Evaluation current = evaluate(groups, rho, total);
  std::vector<double> trace{current.log_likelihood};
  int used = 0;
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dim, dim);
  for (int it = 0; it < options.max_iter; ++it) {
    double eps = 0.0;
    Eigen::MatrixXcd candidate = normalized_step(current.r, rho);
    Evaluation next = evaluate(groups, candidate, total);
    if (!std::isfinite(next.log_likelihood) ||
        next.log_likelihood < current.log_likelihood) {
      bool accepted = false;
      for (eps = 0.5; eps >= kMinDilution; eps *= 0.5) {
        candidate = normalized_step(eye + eps * current.r, rho);
        next = evaluate(groups, candidate, total);
        if (std::isfinite(next.log_likelihood) &&
            next.log_likelihood >= current.log_likelihood) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    const double gain = next.log_likelihood - current.log_likelihood;
    rho = std::move(candidate);
    current = std::move(next);
    trace.push_back(current.log_likelihood);
    ++used;
    DensityMatrix(rho, Truncation(dim));  // invariant check on every iterate
    if (gain < options.tol) break;
  }
  return {DensityMatrix(rho, Truncation(dim)), std::move(trace), used};
}

ReconstructionResult maxlik_reconstruct(
    const std::vector<QuadratureSample>& samples, int dim, int max_iter,
    double tol) {
  ReconstructionOptions options;
  options.dim = dim;
  options.max_iter = max_iter;
  options.tol = tol;
  return maxlik_reconstruct(samples, options);
}

double ks_distance(std::vector<double> samples, const std::vector<double>& xs,
                   const std::vector<double>& cdf) {
  if (samples.empty()) throw PreconditionError("ks_distance of no samples");
  std::sort(samples.begin(), samples.end());
  auto model = [&](double x) {
    if (x <= xs.front()) return cdf.front();
    if (x >= xs.back()) return cdf.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = it - xs.begin(), lo = hi - 1;
    const double f = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return cdf[lo] + f * (cdf[hi] - cdf[lo]);
  };
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = model(samples[i]);
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return d;
}

void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<QuadratureSample>& samples) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "phase,x\n";
  char buf[96];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.10f,%.17g\n", s.phase, s.x);
    out << buf;
  }
}

std::vector<QuadratureSample> read_samples_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "phase,x") throw DataError(path.string() + ": bad header");
  std::vector<QuadratureSample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw DataError(path.string() + ": malformed row '" + line + "'");
    }
    try {
      out.push_back({std::stod(line.substr(0, comma)),
                     std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw DataError(path.string() + ": malformed row '" + line + "'");
    }
  }
  return out;
}

void write_likelihood_csv(const std::filesystem::path& path,
                          const std::vector<double>& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "iteration,log_likelihood\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << k << ',' << num(trace[k]) << '\n';
  }
}

}  // namespace cvortho
