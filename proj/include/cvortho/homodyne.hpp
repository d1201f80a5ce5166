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

// Simulated homodyne acquisition and iterative maximum-likelihood
// reconstruction. Projectors use the same Hermite-function kernel as
// `marginal`, so sampling and estimation share one quadrature convention.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cvortho/fock.hpp"

namespace cvortho {

struct QuadratureSample {
  double phase;
  double x;
};

struct SamplingPlan {
  std::vector<double> phases;
  int samples_per_phase = 50000;
  std::uint64_t seed = 0;
  double eta = 1.0;

  /// count phases k*pi/count, k = 0..count-1.
  static std::vector<double> equally_spaced(int count);
  /// Throws PreconditionError on an empty/duplicate phase list or a
  /// non-positive sample count, DomainError on eta outside [0, 1].
  void validate() const;
};

inline constexpr int kSamplingGridPoints = 4001;
inline constexpr double kSamplingGridHalfWidth = 8.0;

/// Per phase k, draws plan.samples_per_phase values by inverse CDF of the
/// marginal of apply_loss(rho, eta) tabulated on 4001 points over [-8, 8]
/// with linear interpolation. Phase k uses an mt19937_64 stream seeded with
/// plan.seed + k. Output is grouped by phase in plan order.
std::vector<QuadratureSample> sample_quadratures(const DensityMatrix& rho,
                                                 const SamplingPlan& plan);

struct ReconstructionOptions {
  int dim = 15;
  int max_iter = 2000;
  /// Stop once one iteration gains less log-likelihood than this.
  double tol = 1e-10;
  /// Samples of one phase are grouped into bins of this width and each bin
  /// contributes its centre projector weighted by its count. 0 keeps one
  /// projector per sample.
  double bin_width = 0.01;
};

struct ReconstructionResult {
  DensityMatrix rho_hat;
  /// Log-likelihood of the starting point followed by one entry per
  /// accepted iteration; nondecreasing.
  std::vector<double> log_likelihood_trace;
  int iterations_used;
};

/// Iterates rho <- N[R rho R], R = (1/K) sum_j Pi_j / Tr(rho Pi_j), from the
/// maximally mixed state. When a full step would lower the likelihood the
/// step is diluted to (1 + eps R) rho (1 + eps R) with eps halved until it
/// does not.
///
/// Throws PreconditionError for empty samples or dim outside [2, 30], and
/// DataError naming the first sample whose projector vanishes numerically.
ReconstructionResult maxlik_reconstruct(
    const std::vector<QuadratureSample>& samples,
    const ReconstructionOptions& options);

ReconstructionResult maxlik_reconstruct(
    const std::vector<QuadratureSample>& samples, int dim, int max_iter,
    double tol);

/// Kolmogorov-Smirnov distance between samples and a tabulated CDF given on
/// an increasing grid (linear interpolation, clamped at the ends).
double ks_distance(std::vector<double> samples, const std::vector<double>& xs,
                   const std::vector<double>& cdf);

/// CSV with header "phase,x"; phases written with 10 decimals.
void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<QuadratureSample>& samples);
std::vector<QuadratureSample> read_samples_csv(
    const std::filesystem::path& path);

/// CSV with header "iteration,log_likelihood".
void write_likelihood_csv(const std::filesystem::path& path,
                          const std::vector<double>& trace);

}  // namespace cvortho
