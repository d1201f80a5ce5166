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

// Config-driven experiment runner. A run reads one JSON document, executes
// one experiment, writes its artifacts under the output directory and lists
// every artifact with its SHA-256 in manifest.json.
//
// Defaults (any key may be omitted):
//
//   key                              default
//   experiment                       (required) orthogonalize | qubit_wigner |
//                                    number_scheme | tomography | verify
//   input_state.kind                 "coherent"  (coherent | fock | custom)
//   input_state.alpha                1.0         (number or [re, im])
//   input_state.n                    0
//   input_state.amps                 -           ([[re, im], ...], trunc long)
//   scheme.operator                  "creation"  (creation | number)
//   scheme.physical                  false
//   scheme.theta                     pi/8 (addition); solved from nbar (number)
//   scheme.beta                      solved so the scheme orthogonalizes
//   scheme.phi                       0.0
//   scheme.herald_dim                max(min(trunc, 12), tail-safe dim for beta)
//   scheme.c                         [1, -1, [0, 1], [0, -1]]
//   scheme.prepare                   "input"     (input | orthogonal | qubit)
//   scheme.prepare_c                 1.0
//   trunc                            40
//   tail_tol                         1e-8
//   eta                              1.0
//   grid.{x_min,x_max,p_min,p_max}   -6, 6, -6, 6
//   grid.{nx,np}                     241, 241
//   marginal.phases                  [0.0]
//   marginal.{x_min,x_max,points}    -6, 6, 601
//   sampling.phases                  10 (count of equally spaced phases, or a list)
//   sampling.samples_per_phase       50000
//   sampling.seed                    12345
//   reconstruction.dim               15
//   reconstruction.max_iter          2000
//   reconstruction.tol               1e-10
//   reconstruction.bin_width         0.01
//   output_dir                       "cvortho_out"

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cvortho/fock.hpp"
#include "cvortho/homodyne.hpp"
#include "cvortho/phase_space.hpp"

namespace cvortho {

inline constexpr const char* kVersion = "0.1.0";

enum class Experiment {
  Orthogonalize,
  QubitWigner,
  NumberScheme,
  Tomography,
  Verify
};

struct InputStateConfig {
  std::string kind = "coherent";
  cplx alpha{1.0, 0.0};
  int n = 0;
  std::vector<cplx> amps;
};

struct SchemeConfig {
  std::string op = "creation";
  bool physical = false;
  std::optional<double> theta;
  std::optional<cplx> beta;
  double phi = 0.0;
  std::optional<int> herald_dim;
  std::vector<cplx> c_values{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  std::string prepare = "input";
  cplx prepare_c{1.0, 0.0};
};

struct MarginalConfig {
  std::vector<double> phases{0.0};
  double x_min = -6.0;
  double x_max = 6.0;
  int points = 601;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Verify;
  InputStateConfig input_state;
  SchemeConfig scheme;
  int trunc = 40;
  double tail_tol = kDefaultTailTol;
  double eta = 1.0;
  PhaseGrid grid;
  MarginalConfig marginal;
  SamplingPlan sampling{SamplingPlan::equally_spaced(10), 50000, 12345, 1.0};
  ReconstructionOptions reconstruction;
  std::filesystem::path output_dir = "cvortho_out";
  /// The document as read, with command-line overrides applied.
  nlohmann::json echo;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  /// "OK" or one violation per line.
  std::string str() const;
};

/// Schema and range check of a config document; every violated field is
/// listed, nothing is executed.
ValidationReport validate_config(const nlohmann::json& doc);

/// Throws DataError when the file cannot be read or parsed.
ValidationReport validate_config_file(const std::filesystem::path& path);

/// Parses a validated document. Throws PreconditionError carrying the
/// validation report otherwise.
ExperimentConfig parse_config(const nlohmann::json& doc);

struct RunResult {
  nlohmann::json manifest;
  nlohmann::json report;
  bool passed;
};

/// Executes the configured experiment and writes manifest.json last.
RunResult run(const ExperimentConfig& config);

std::string sha256_hex(const std::filesystem::path& path);

/// Builds the input state named by the config at its truncation.
StateVector make_input_state(const ExperimentConfig& config);

/// rho zero-padded onto a larger truncation.
DensityMatrix embed(const DensityMatrix& rho, const Truncation& target);

}  // namespace cvortho
