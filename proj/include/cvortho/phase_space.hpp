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

// Phase-space observables in the convention x = (a + a^dag)/sqrt(2),
// p = (a - a^dag)/(i sqrt(2)), [x, p] = i, so the vacuum Wigner function is
// exp(-(x^2 + p^2))/pi and coherent-state quadratures have variance 1/2.

#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

#include "cvortho/fock.hpp"

namespace cvortho {

struct PhaseGrid {
  double x_min = -6.0;
  double x_max = 6.0;
  double p_min = -6.0;
  double p_max = 6.0;
  int nx = 241;
  int np = 241;

  /// Throws DomainError unless x_min < x_max, p_min < p_max, nx, np >= 2.
  void validate() const;
  double x(int i) const { return x_min + i * (x_max - x_min) / (nx - 1); }
  double p(int j) const { return p_min + j * (p_max - p_min) / (np - 1); }
  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
};

inline constexpr const char* kWignerConvention = "x=(a+a†)/sqrt2";

struct WignerMap {
  PhaseGrid grid;
  /// values(i, j) = W(grid.x(i), grid.p(j)).
  Eigen::MatrixXd values;
};

struct QuadratureDistribution {
  double phase;
  std::vector<double> xs;
  std::vector<double> density;
};

class LossChannel {
 public:
  explicit LossChannel(double eta);
  double eta() const noexcept { return eta_; }

 private:
  double eta_;
};

/// Normalized Hermite functions psi_n(x), n < count, by the upward
/// recurrence on the normalized functions. Row k holds the values at xs[k].
Eigen::MatrixXd hermite_functions(const std::vector<double>& xs, int count);

/// Single-point Wigner value from the normalized |m><n| kernel recurrence.
double wigner_at(const DensityMatrix& rho, double x, double p);

/// Displaced-parity form (1/pi) Tr[rho D(g) Pi D(g)^dag], g = (x + ip)/sqrt2,
/// with D from displacement_op on a working space enlarged until D(-g)
/// keeps rho's support away from the top level. Independent of wigner_at;
/// used for cross-checks.
double displaced_parity(const DensityMatrix& rho, double x, double p);

WignerMap wigner(const DensityMatrix& rho, const PhaseGrid& grid = {});

/// 2D trapezoidal integral of the map over its grid.
double integrate(const WignerMap& w);

/// Quadrature density <x_phi|rho|x_phi> with <n|x_phi> = psi_n(x) e^{i n phi}.
QuadratureDistribution marginal(const DensityMatrix& rho, double phase,
                                const std::vector<double>& xs);

/// Uniform grid of count points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int count);

/// 1D trapezoidal integral of a sampled density.
double integrate(const QuadratureDistribution& q);

/// Generalized Bernoulli loss with efficiency eta.
DensityMatrix apply_loss(const DensityMatrix& rho, const LossChannel& channel);

/// Plain-text grid: three '#' header lines then np rows of nx values, one
/// row per fixed p in ascending order.
void write_wigner_grid(const std::filesystem::path& path, const WignerMap& w);
WignerMap read_wigner_grid(const std::filesystem::path& path);

/// "<prefix>_phase_<phase to 4 decimals>.csv" inside dir, columns x,density.
std::filesystem::path write_marginal_csv(const std::filesystem::path& dir,
                                         const std::string& prefix,
                                         const QuadratureDistribution& q);

}  // namespace cvortho
