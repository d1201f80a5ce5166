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

#include "cvortho/phase_space.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cvortho/errors.hpp"

namespace cvortho {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Wigner value at gamma = (x + ip)/sqrt2 using scratch storage of size dim.
double wigner_kernel_sum(const Eigen::MatrixXcd& rho, double x, double p,
                         Eigen::VectorXcd& w) {
  const int dim = static_cast<int>(rho.rows());
  const cplx a(x / std::sqrt(2.0), p / std::sqrt(2.0));
  const cplx two_a = 2.0 * a;
  const cplx two_a_conj = std::conj(two_a);
  w(0) = std::exp(-2.0 * std::norm(a)) / kPi;
  double total = rho(0, 0).real() * w(0).real();
  for (int n = 1; n < dim; ++n) {
    w(n) = two_a * w(n - 1) / std::sqrt(double(n));
    total += 2.0 * (rho(0, n) * w(n)).real();
  }
  for (int m = 1; m < dim; ++m) {
    const double sm = std::sqrt(double(m));
    cplx prev = w(m);
    w(m) = (two_a_conj * prev - sm * w(m - 1)) / sm;
    total += (rho(m, m) * w(m)).real();
    for (int n = m + 1; n < dim; ++n) {
      const cplx next = (two_a * w(n - 1) - sm * prev) / std::sqrt(double(n));
      prev = w(n);
      w(n) = next;
      total += 2.0 * (rho(m, n) * w(n)).real();
    }
  }
  return total;
}

}  // namespace

void PhaseGrid::validate() const {
  if (!(x_min < x_max)) throw DomainError("grid needs x_min < x_max");
  if (!(p_min < p_max)) throw DomainError("grid needs p_min < p_max");
  if (nx < 2 || np < 2) throw DomainError("grid needs nx, np >= 2");
}

LossChannel::LossChannel(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("loss efficiency eta must lie in [0, 1]");
  }
}

Eigen::MatrixXd hermite_functions(const std::vector<double>& xs, int count) {
  if (count < 1) throw DomainError("hermite_functions needs count >= 1");
  const auto n_pts = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd h(n_pts, count);
  const double norm0 = std::pow(kPi, -0.25);
  for (Eigen::Index k = 0; k < n_pts; ++k) {
    const double x = xs[k];
    h(k, 0) = norm0 * std::exp(-0.5 * x * x);
    if (count > 1) h(k, 1) = std::sqrt(2.0) * x * h(k, 0);
    for (int n = 1; n + 1 < count; ++n) {
      h(k, n + 1) = std::sqrt(2.0 / (n + 1)) * x * h(k, n) -
                    std::sqrt(double(n) / (n + 1)) * h(k, n - 1);
    }
  }
  return h;
}

double wigner_at(const DensityMatrix& rho, double x, double p) {
  Eigen::VectorXcd scratch(rho.dim());
  return wigner_kernel_sum(rho.matrix(), x, p, scratch);
}

double displaced_parity(const DensityMatrix& rho, double x, double p) {
  const cplx g(x / std::sqrt(2.0), p / std::sqrt(2.0));
  const double reach = std::sqrt(double(rho.dim())) + std::abs(g);
  const int work_dim =
      rho.dim() + static_cast<int>(std::ceil(reach * reach + 12.0 * reach));
  const Truncation work(work_dim, 1e-15);
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(work_dim, work_dim);
  big.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
  const Eigen::MatrixXcd d = displacement_op(g, work).matrix();
  const Eigen::MatrixXcd shifted = d.adjoint() * big * d;
  double total = 0.0;
  for (int n = 0; n < work_dim; ++n) {
    total += (n % 2 == 0 ? 1.0 : -1.0) * shifted(n, n).real();
  }
  return total / kPi;
}

WignerMap wigner(const DensityMatrix& rho, const PhaseGrid& grid) {
  grid.validate();
  WignerMap out{grid, Eigen::MatrixXd(grid.nx, grid.np)};
  Eigen::VectorXcd scratch(rho.dim());
  for (int j = 0; j < grid.np; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      out.values(i, j) =
          wigner_kernel_sum(rho.matrix(), grid.x(i), grid.p(j), scratch);
    }
  }
  return out;
}

double integrate(const WignerMap& w) {
  const auto& g = w.grid;
  double total = 0.0;
  for (int j = 0; j < g.np; ++j) {
    const double wj = (j == 0 || j == g.np - 1) ? 0.5 : 1.0;
    for (int i = 0; i < g.nx; ++i) {
      const double wi = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
      total += wi * wj * w.values(i, j);
    }
  }
  return total * g.dx() * g.dp();
}

QuadratureDistribution marginal(const DensityMatrix& rho, double phase,
                                const std::vector<double>& xs) {
  const int dim = rho.dim();
  const Eigen::MatrixXd h = hermite_functions(xs, dim);
  Eigen::VectorXcd rot(dim);
  for (int n = 0; n < dim; ++n) rot(n) = std::polar(1.0, n * phase);
  QuadratureDistribution out{phase, xs, std::vector<double>(xs.size())};
  Eigen::VectorXcd w(dim);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    w = h.row(static_cast<Eigen::Index>(k)).transpose().cast<cplx>()
            .cwiseProduct(rot);
    out.density[k] = std::max(0.0, w.dot(rho.matrix() * w).real());
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) throw DomainError("linspace needs at least two points");
  std::vector<double> xs(count);
  for (int k = 0; k < count; ++k) xs[k] = lo + k * (hi - lo) / (count - 1);
  return xs;
}

double integrate(const QuadratureDistribution& q) {
  double total = 0.0;
  for (std::size_t k = 1; k < q.xs.size(); ++k) {
    total += 0.5 * (q.density[k] + q.density[k - 1]) * (q.xs[k] - q.xs[k - 1]);
  }
  return total;
}

DensityMatrix apply_loss(const DensityMatrix& rho, const LossChannel& channel) {
  const int dim = rho.dim();
  const double eta = channel.eta();
  auto log_binom = [](int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
           std::lgamma(n - k + 1.0);
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      cplx acc = 0.0;
      for (int k = 0; m + k < dim && n + k < dim; ++k) {
        const double weight =
            std::exp(0.5 * (log_binom(m + k, k) + log_binom(n + k, k))) *
            std::pow(eta, 0.5 * (m + n)) * std::pow(1.0 - eta, k);
        acc += weight * rho(m + k, n + k);
      }
      out(m, n) = acc;
    }
  }
  return {std::move(out), rho.truncation()};
}

void write_wigner_grid(const std::filesystem::path& path, const WignerMap& w) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  const auto& g = w.grid;
  out << "# " << num(g.x_min) << ' ' << num(g.x_max) << ' ' << g.nx << '\n'
      << "# " << num(g.p_min) << ' ' << num(g.p_max) << ' ' << g.np << '\n'
      << "# convention " << kWignerConvention << '\n';
  for (int j = 0; j < g.np; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) out << ' ';
      out << num(w.values(i, j));
    }
    out << '\n';
  }
}

WignerMap read_wigner_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  auto header = [&](double& lo, double& hi, int& n) {
    std::string line;
    std::getline(in, line);
    std::istringstream ss(line);
    char hash = 0;
    if (!(ss >> hash >> lo >> hi >> n) || hash != '#') {
      throw DataError(path.string() + ": malformed grid header");
    }
  };
  PhaseGrid g;
  header(g.x_min, g.x_max, g.nx);
  header(g.p_min, g.p_max, g.np);
  std::string convention;
  std::getline(in, convention);
  g.validate();
  WignerMap w{g, Eigen::MatrixXd(g.nx, g.np)};
  for (int j = 0; j < g.np; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!(in >> w.values(i, j))) {
        throw DataError(path.string() + ": truncated grid body");
      }
    }
  }
  return w;
}

std::filesystem::path write_marginal_csv(const std::filesystem::path& dir,
                                         const std::string& prefix,
                                         const QuadratureDistribution& q) {
  const auto path = dir / (prefix + "_phase_" + fixed4(q.phase) + ".csv");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "x,density\n";
  for (std::size_t k = 0; k < q.xs.size(); ++k) {
    out << num(q.xs[k]) << ',' << num(q.density[k]) << '\n';
  }
  return path;
}

}  // namespace cvortho
