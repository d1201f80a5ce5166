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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "cvortho/homodyne.hpp"
#include "cvortho/schemes.hpp"

namespace cvortho {
namespace {

constexpr double kPi = std::numbers::pi;

// Exact CDF of the single-photon quadrature density 2x^2 e^{-x^2}/sqrt(pi).
double fock1_cdf(double x) {
  return 0.5 * (1 + std::erf(x)) - x * std::exp(-x * x) / std::sqrt(kPi);
}

double ks_against(std::vector<double> xs, double (*cdf)(double)) {
  std::sort(xs.begin(), xs.end());
  const double n = xs.size();
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
  }
  return d;
}

std::vector<double> values_at(const std::vector<QuadratureSample>& s,
                              double phase) {
  std::vector<double> out;
  for (const auto& q : s)
    if (q.phase == phase) out.push_back(q.x);
  return out;
}

TEST(SamplingPlan, EquallySpacedAndValidation) {
  const auto ph = SamplingPlan::equally_spaced(4);
  ASSERT_EQ(ph.size(), 4u);
  EXPECT_DOUBLE_EQ(ph[1], kPi / 4);
  EXPECT_THROW((SamplingPlan{{}, 10, 0, 1.0}.validate()), PreconditionError);
  EXPECT_THROW((SamplingPlan{{0.0, 0.0}, 10, 0, 1.0}.validate()),
               PreconditionError);
  EXPECT_THROW((SamplingPlan{{0.0}, 0, 0, 1.0}.validate()), PreconditionError);
  EXPECT_THROW((SamplingPlan{{0.0}, 10, 0, 1.5}.validate()), DomainError);
}

TEST(Sampling, DeterministicForFixedSeed) {
  const auto rho = DensityMatrix::pure(coherent_state(cplx(1.0), Truncation(25)));
  SamplingPlan plan{SamplingPlan::equally_spaced(3), 1000, 77, 1.0};
  const auto a = sample_quadratures(rho, plan);
  const auto b = sample_quadratures(rho, plan);
  ASSERT_EQ(a.size(), 3000u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].phase, b[i].phase);
  }
  plan.seed = 78;
  const auto c = sample_quadratures(rho, plan);
  EXPECT_NE(a[0].x, c[0].x);
}

TEST(Sampling, CoherentMeanWithinStatisticalBound) {
  const cplx alpha(1.0, 0.5);
  const auto rho = DensityMatrix::pure(coherent_state(alpha, Truncation(30)));
  const int n = 50000;
  SamplingPlan plan{{0.0, kPi / 2}, n, 5, 1.0};
  const auto s = sample_quadratures(rho, plan);
  for (double phi : plan.phases) {
    const auto xs = values_at(s, phi);
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    const double mu = std::sqrt(2.0) * (alpha * std::polar(1.0, -phi)).real();
    EXPECT_LT(std::abs(mean - mu), 5 * std::sqrt(0.5 / n)) << "phase " << phi;
  }
}

TEST(Sampling, SinglePhotonKolmogorovSmirnov) {
  const auto rho = DensityMatrix::pure(fock_state(1, Truncation(10)));
  SamplingPlan plan{{0.0, 1.0}, 50000, 31, 1.0};
  const auto s = sample_quadratures(rho, plan);
  for (double phi : plan.phases) {
    EXPECT_LT(ks_against(values_at(s, phi), fock1_cdf), 0.01);
  }
}

TEST(Sampling, LossIsAppliedBeforeSampling) {
  // Lossy single photon at eta = 0.5 has variance 1/2 + eta = 1.
  const auto rho = DensityMatrix::pure(fock_state(1, Truncation(10)));
  SamplingPlan plan{{0.0}, 50000, 3, 0.5};
  const auto xs = values_at(sample_quadratures(rho, plan), 0.0);
  double m2 = 0.0;
  for (double x : xs) m2 += x * x;
  EXPECT_NEAR(m2 / xs.size(), 1.0, 0.03);
}

TEST(KsDistance, TabulatedCdf) {
  std::vector<double> grid{0.0, 1.0};
  std::vector<double> cdf{0.0, 1.0};
  EXPECT_NEAR(ks_distance({0.5}, grid, cdf), 0.5, 1e-15);
  EXPECT_NEAR(ks_distance({0.25, 0.75}, grid, cdf), 0.25, 1e-15);
}

TEST(MaxLik, RecoversVacuum) {
  const auto rho = DensityMatrix::pure(fock_state(0, Truncation(15)));
  const auto s = sample_quadratures(
      rho, {SamplingPlan::equally_spaced(10), 5000, 1, 1.0});
  const auto res = maxlik_reconstruct(s, ReconstructionOptions{});
  EXPECT_GE(fidelity(res.rho_hat, fock_state(0, Truncation(15))), 0.99);
}

TEST(MaxLik, RecoversBalancedQubit) {
  const Truncation t(15);
  const auto psi = coherent_state(cplx(1.0), t);
  const auto q = make_qubit(psi, OrthogonalizerSpec::creation(cplx(1.0)), 1.0);
  const auto s = sample_quadratures(
      DensityMatrix::pure(q), {SamplingPlan::equally_spaced(10), 5000, 2, 1.0});
  const auto res = maxlik_reconstruct(s, 15, 2000, 1e-10);
  EXPECT_GE(fidelity(res.rho_hat, q), 0.98);
  const auto& tr = res.log_likelihood_trace;
  ASSERT_GE(tr.size(), 2u);
  for (std::size_t i = 1; i < tr.size(); ++i) EXPECT_GE(tr[i], tr[i - 1]);
  EXPECT_LE(res.iterations_used, 2000);
}

TEST(MaxLik, ExactAndBinnedEstimatorsAgree) {
  const auto rho = DensityMatrix::pure(fock_state(1, Truncation(6)));
  const auto s = sample_quadratures(
      rho, {SamplingPlan::equally_spaced(4), 400, 9, 1.0});
  ReconstructionOptions exact{6, 500, 1e-10, 0.0};
  ReconstructionOptions binned{6, 500, 1e-10, 0.01};
  const auto a = maxlik_reconstruct(s, exact);
  const auto b = maxlik_reconstruct(s, binned);
  EXPECT_GT(fidelity(a.rho_hat, b.rho_hat), 0.999);
}

TEST(MaxLik, RejectsBadInput) {
  EXPECT_THROW(maxlik_reconstruct({}, ReconstructionOptions{}), PreconditionError);
  std::vector<QuadratureSample> s{{0.0, 0.1}, {0.0, 1e3}};
  try {
    maxlik_reconstruct(s, ReconstructionOptions{});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("sample 1"), std::string::npos);
  }
  std::vector<QuadratureSample> nan{{0.0, std::nan("")}};
  EXPECT_THROW(maxlik_reconstruct(nan, ReconstructionOptions{}), DataError);
  EXPECT_THROW(maxlik_reconstruct({{0.0, 0.1}}, 1, 10, 1e-10),
               PreconditionError);
  EXPECT_THROW(maxlik_reconstruct({{0.0, 0.1}}, 31, 10, 1e-10),
               PreconditionError);
}

TEST(SamplesCsv, RoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "cvortho_hd_csv";
  std::filesystem::create_directories(dir);
  std::vector<QuadratureSample> s{{0.0, -1.25}, {kPi / 3, 0.1 + 0.2}};
  write_samples_csv(dir / "s.csv", s);
  const auto back = read_samples_csv(dir / "s.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].x, s[1].x);
  EXPECT_NEAR(back[1].phase, s[1].phase, 1e-10);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace cvortho
