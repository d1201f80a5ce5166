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

// Truncated Fock-space linear algebra for one or a few bosonic modes.
//
// Everything here is templated on the real scalar type; the rest of the
// library uses the double instantiations aliased at the bottom of the file.
// Multi-mode amplitudes are flattened mode-1 major: for modes of sizes
// (N1, N2, ..., Nk) the amplitude of |n1, n2, ..., nk> sits at
//   ((n1 * N2 + n2) * N3 + n3) ... * Nk + nk.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cvortho/errors.hpp"

namespace cvortho {

inline constexpr double kDefaultTailTol = 1e-8;

/// Norm below which a conditional (heralded or orthogonalized) state is
/// treated as the zero vector.
inline constexpr double kZeroNorm = 1e-12;

/// Fock basis |0>..|dim-1> plus the admissible probability weight on the top
/// level.
class Truncation {
 public:
  explicit Truncation(int dim, double tail_tol = kDefaultTailTol)
      : dim_(dim), tail_tol_(tail_tol) {
    if (dim < 2) {
      throw DomainError("truncation dim must be >= 2, got " +
                        std::to_string(dim));
    }
    if (!(tail_tol >= 0.0)) {
      throw DomainError("truncation tail_tol must be >= 0");
    }
  }

  int dim() const noexcept { return dim_; }
  double tail_tol() const noexcept { return tail_tol_; }

  friend bool operator==(const Truncation&, const Truncation&) = default;

 private:
  int dim_;
  double tail_tol_;
};

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using KetVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using OperatorMatrix =
    Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

inline void require_same(const Truncation& a, const Truncation& b,
                         const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(what) + ": dim " +
                            std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  }
}

/// Poisson probability mass beyond level dim-1 for the given mean.
inline double poisson_tail(double mean, int dim) {
  if (mean <= 0.0) return 0.0;
  double tail = 0.0;
  for (int n = dim; n < dim + 10000; ++n) {
    const double term =
        std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    tail += term;
    if (n > mean && term < 1e-300) break;
    if (n > mean && term < tail * 1e-17) break;
  }
  return tail;
}

/// Smallest dim whose Poisson tail at the given mean is within tol.
inline int coherent_required_dim(double mean, double tol) {
  int dim = 2;
  while (poisson_tail(mean, dim) > tol) ++dim;
  return dim;
}

}  // namespace detail

template <typename Real = double>
class BasicStateVector {
 public:
  using Scalar = Complex<Real>;

  BasicStateVector(KetVector<Real> amps, Truncation trunc)
      : amps_(std::move(amps)), trunc_(trunc) {
    if (amps_.size() != trunc_.dim()) {
      throw DimensionMismatch("state has " + std::to_string(amps_.size()) +
                              " amplitudes, truncation dim is " +
                              std::to_string(trunc_.dim()));
    }
  }

  const KetVector<Real>& amps() const noexcept { return amps_; }
  const Truncation& truncation() const noexcept { return trunc_; }
  int dim() const noexcept { return trunc_.dim(); }
  Scalar operator[](int n) const { return amps_(n); }

  Real norm() const { return amps_.norm(); }

  /// Fraction of the squared norm sitting on the top level |dim-1>.
  Real top_weight() const {
    const Real n2 = amps_.squaredNorm();
    return n2 > 0 ? std::norm(amps_(dim() - 1)) / n2 : Real(0);
  }

  BasicStateVector normalized() const {
    const Real n = norm();
    if (n < Real(kZeroNorm)) {
      throw DomainError("cannot normalize a zero-norm state");
    }
    return BasicStateVector(amps_ / n, trunc_);
  }

 private:
  KetVector<Real> amps_;
  Truncation trunc_;
};

template <typename Real = double>
class BasicModeOperator {
 public:
  using Scalar = Complex<Real>;

  BasicModeOperator(OperatorMatrix<Real> m, Truncation trunc)
      : m_(std::move(m)), trunc_(trunc) {
    if (m_.rows() != trunc_.dim() || m_.cols() != trunc_.dim()) {
      throw DimensionMismatch("operator matrix is not dim x dim");
    }
  }

  const OperatorMatrix<Real>& matrix() const noexcept { return m_; }
  const Truncation& truncation() const noexcept { return trunc_; }
  int dim() const noexcept { return trunc_.dim(); }

  BasicModeOperator adjoint() const {
    return BasicModeOperator(m_.adjoint(), trunc_);
  }

 private:
  OperatorMatrix<Real> m_;
  Truncation trunc_;
};

template <typename Real>
BasicModeOperator<Real> operator*(const BasicModeOperator<Real>& a,
                                  const BasicModeOperator<Real>& b) {
  detail::require_same(a.truncation(), b.truncation(), "operator product");
  return {a.matrix() * b.matrix(), a.truncation()};
}

template <typename Real>
BasicStateVector<Real> operator*(const BasicModeOperator<Real>& a,
                                 const BasicStateVector<Real>& psi) {
  detail::require_same(a.truncation(), psi.truncation(), "operator action");
  return {a.matrix() * psi.amps(), psi.truncation()};
}

template <typename Real>
BasicModeOperator<Real> operator+(const BasicModeOperator<Real>& a,
                                  const BasicModeOperator<Real>& b) {
  detail::require_same(a.truncation(), b.truncation(), "operator sum");
  return {a.matrix() + b.matrix(), a.truncation()};
}

template <typename Real>
BasicModeOperator<Real> operator-(const BasicModeOperator<Real>& a,
                                  const BasicModeOperator<Real>& b) {
  detail::require_same(a.truncation(), b.truncation(), "operator difference");
  return {a.matrix() - b.matrix(), a.truncation()};
}

template <typename Real>
BasicModeOperator<Real> operator*(Complex<Real> s,
                                  const BasicModeOperator<Real>& a) {
  return {s * a.matrix(), a.truncation()};
}

template <typename Real>
BasicModeOperator<Real> operator*(Real s, const BasicModeOperator<Real>& a) {
  return {s * a.matrix(), a.truncation()};
}

template <typename Real>
BasicStateVector<Real> operator+(const BasicStateVector<Real>& u,
                                 const BasicStateVector<Real>& v) {
  detail::require_same(u.truncation(), v.truncation(), "state sum");
  return {u.amps() + v.amps(), u.truncation()};
}

template <typename Real>
BasicStateVector<Real> operator-(const BasicStateVector<Real>& u,
                                 const BasicStateVector<Real>& v) {
  detail::require_same(u.truncation(), v.truncation(), "state difference");
  return {u.amps() - v.amps(), u.truncation()};
}

template <typename Real>
BasicStateVector<Real> operator*(Complex<Real> s,
                                 const BasicStateVector<Real>& v) {
  return {s * v.amps(), v.truncation()};
}

/// Hermitian, unit-trace, positive semidefinite matrix. The constructor
/// enforces all three invariants.
template <typename Real = double>
class BasicDensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kEigenFloor = -1e-10;

  BasicDensityMatrix(OperatorMatrix<Real> m, Truncation trunc)
      : m_(std::move(m)), trunc_(trunc) {
    if (m_.rows() != trunc_.dim() || m_.cols() != trunc_.dim()) {
      throw DimensionMismatch("density matrix is not dim x dim");
    }
    const Real herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > Real(kHermitianTol)) {
      throw DomainError("density matrix not Hermitian (max deviation " +
                        std::to_string(double(herm)) + ")");
    }
    m_ = Real(0.5) * (m_ + m_.adjoint()).eval();
    const Real tr = m_.trace().real();
    if (std::abs(tr - Real(1)) > Real(kTraceTol)) {
      throw DomainError("density matrix trace " + std::to_string(double(tr)) +
                        " differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<OperatorMatrix<Real>> es(
        m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < Real(kEigenFloor)) {
      throw DomainError("density matrix has eigenvalue " +
                        std::to_string(double(es.eigenvalues().minCoeff())));
    }
  }

  static BasicDensityMatrix pure(const BasicStateVector<Real>& psi) {
    const auto unit = psi.normalized();
    return {unit.amps() * unit.amps().adjoint(), unit.truncation()};
  }

  const OperatorMatrix<Real>& matrix() const noexcept { return m_; }
  const Truncation& truncation() const noexcept { return trunc_; }
  int dim() const noexcept { return trunc_.dim(); }
  Complex<Real> operator()(int m, int n) const { return m_(m, n); }

 private:
  OperatorMatrix<Real> m_;
  Truncation trunc_;
};

/// Joint pure state of several modes, mode-1 major.
template <typename Real = double>
class BasicMultiModeState {
 public:
  BasicMultiModeState(KetVector<Real> amps, std::vector<Truncation> modes)
      : amps_(std::move(amps)), modes_(std::move(modes)) {
    if (modes_.empty()) throw DomainError("multi-mode state needs a mode");
    if (amps_.size() != total_dim()) {
      throw DimensionMismatch("multi-mode amplitude count " +
                              std::to_string(amps_.size()) +
                              " does not match mode dims");
    }
  }

  const KetVector<Real>& amps() const noexcept { return amps_; }
  const std::vector<Truncation>& modes() const noexcept { return modes_; }
  int num_modes() const noexcept { return static_cast<int>(modes_.size()); }
  int mode_dim(int i) const { return modes_.at(i).dim(); }
  Real norm() const { return amps_.norm(); }

  Eigen::Index total_dim() const {
    Eigen::Index n = 1;
    for (const auto& t : modes_) n *= t.dim();
    return n;
  }

  /// Flat index of |n_1, ..., n_k>.
  Eigen::Index index(const std::vector<int>& occupation) const {
    if (occupation.size() != modes_.size()) {
      throw DimensionMismatch("occupation tuple has wrong length");
    }
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (occupation[i] < 0 || occupation[i] >= modes_[i].dim()) {
        throw DomainError("occupation " + std::to_string(occupation[i]) +
                          " out of range for mode " + std::to_string(i));
      }
      idx = idx * modes_[i].dim() + occupation[i];
    }
    return idx;
  }

  Complex<Real> amplitude(const std::vector<int>& occupation) const {
    return amps_(index(occupation));
  }

 private:
  KetVector<Real> amps_;
  std::vector<Truncation> modes_;
};

template <typename Real>
BasicStateVector<Real> operator*(Real s, const BasicStateVector<Real>& v) {
  return {s * v.amps(), v.truncation()};
}

template <typename Real>
BasicMultiModeState<Real> operator+(const BasicMultiModeState<Real>& u,
                                    const BasicMultiModeState<Real>& v) {
  if (u.modes() != v.modes()) {
    throw DimensionMismatch("multi-mode sum over different mode layouts");
  }
  return {u.amps() + v.amps(), u.modes()};
}

template <typename Real>
BasicMultiModeState<Real> operator*(Complex<Real> s,
                                    const BasicMultiModeState<Real>& v) {
  return {s * v.amps(), v.modes()};
}

/// Two-mode operator on the joint space of (first, second), mode-1 major.
template <typename Real = double>
struct BasicTwoModeOperator {
  OperatorMatrix<Real> matrix;
  Truncation first;
  Truncation second;
};

// ---------------------------------------------------------------------------
// States and operators

template <typename Real = double>
BasicModeOperator<Real> identity_op(const Truncation& trunc) {
  return {OperatorMatrix<Real>::Identity(trunc.dim(), trunc.dim()), trunc};
}

template <typename Real = double>
BasicStateVector<Real> fock_state(int n, const Truncation& trunc) {
  if (n < 0 || n >= trunc.dim()) {
    throw DomainError("fock_state: n=" + std::to_string(n) +
                      " outside [0, " + std::to_string(trunc.dim()) + ")");
  }
  KetVector<Real> v = KetVector<Real>::Zero(trunc.dim());
  v(n) = Real(1);
  return {std::move(v), trunc};
}

/// Throws TruncationError when the top level of psi carries more than the
/// truncation's tail tolerance.
template <typename Real>
void check_tail(const BasicStateVector<Real>& psi, const std::string& what) {
  const double w = double(psi.top_weight());
  if (w > psi.truncation().tail_tol()) {
    const int n = psi.dim();
    throw TruncationError(what + ": top-level weight " + std::to_string(w) +
                              " exceeds tail_tol at dim " + std::to_string(n),
                          n + std::max(10, n / 2));
  }
}

/// Poissonian amplitudes e^{-|a|^2/2} a^n / sqrt(n!), renormalized on the
/// truncated basis. Throws TruncationError if the Poisson weight beyond the
/// top level exceeds tail_tol.
template <typename Real = double>
BasicStateVector<Real> coherent_state(Complex<Real> alpha,
                                      const Truncation& trunc) {
  const double mean = double(std::norm(alpha));
  const double tail = detail::poisson_tail(mean, trunc.dim());
  if (tail > trunc.tail_tol()) {
    throw TruncationError(
        "coherent_state |alpha|^2=" + std::to_string(mean) +
            ": Poisson tail " + std::to_string(tail) + " beyond dim " +
            std::to_string(trunc.dim()),
        detail::coherent_required_dim(mean, trunc.tail_tol()));
  }
  KetVector<Real> v(trunc.dim());
  v(0) = Complex<Real>(std::exp(-Real(mean) / 2), 0);
  for (int n = 1; n < trunc.dim(); ++n) {
    v(n) = v(n - 1) * alpha / std::sqrt(Real(n));
  }
  v /= v.norm();
  return {std::move(v), trunc};
}

template <typename Real = double>
struct BasicLadder {
  BasicModeOperator<Real> a;
  BasicModeOperator<Real> a_dag;
  BasicModeOperator<Real> n_op;
};

template <typename Real = double>
BasicLadder<Real> ladder_operators(const Truncation& trunc) {
  const int dim = trunc.dim();
  OperatorMatrix<Real> a = OperatorMatrix<Real>::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(Real(n));
  OperatorMatrix<Real> a_dag = a.adjoint();
  OperatorMatrix<Real> n_op = a_dag * a;
  return {{std::move(a), trunc}, {std::move(a_dag), trunc},
          {std::move(n_op), trunc}};
}

/// Unitary exp(G) of an anti-Hermitian generator via the eigendecomposition
/// of the Hermitian matrix iG.
template <typename Real>
OperatorMatrix<Real> exp_anti_hermitian(const OperatorMatrix<Real>& gen) {
  const Complex<Real> i(0, 1);
  OperatorMatrix<Real> h = i * gen;
  h = Real(0.5) * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<OperatorMatrix<Real>> es(h);
  const auto& lambda = es.eigenvalues();
  KetVector<Real> phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::exp(-i * lambda(k));
  }
  const auto& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

/// D(alpha) = exp(alpha a^dag - conj(alpha) a) on the truncated space. Throws
/// TruncationError when D(alpha)|0> leaks more than tail_tol onto the top
/// level.
template <typename Real = double>
BasicModeOperator<Real> displacement_op(Complex<Real> alpha,
                                        const Truncation& trunc) {
  const auto lad = ladder_operators<Real>(trunc);
  const OperatorMatrix<Real> gen =
      alpha * lad.a_dag.matrix() - std::conj(alpha) * lad.a.matrix();
  OperatorMatrix<Real> d = exp_anti_hermitian<Real>(gen);
  const double leak = double(std::norm(d(trunc.dim() - 1, 0)));
  if (leak > trunc.tail_tol()) {
    throw TruncationError(
        "displacement_op |alpha|=" + std::to_string(double(std::abs(alpha))) +
            " leaks " + std::to_string(leak) + " onto the top level",
        detail::coherent_required_dim(double(std::norm(alpha)),
                                      trunc.tail_tol()));
  }
  return {std::move(d), trunc};
}

/// D(alpha)|psi>, checked against the tail tolerance.
template <typename Real = double>
BasicStateVector<Real> displace(Complex<Real> alpha,
                                const BasicStateVector<Real>& psi) {
  auto out = displacement_op<Real>(alpha, psi.truncation()) * psi;
  check_tail(out, "displace");
  return out;
}

// ---------------------------------------------------------------------------
// Overlaps

template <typename Real>
Complex<Real> inner_product(const BasicStateVector<Real>& u,
                            const BasicStateVector<Real>& v) {
  detail::require_same(u.truncation(), v.truncation(), "inner_product");
  return u.amps().dot(v.amps());
}

/// <psi|op|psi> for a normalized psi.
template <typename Real>
Complex<Real> expectation(const BasicModeOperator<Real>& op,
                          const BasicStateVector<Real>& psi) {
  detail::require_same(op.truncation(), psi.truncation(), "expectation");
  return psi.amps().dot(op.matrix() * psi.amps());
}

template <typename Real>
Complex<Real> expectation(const BasicModeOperator<Real>& op,
                          const BasicDensityMatrix<Real>& rho) {
  detail::require_same(op.truncation(), rho.truncation(), "expectation");
  return (rho.matrix() * op.matrix()).trace();
}

/// |<x|y>|^2 of the normalized inputs; invariant under global phases.
template <typename Real>
Real fidelity(const BasicStateVector<Real>& x, const BasicStateVector<Real>& y) {
  detail::require_same(x.truncation(), y.truncation(), "fidelity");
  const Real nx = x.norm(), ny = y.norm();
  if (nx < Real(kZeroNorm) || ny < Real(kZeroNorm)) {
    throw DomainError("fidelity of a zero-norm state");
  }
  const Real f = std::norm(x.amps().dot(y.amps())) / (nx * nx * ny * ny);
  return std::clamp(f, Real(0), Real(1));
}

template <typename Real>
Real fidelity(const BasicDensityMatrix<Real>& rho,
              const BasicStateVector<Real>& psi) {
  detail::require_same(rho.truncation(), psi.truncation(), "fidelity");
  const auto unit = psi.normalized();
  const Real f = unit.amps().dot(rho.matrix() * unit.amps()).real();
  return std::clamp(f, Real(0), Real(1));
}

template <typename Real>
OperatorMatrix<Real> psd_sqrt(const OperatorMatrix<Real>& m) {
  Eigen::SelfAdjointEigenSolver<OperatorMatrix<Real>> es(m);
  Eigen::Matrix<Real, Eigen::Dynamic, 1> s =
      es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt();
  const auto& v = es.eigenvectors();
  return v * s.template cast<Complex<Real>>().asDiagonal() * v.adjoint();
}

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
template <typename Real>
Real fidelity(const BasicDensityMatrix<Real>& rho,
              const BasicDensityMatrix<Real>& sigma) {
  detail::require_same(rho.truncation(), sigma.truncation(), "fidelity");
  const OperatorMatrix<Real> s = psd_sqrt<Real>(rho.matrix());
  OperatorMatrix<Real> m = s * sigma.matrix() * s;
  m = Real(0.5) * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<OperatorMatrix<Real>> es(
      m, Eigen::EigenvaluesOnly);
  const Real tr = es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt().sum();
  return std::clamp(tr * tr, Real(0), Real(1));
}

// ---------------------------------------------------------------------------
// Multi-mode composition

template <typename Real>
BasicMultiModeState<Real> tensor(const std::vector<BasicStateVector<Real>>& parts) {
  if (parts.empty()) throw DomainError("tensor of zero factors");
  KetVector<Real> amps = parts.front().amps();
  std::vector<Truncation> modes{parts.front().truncation()};
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& b = parts[i].amps();
    KetVector<Real> next(amps.size() * b.size());
    for (Eigen::Index j = 0; j < amps.size(); ++j) {
      next.segment(j * b.size(), b.size()) = amps(j) * b;
    }
    amps = std::move(next);
    modes.push_back(parts[i].truncation());
  }
  return {std::move(amps), std::move(modes)};
}

template <typename Real>
BasicMultiModeState<Real> tensor(const BasicStateVector<Real>& a,
                                 const BasicStateVector<Real>& b) {
  return tensor<Real>(std::vector<BasicStateVector<Real>>{a, b});
}

/// Beam splitter B = exp(theta (a1 a2^dag - a1^dag a2)) with t = cos(theta),
/// r = sin(theta):
///   a1^dag -> t a1^dag + r a2^dag,   a2^dag -> -r a1^dag + t a2^dag,
/// so B|0>|beta> = |-r beta>|t beta> and B|1>|0> = t|1,0> + r|0,1>.
///
/// B conserves total photon number and is built sector by sector. Sectors
/// with total number below min(N1, N2) are exact; higher sectors are cut by
/// the per-mode truncation.
template <typename Real = double>
BasicTwoModeOperator<Real> beam_splitter_op(Real theta, const Truncation& first,
                                            const Truncation& second) {
  const int n1 = first.dim(), n2 = second.dim();
  const Eigen::Index total = Eigen::Index(n1) * n2;
  OperatorMatrix<Real> u = OperatorMatrix<Real>::Zero(total, total);
  for (int sector = 0; sector <= n1 + n2 - 2; ++sector) {
    const int k_lo = std::max(0, sector - (n2 - 1));
    const int k_hi = std::min(n1 - 1, sector);
    const int size = k_hi - k_lo + 1;
    OperatorMatrix<Real> gen = OperatorMatrix<Real>::Zero(size, size);
    for (int k = k_lo; k <= k_hi; ++k) {
      const int j = sector - k;
      const int col = k - k_lo;
      // a1 a2^dag |k, j> = sqrt(k (j+1)) |k-1, j+1>
      if (k - 1 >= k_lo) {
        gen(col - 1, col) += theta * std::sqrt(Real(k) * Real(j + 1));
      }
      // -a1^dag a2 |k, j> = -sqrt((k+1) j) |k+1, j-1>
      if (k + 1 <= k_hi) {
        gen(col + 1, col) -= theta * std::sqrt(Real(k + 1) * Real(j));
      }
    }
    const OperatorMatrix<Real> block =
        theta == Real(0) ? OperatorMatrix<Real>::Identity(size, size).eval()
                         : exp_anti_hermitian<Real>(gen);
    for (int kr = k_lo; kr <= k_hi; ++kr) {
      for (int kc = k_lo; kc <= k_hi; ++kc) {
        u(Eigen::Index(kr) * n2 + (sector - kr),
          Eigen::Index(kc) * n2 + (sector - kc)) = block(kr - k_lo, kc - k_lo);
      }
    }
  }
  return {std::move(u), first, second};
}

/// Applies a two-mode operator to modes (first_mode, first_mode + 1).
template <typename Real>
BasicMultiModeState<Real> apply_two_mode(const BasicTwoModeOperator<Real>& op,
                                         const BasicMultiModeState<Real>& joint,
                                         int first_mode) {
  if (first_mode < 0 || first_mode + 1 >= joint.num_modes()) {
    throw DomainError("apply_two_mode: mode pair out of range");
  }
  if (joint.mode_dim(first_mode) != op.first.dim() ||
      joint.mode_dim(first_mode + 1) != op.second.dim()) {
    throw DimensionMismatch("apply_two_mode: operator/mode dims differ");
  }
  Eigen::Index left = 1, right = 1;
  for (int i = 0; i < first_mode; ++i) left *= joint.mode_dim(i);
  for (int i = first_mode + 2; i < joint.num_modes(); ++i) {
    right *= joint.mode_dim(i);
  }
  const Eigen::Index mid = op.matrix.rows();
  using RowMajor = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>;
  KetVector<Real> out(joint.amps().size());
  for (Eigen::Index l = 0; l < left; ++l) {
    Eigen::Map<const RowMajor> in_block(joint.amps().data() + l * mid * right,
                                        mid, right);
    Eigen::Map<RowMajor> out_block(out.data() + l * mid * right, mid, right);
    out_block.noalias() = op.matrix * in_block;
  }
  return {std::move(out), joint.modes()};
}

/// Unnormalized contraction of the leading (herald) modes with the basis
/// outcome; the last mode is the signal.
template <typename Real>
KetVector<Real> herald_contract(const BasicMultiModeState<Real>& joint,
                                const std::vector<int>& outcome) {
  if (static_cast<int>(outcome.size()) != joint.num_modes() - 1) {
    throw DimensionMismatch(
        "herald outcome must name every mode except the signal");
  }
  std::vector<int> occupation = outcome;
  occupation.push_back(0);
  const Eigen::Index offset = joint.index(occupation);
  return joint.amps().segment(offset, joint.modes().back().dim());
}

template <typename Real = double>
struct BasicHeraldOutcome {
  BasicStateVector<Real> conditional;
  Real probability;
};

/// Projects the herald modes on the basis outcome. Returns the normalized
/// conditional signal state and the squared norm of the contraction.
template <typename Real>
BasicHeraldOutcome<Real> herald_project(const BasicMultiModeState<Real>& joint,
                                        const std::vector<int>& outcome) {
  KetVector<Real> c = herald_contract(joint, outcome);
  const Real n = c.norm();
  if (n < Real(kZeroNorm)) {
    throw HeraldImpossibleError("herald outcome has zero probability");
  }
  c /= n;
  return {BasicStateVector<Real>(std::move(c), joint.modes().back()), n * n};
}

using StateVector = BasicStateVector<double>;
using ModeOperator = BasicModeOperator<double>;
using DensityMatrix = BasicDensityMatrix<double>;
using MultiModeState = BasicMultiModeState<double>;
using TwoModeOperator = BasicTwoModeOperator<double>;
using Ladder = BasicLadder<double>;
using HeraldOutcome = BasicHeraldOutcome<double>;
using cplx = std::complex<double>;

}  // namespace cvortho
