// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra primitives shared by the whole library:
// commutators, the Hilbert-Schmidt inner product, Kronecker products,
// unitary exponentials of skew-Hermitian matrices and orthogonal
// projections onto operator bases.
#pragma once

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spinnet {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Default absolute tolerance (max-entry norm) for structural predicates.
inline constexpr double default_tol = 1e-10;

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_square(const CMatrix& m) { return m.rows() == m.cols() && m.rows() >= 1; }

inline bool is_hermitian(const CMatrix& m, double tol = default_tol) {
  return is_square(m) && max_abs(m - m.adjoint()) <= tol;
}

inline bool is_skew_hermitian(const CMatrix& m, double tol = default_tol) {
  return is_square(m) && max_abs(m + m.adjoint()) <= tol;
}

inline bool is_unitary(const CMatrix& m, double tol = default_tol) {
  if (!is_square(m)) return false;
  const CMatrix id = CMatrix::Identity(m.rows(), m.cols());
  return max_abs(m * m.adjoint() - id) <= tol;
}

inline bool is_real(const CMatrix& m, double tol = default_tol) {
  return m.imag().cwiseAbs().maxCoeff() <= tol;
}

inline void require_same_dim(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + ")");
}

/// ab - ba.
inline CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

/// Hilbert-Schmidt inner product tr(a b^dagger).
inline Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  return (a.array() * b.array().conjugate()).sum();
}

inline double hs_norm(const CMatrix& a) { return a.norm(); }

/// Kronecker product; (a kron b)[i*bdim+k, j*bdim+l] = a[i,j] * b[k,l].
/// This index convention fixes the tensor-factor ordering for every
/// operator embedding in the library.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  CMatrix out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

/// exp(a) for skew-Hermitian a, computed from the eigendecomposition of the
/// Hermitian matrix i*a; the result is unitary by construction.
inline CMatrix expm_skew(const CMatrix& a, double tol = default_tol) {
  if (!is_square(a)) throw std::invalid_argument("expm_skew: matrix must be square");
  // skewness tolerance is relative to the entry magnitude
  const double scale = std::max(1.0, max_abs(a));
  if (!is_skew_hermitian(a, tol * scale))
    throw std::invalid_argument("expm_skew: input is not skew-Hermitian within tolerance");
  const CMatrix h = Complex(0, 1) * a;
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
  const Eigen::VectorXd w = es.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases[k] = std::exp(Complex(0, -w[k]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Component of m in the span of a pairwise-orthogonal basis:
/// sum_k <m,e_k>/<e_k,e_k> e_k.
inline CMatrix orthonormal_projection(const CMatrix& m, const std::vector<CMatrix>& basis) {
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (const CMatrix& e : basis) {
    require_same_dim(m, e, "orthonormal_projection");
    const double nn = std::real(hs_inner(e, e));
    if (nn <= 0.0) throw std::invalid_argument("orthonormal_projection: zero basis element");
    out += (hs_inner(m, e) / nn) * e;
  }
  return out;
}

inline CMatrix traceless_part(const CMatrix& m) {
  return m - (m.trace() / double(m.rows())) * CMatrix::Identity(m.rows(), m.cols());
}

namespace detail {

// uniform double in [0,1) straight from the engine bits, so draws are
// identical on every platform and standard library
inline double u01(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Random skew-Hermitian matrix with entries of order one; deterministic for
/// a given engine state.
inline CMatrix random_skew_hermitian(int n, std::mt19937_64& g) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = Complex(2.0 * detail::u01(g) - 1.0, 2.0 * detail::u01(g) - 1.0);
  return (m - m.adjoint()) / 2.0;
}

}  // namespace spinnet
