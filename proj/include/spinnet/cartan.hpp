// SPDX-License-Identifier: Apache-2.0
//
// Odd-even Cartan decompositions of u(N1*...*Nn) built from per-site AI/AII
// decompositions, the induced involution, and the orthogonal/symplectic
// membership and verification machinery behind them.
//
// Per site of dimension N the subalgebra K is a conjugate of so(N) (N odd)
// or sp(N/2) (N even) chosen so that it contains the three spin components
// i*sx, i*sy, i*sz; P is its orthogonal complement in u(N). The odd (even)
// part of the network decomposition is spanned by tensor monomials with an
// odd (even) number of K-type local factors.
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spinnet/cmatrix.hpp"
#include "spinnet/spin.hpp"

namespace spinnet {

/// diag(-1, 1, -1, ..., (-1)^k).
inline CMatrix c_matrix(int k) {
  if (k < 1) throw std::invalid_argument("c_matrix: k must be >= 1");
  CMatrix c = CMatrix::Zero(k, k);
  for (int i = 1; i <= k; ++i) c(i - 1, i - 1) = (i % 2 == 0) ? 1.0 : -1.0;
  return c;
}

/// Antidiagonal of ones.
inline CMatrix t_matrix(int k) {
  if (k < 1) throw std::invalid_argument("t_matrix: k must be >= 1");
  CMatrix t = CMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) t(i, k - 1 - i) = 1.0;
  return t;
}

/// Unitary U such that U (i sigma_v) U^dagger lands in sp(N/2) for even N
/// and in so(N) for odd N, for all three spin components of l = (N-1)/2.
inline CMatrix site_conjugator(int n) {
  if (n < 2) throw std::invalid_argument("site_conjugator: N must be >= 2");
  if (n % 2 == 0) {
    const int k = n / 2;
    CMatrix u = CMatrix::Zero(n, n);
    u.topLeftCorner(k, k) = c_matrix(k);
    u.bottomRightCorner(k, k) = t_matrix(k);
    return u;
  }
  const int k = (n - 1) / 2;
  const double s = 1.0 / std::sqrt(2.0);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  CMatrix u = CMatrix::Zero(n, n);
  u.topLeftCorner(k, k) = Complex(0, s) * c_matrix(k);
  u.topRightCorner(k, k) = Complex(0, sign * s) * t_matrix(k);
  u(k, k) = 1.0;
  u.bottomLeftCorner(k, k) = s * t_matrix(k);
  u.bottomRightCorner(k, k) = s * c_matrix(k);
  return u;
}

/// Membership in so(N): skew-Hermitian and real (hence real antisymmetric).
inline bool is_in_so(const CMatrix& m, double tol = default_tol) {
  return is_skew_hermitian(m, tol) && is_real(m, tol);
}

/// Membership in sp(N/2): skew-Hermitian with m^T J + J m = 0,
/// J = [[0, I],[-I, 0]].
inline bool is_in_sp(const CMatrix& m, double tol = default_tol) {
  if (!is_square(m)) return false;
  if (m.rows() % 2 != 0) throw std::invalid_argument("is_in_sp: odd dimension");
  const int k = static_cast<int>(m.rows()) / 2;
  CMatrix j = CMatrix::Zero(2 * k, 2 * k);
  j.topRightCorner(k, k) = CMatrix::Identity(k, k);
  j.bottomLeftCorner(k, k) = -CMatrix::Identity(k, k);
  return is_skew_hermitian(m, tol) && max_abs(m.transpose() * j + j * m) <= tol;
}

namespace detail {

inline double so_residual(const CMatrix& m) {
  const double skew = max_abs(m + m.adjoint());
  const double realp = m.imag().cwiseAbs().maxCoeff();
  return std::max(skew, realp);
}

inline double sp_residual(const CMatrix& m) {
  const int k = static_cast<int>(m.rows()) / 2;
  CMatrix j = CMatrix::Zero(2 * k, 2 * k);
  j.topRightCorner(k, k) = CMatrix::Identity(k, k);
  j.bottomLeftCorner(k, k) = -CMatrix::Identity(k, k);
  return std::max(max_abs(m + m.adjoint()), max_abs(m.transpose() * j + j * m));
}

}  // namespace detail

struct ConjugationReport {
  HalfInt spin;
  int dim = 0;
  bool symplectic = false;            // sp(N/2) for even N, so(N) otherwise
  std::array<double, 3> residuals{};  // per axis x, y, z
  double tol = 0.0;
  bool passed = false;
};

/// Conjugates all three spin components by site_conjugator(N) and measures
/// how far the results are from sp(N/2) (N even) or so(N) (N odd).
inline ConjugationReport verify_theorem_1_2(HalfInt l, double tol = 1e-12) {
  ConjugationReport rep{l};
  rep.dim = l.dimension();
  rep.symplectic = rep.dim % 2 == 0;
  rep.tol = tol;
  const CMatrix u = site_conjugator(rep.dim);
  const SpinTriple& s = spin_matrices(l);
  const std::array<const CMatrix*, 3> axes{&s.x, &s.y, &s.z};
  rep.passed = true;
  for (int v = 0; v < 3; ++v) {
    const CMatrix t = u * (Complex(0, 1) * (*axes[v])) * u.adjoint();
    rep.residuals[v] = rep.symplectic ? detail::sp_residual(t) : detail::so_residual(t);
    if (rep.residuals[v] > tol) rep.passed = false;
  }
  return rep;
}

struct SpectrumReport {
  HalfInt spin;
  std::array<std::vector<double>, 3> spectra{};  // eigenvalues of sigma_v, descending
  double max_deviation = 0.0;                    // from {l, l-1, ..., -l}
  double min_gap = 0.0;                          // adjacent eigenvalue gap
  bool all_simple = false;
  bool passed = false;
};

/// Checks the spectral facts the half-integer non-existence argument rests
/// on: each i*sigma_v has spectrum {+-i l, ..., +-i/2}, all simple.
inline SpectrumReport theorem3_spectral_premises(HalfInt l, double tol = 1e-10) {
  if (!l.half_integer())
    throw std::invalid_argument("theorem3_spectral_premises: spin must be half-integer");
  SpectrumReport rep{l};
  const int n = l.dimension();
  const SpinTriple& s = spin_matrices(l);
  const std::array<const CMatrix*, 3> axes{&s.x, &s.y, &s.z};
  rep.min_gap = 2.0 * l.value();
  for (int v = 0; v < 3; ++v) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(*axes[v]);
    std::vector<double> w(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(w.begin(), w.end(), std::greater<double>());
    for (int i = 0; i < n; ++i) {
      rep.max_deviation = std::max(rep.max_deviation, std::abs(w[i] - (l.value() - i)));
      if (i > 0) rep.min_gap = std::min(rep.min_gap, w[i - 1] - w[i]);
    }
    rep.spectra[v] = std::move(w);
  }
  rep.all_simple = rep.min_gap > 0.5;  // exact gaps are 1
  rep.passed = rep.max_deviation <= tol && rep.all_simple;
  return rep;
}

namespace detail {

/// Orthonormal (Hilbert-Schmidt) Hermitian basis of N x N matrices,
/// identity direction first, then traceless diagonal, then off-diagonal
/// pairs in row-major order.
inline std::vector<CMatrix> hermitian_basis(int n) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<size_t>(n) * n);
  out.push_back(CMatrix::Identity(n, n) / std::sqrt(double(n)));
  for (int k = 1; k < n; ++k) {
    CMatrix d = CMatrix::Zero(n, n);
    for (int i = 0; i < k; ++i) d(i, i) = 1.0;
    d(k, k) = -double(k);
    out.push_back(d / std::sqrt(double(k) * (k + 1)));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CMatrix m = CMatrix::Zero(n, n);
      m(i, j) = s;
      m(j, i) = s;
      out.push_back(m);
      m.setZero();
      m(i, j) = Complex(0, -s);
      m(j, i) = Complex(0, s);
      out.push_back(m);
    }
  }
  return out;
}

/// Orthonormal basis of so(N) (real antisymmetric).
inline std::vector<CMatrix> so_basis(int n) {
  std::vector<CMatrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      CMatrix m = CMatrix::Zero(n, n);
      m(i, j) = s;
      m(j, i) = -s;
      out.push_back(m);
    }
  }
  return out;
}

/// Orthonormal basis of sp(N/2) in u(N): blocks [[A, B],[-B^dagger, -A^T]]
/// with A anti-Hermitian and B complex symmetric.
inline std::vector<CMatrix> sp_basis(int n) {
  const int k = n / 2;
  std::vector<CMatrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (const CMatrix& h : hermitian_basis(k)) {
    const CMatrix a = Complex(0, 1) * h;
    CMatrix m = CMatrix::Zero(n, n);
    m.topLeftCorner(k, k) = a;
    m.bottomRightCorner(k, k) = -a.transpose();
    out.push_back(s * m);
  }
  std::vector<CMatrix> sym;
  for (int i = 0; i < k; ++i) {
    CMatrix m = CMatrix::Zero(k, k);
    m(i, i) = 1.0;
    sym.push_back(m);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      CMatrix m = CMatrix::Zero(k, k);
      m(i, j) = s;
      m(j, i) = s;
      sym.push_back(m);
    }
  }
  for (const CMatrix& b0 : sym) {
    for (const Complex ph : {Complex(1, 0), Complex(0, 1)}) {
      const CMatrix b = ph * b0;
      CMatrix m = CMatrix::Zero(n, n);
      m.topRightCorner(k, k) = b;
      m.bottomLeftCorner(k, k) = -b.adjoint();
      out.push_back(s * m);
    }
  }
  return out;
}

}  // namespace detail

/// Per-site decomposition u(N) = K + P in the original spin basis.
/// Elements are anti-Hermitian and orthonormal; p_basis[0] is the identity
/// direction i*1/sqrt(N).
struct SiteSplit {
  int dim = 0;
  std::vector<CMatrix> k_basis;
  std::vector<CMatrix> p_basis;
};

inline SiteSplit site_split(int n) {
  if (n < 2) throw std::invalid_argument("site_split: site dimension must be >= 2");
  SiteSplit split;
  split.dim = n;
  const CMatrix u = site_conjugator(n);
  const std::vector<CMatrix> raw = (n % 2 == 0) ? detail::sp_basis(n) : detail::so_basis(n);
  split.k_basis.reserve(raw.size());
  for (const CMatrix& m : raw) split.k_basis.push_back(u.adjoint() * m * u);

  // complement of K in u(N), identity direction first; two Gram-Schmidt
  // passes keep the basis orthonormal to machine precision
  for (const CMatrix& h : detail::hermitian_basis(n)) {
    CMatrix v = Complex(0, 1) * h;
    for (int pass = 0; pass < 2; ++pass) {
      for (const CMatrix& b : split.k_basis) v -= hs_inner(v, b) * b;
      for (const CMatrix& b : split.p_basis) v -= hs_inner(v, b) * b;
    }
    const double norm = hs_norm(v);
    if (norm > 1e-8) split.p_basis.push_back(v / norm);
  }
  if (static_cast<int>(split.k_basis.size() + split.p_basis.size()) != n * n)
    throw std::runtime_error("site_split: basis count mismatch");
  return split;
}

/// Ordered orthonormal bases of the odd and even parts of u(N1*...*Nn).
/// Elements are anti-Hermitian; labels record the local factor pattern
/// ("k3", "p0", ...) per site.
struct CartanSplit {
  int dim = 0;
  std::vector<int> site_dims;
  std::vector<CMatrix> odd_basis;
  std::vector<CMatrix> even_basis;
  std::vector<std::string> odd_labels;
  std::vector<std::string> even_labels;
};

/// Enumerates the full tensor-product operator basis (lexicographic by site,
/// K-type local factors before P-type) and classifies each monomial by the
/// parity of its K-factor count. Embedded single-site spin components land
/// in the odd span; two-site exchange terms land in the even span.
inline CartanSplit odd_even_split(const std::vector<int>& site_dims, int dim_cap = 256) {
  if (site_dims.empty()) throw std::invalid_argument("odd_even_split: no sites");
  const int n_total = product_dim(site_dims);
  if (n_total > dim_cap)
    throw std::invalid_argument("odd_even_split: total dimension " + std::to_string(n_total) +
                                " exceeds cap " + std::to_string(dim_cap));

  struct LocalFactor {
    CMatrix herm;  // i * basis element, Hermitian, unit norm
    bool k_type;
    std::string label;
  };
  std::vector<std::vector<LocalFactor>> sites;
  for (int nd : site_dims) {
    const SiteSplit s = site_split(nd);
    std::vector<LocalFactor> fac;
    fac.reserve(static_cast<size_t>(nd) * nd);
    for (size_t i = 0; i < s.k_basis.size(); ++i)
      fac.push_back({Complex(0, 1) * s.k_basis[i], true, "k" + std::to_string(i)});
    for (size_t i = 0; i < s.p_basis.size(); ++i)
      fac.push_back({Complex(0, 1) * s.p_basis[i], false, "p" + std::to_string(i)});
    sites.push_back(std::move(fac));
  }

  CartanSplit split;
  split.dim = n_total;
  split.site_dims = site_dims;
  std::vector<size_t> idx(sites.size(), 0);
  while (true) {
    CMatrix m = CMatrix::Identity(1, 1);
    int k_count = 0;
    std::string label;
    for (size_t j = 0; j < sites.size(); ++j) {
      const LocalFactor& f = sites[j][idx[j]];
      m = kron(m, f.herm);
      k_count += f.k_type ? 1 : 0;
      if (j) label += '*';
      label += f.label;
    }
    const CMatrix elt = Complex(0, 1) * m;  // anti-Hermitian, unit norm
    if (k_count % 2 == 1) {
      split.odd_basis.push_back(elt);
      split.odd_labels.push_back(label);
    } else {
      split.even_basis.push_back(elt);
      split.even_labels.push_back(label);
    }
    // lexicographic increment, last site fastest
    size_t j = sites.size();
    while (j > 0) {
      --j;
      if (++idx[j] < sites[j].size()) break;
      idx[j] = 0;
      if (j == 0) goto done;
    }
  }
done:
  if (static_cast<int>(split.odd_basis.size() + split.even_basis.size()) != n_total * n_total)
    throw std::runtime_error("odd_even_split: monomial count mismatch");
  return split;
}

/// The Cartan involution induced by a split: +1 on the odd part, -1 on the
/// even part. An all-odd split (empty even basis) encodes the identity map.
struct Involution {
  CartanSplit split;

  static Involution from_split(CartanSplit s) { return Involution{std::move(s)}; }

  /// Identity homomorphism on u(N) for the given site dimensions.
  static Involution identity(const std::vector<int>& site_dims) {
    const int n = product_dim(site_dims);
    CartanSplit s;
    s.dim = n;
    s.site_dims = site_dims;
    for (const CMatrix& h : detail::hermitian_basis(n)) {
      s.odd_basis.push_back(Complex(0, 1) * h);
      s.odd_labels.push_back("id");
    }
    return Involution{std::move(s)};
  }
};

/// phi(m) = P_odd(m) - P_even(m). Input must be skew-Hermitian (an element
/// of u(N)) within tolerance.
inline CMatrix involution_apply(const Involution& inv, const CMatrix& m,
                                double tol = default_tol) {
  if (m.rows() != inv.split.dim || m.cols() != inv.split.dim)
    throw std::invalid_argument("involution_apply: dimension mismatch with carrier");
  const double scale = std::max(1.0, max_abs(m));
  if (!is_skew_hermitian(m, tol * scale))
    throw std::invalid_argument("involution_apply: input is not skew-Hermitian");
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (const CMatrix& e : inv.split.odd_basis) out += hs_inner(m, e) * e;
  for (const CMatrix& e : inv.split.even_basis) out -= hs_inner(m, e) * e;
  return out;
}

struct ClosureReport {
  // worst projected residual per relation: [odd,odd]->odd, [odd,even]->even,
  // [even,even]->odd
  double odd_odd = 0.0;
  double odd_even = 0.0;
  double even_even = 0.0;
  double worst() const { return std::max({odd_odd, odd_even, even_even}); }
};

namespace detail {

inline double projection_norm(const CMatrix& m, const std::vector<CMatrix>& basis) {
  double sq = 0.0;
  for (const CMatrix& e : basis) sq += std::norm(hs_inner(m, e));
  return std::sqrt(sq);
}

}  // namespace detail

struct InvolutionPropertyReport {
  double involutive = 0.0;     // worst |phi(phi(m)) - m|
  double homomorphism = 0.0;   // worst |phi([a,b]) - [phi(a), phi(b)]|
  double self_adjoint = 0.0;   // worst |<phi(a),b> - <a,phi(b)>|
  double worst() const { return std::max({involutive, homomorphism, self_adjoint}); }
};

/// Property residuals of the involution on seeded random pairs from u(N).
inline InvolutionPropertyReport involution_property_check(const Involution& inv, int pairs,
                                                          std::uint64_t seed) {
  InvolutionPropertyReport rep;
  std::mt19937_64 g(seed);
  const int n = inv.split.dim;
  for (int i = 0; i < pairs; ++i) {
    const CMatrix a = random_skew_hermitian(n, g);
    const CMatrix b = random_skew_hermitian(n, g);
    const CMatrix fa = involution_apply(inv, a);
    const CMatrix fb = involution_apply(inv, b);
    rep.involutive = std::max(rep.involutive, max_abs(involution_apply(inv, fa) - a));
    rep.homomorphism = std::max(
        rep.homomorphism, max_abs(involution_apply(inv, commutator(a, b)) - commutator(fa, fb)));
    rep.self_adjoint = std::max(rep.self_adjoint, std::abs(hs_inner(fa, b) - hs_inner(a, fb)));
  }
  return rep;
}

/// Verifies the three closure relations on the full basis by projecting each
/// pairwise commutator onto the complementary subspace.
inline ClosureReport verify_closure(const CartanSplit& split) {
  ClosureReport rep;
  const auto& odd = split.odd_basis;
  const auto& even = split.even_basis;
  for (size_t i = 0; i < odd.size(); ++i)
    for (size_t j = i + 1; j < odd.size(); ++j)
      rep.odd_odd = std::max(rep.odd_odd, detail::projection_norm(commutator(odd[i], odd[j]), even));
  for (const CMatrix& a : odd)
    for (const CMatrix& b : even)
      rep.odd_even = std::max(rep.odd_even, detail::projection_norm(commutator(a, b), odd));
  for (size_t i = 0; i < even.size(); ++i)
    for (size_t j = i + 1; j < even.size(); ++j)
      rep.even_even =
          std::max(rep.even_even, detail::projection_norm(commutator(even[i], even[j]), even));
  return rep;
}

}  // namespace spinnet
