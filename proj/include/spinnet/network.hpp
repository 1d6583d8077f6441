// SPDX-License-Identifier: Apache-2.0
//
// Spin-network models: isotropic exchange drift, collective control
// generators, total-magnetization observables, interaction graph and the
// Lie-closure controllability test.
#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinnet/cartan.hpp"
#include "spinnet/cmatrix.hpp"
#include "spinnet/spin.hpp"

namespace spinnet {

struct Rho0Spec {
  enum class Kind { GroundZ, Thermal, MaximallyMixed, Explicit };
  Kind kind = Kind::MaximallyMixed;
  double beta = 1.0;  // Thermal only
  CMatrix matrix;     // Explicit only

  static Rho0Spec ground_z() { return {Kind::GroundZ, 0.0, {}}; }
  static Rho0Spec thermal(double beta) { return {Kind::Thermal, beta, {}}; }
  static Rho0Spec maximally_mixed() { return {Kind::MaximallyMixed, 0.0, {}}; }
  static Rho0Spec explicit_state(CMatrix rho) { return {Kind::Explicit, 0.0, std::move(rho)}; }
};

/// Full parameterization of a network of n interacting spins plus the
/// derived operators. Immutable after build_network.
struct SpinNetworkModel {
  int n = 0;
  std::vector<HalfInt> spins;
  Eigen::MatrixXd exchange;  // symmetric, zero diagonal
  Eigen::VectorXd gyros;
  CMatrix rho0;

  int dim = 0;
  std::vector<int> site_dims;
  CMatrix drift;                    // A = -i sum_{k<l} J_kl (I_kx,lx + I_ky,ly + I_kz,lz)
  std::array<CMatrix, 3> control;   // B_v = -i sum_k gamma_k I_kv
  std::array<CMatrix, 3> observable;  // S_v = sum_k I_kv

  std::string rho0_preset;  // how rho0 was produced, for reporting
};

namespace detail {

inline void validate_density(const CMatrix& rho, int n) {
  if (rho.rows() != n || rho.cols() != n)
    throw std::invalid_argument("rho0: wrong dimension");
  if (!is_hermitian(rho, 1e-10)) throw std::invalid_argument("rho0: not Hermitian");
  if (std::abs(rho.trace() - Complex(1, 0)) > 1e-12)
    throw std::invalid_argument("rho0: trace must be 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((rho + rho.adjoint()) / 2.0);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("rho0: not positive semidefinite");
}

}  // namespace detail

inline CMatrix rho0_maximally_mixed(int n) {
  return CMatrix::Identity(n, n) / double(n);
}

/// Projector onto the lowest eigenvector of the total z magnetization
/// (the all-sites-down product state, always nondegenerate).
inline CMatrix rho0_ground_z(const CMatrix& s_z) {
  const int n = static_cast<int>(s_z.rows());
  int lowest = 0;
  for (int i = 1; i < n; ++i)
    if (std::real(s_z(i, i)) < std::real(s_z(lowest, lowest))) lowest = i;
  CMatrix rho = CMatrix::Zero(n, n);
  rho(lowest, lowest) = 1.0;
  return rho;
}

/// exp(-beta H0)/Z for the Hermitian drift H0 = i A.
inline CMatrix rho0_thermal(const CMatrix& drift, double beta) {
  const CMatrix h0 = Complex(0, 1) * drift;
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h0 + h0.adjoint()) / 2.0);
  const Eigen::VectorXd w = es.eigenvalues();
  const double wmin = w.minCoeff();
  Eigen::VectorXd boltz(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) boltz[i] = std::exp(-beta * (w[i] - wmin));
  boltz /= boltz.sum();
  return es.eigenvectors() * boltz.asDiagonal().toDenseMatrix().cast<Complex>() *
         es.eigenvectors().adjoint();
}

inline SpinNetworkModel build_network(std::vector<HalfInt> spins, Eigen::MatrixXd exchange,
                                      Eigen::VectorXd gyros, const Rho0Spec& rho0,
                                      int dim_cap = 256) {
  SpinNetworkModel m;
  m.n = static_cast<int>(spins.size());
  if (m.n < 1) throw std::invalid_argument("build_network: need at least one site");
  for (const HalfInt& l : spins)
    if (l.twice() < 1) throw std::invalid_argument("build_network: every site needs spin >= 1/2");
  if (exchange.rows() != m.n || exchange.cols() != m.n)
    throw std::invalid_argument("build_network: exchange matrix has wrong size");
  for (int k = 0; k < m.n; ++k) {
    if (exchange(k, k) != 0.0)
      throw std::invalid_argument("build_network: exchange diagonal must be zero");
    for (int l = 0; l < m.n; ++l)
      if (exchange(k, l) != exchange(l, k))
        throw std::invalid_argument("build_network: exchange matrix must be symmetric");
  }
  if (gyros.size() != m.n) throw std::invalid_argument("build_network: gyros has wrong size");

  m.spins = std::move(spins);
  m.exchange = std::move(exchange);
  m.gyros = std::move(gyros);
  for (const HalfInt& l : m.spins) m.site_dims.push_back(l.dimension());
  m.dim = product_dim(m.site_dims);
  if (m.dim > dim_cap)
    throw std::invalid_argument("build_network: dimension " + std::to_string(m.dim) +
                                " exceeds cap " + std::to_string(dim_cap));

  const std::array<Axis, 3> axes{Axis::X, Axis::Y, Axis::Z};
  m.drift = CMatrix::Zero(m.dim, m.dim);
  for (int k = 0; k < m.n; ++k)
    for (int l = k + 1; l < m.n; ++l) {
      if (m.exchange(k, l) == 0.0) continue;
      for (Axis v : axes)
        m.drift += Complex(0, -m.exchange(k, l)) *
                   embed(SiteOperatorSpec{{{k + 1, v}, {l + 1, v}}, m.site_dims});
    }
  for (int v = 0; v < 3; ++v) {
    m.control[v] = CMatrix::Zero(m.dim, m.dim);
    m.observable[v] = CMatrix::Zero(m.dim, m.dim);
    for (int k = 0; k < m.n; ++k) {
      const CMatrix op = embed_single(m.site_dims, k + 1, axes[v]);
      m.control[v] += Complex(0, -m.gyros[k]) * op;
      m.observable[v] += op;
    }
  }

  switch (rho0.kind) {
    case Rho0Spec::Kind::GroundZ:
      m.rho0 = rho0_ground_z(m.observable[2]);
      m.rho0_preset = "ground-z";
      break;
    case Rho0Spec::Kind::Thermal:
      m.rho0 = rho0_thermal(m.drift, rho0.beta);
      m.rho0_preset = "thermal(beta=" + std::to_string(rho0.beta) + ")";
      break;
    case Rho0Spec::Kind::MaximallyMixed:
      m.rho0 = rho0_maximally_mixed(m.dim);
      m.rho0_preset = "maximally-mixed";
      break;
    case Rho0Spec::Kind::Explicit:
      m.rho0 = rho0.matrix;
      m.rho0_preset = "explicit";
      break;
  }
  detail::validate_density(m.rho0, m.dim);
  return m;
}

/// Adjacency on the exact input values: an edge iff J_kl != 0.
inline Eigen::MatrixXi interaction_graph(const SpinNetworkModel& m) {
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(m.n, m.n);
  for (int k = 0; k < m.n; ++k)
    for (int l = 0; l < m.n; ++l) adj(k, l) = (k != l && m.exchange(k, l) != 0.0) ? 1 : 0;
  return adj;
}

inline bool is_connected(const SpinNetworkModel& m) {
  const Eigen::MatrixXi adj = interaction_graph(m);
  std::vector<bool> seen(m.n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    for (int l = 0; l < m.n; ++l)
      if (adj(k, l) && !seen[l]) {
        seen[l] = true;
        ++count;
        stack.push_back(l);
      }
  }
  return count == m.n;
}

/// Dimension of the Lie algebra generated by {A, B_x, B_y, B_z}: iterated
/// commutators against a running orthonormal set until no rank growth.
/// Residuals above rel_tol times the candidate norm count toward rank.
inline int dynamical_lie_algebra_dim(const SpinNetworkModel& m, double rel_tol = 1e-8,
                                     int max_iterations = 64) {
  std::vector<CMatrix> basis;
  auto try_add = [&](const CMatrix& cand) {
    const double n0 = hs_norm(cand);
    // near-zero commutators are zero; the relative residual test below is
    // meaningless on rounding noise
    if (n0 < 1e-10) return false;
    CMatrix v = cand;
    for (int pass = 0; pass < 2; ++pass)
      for (const CMatrix& b : basis) v -= hs_inner(v, b) * b;
    const double n1 = hs_norm(v);
    if (n1 <= rel_tol * n0) return false;
    basis.push_back(v / n1);
    return true;
  };

  std::vector<CMatrix> generators;
  if (hs_norm(m.drift) > 1e-10) generators.push_back(m.drift);
  for (const CMatrix& b : m.control)
    if (hs_norm(b) > 1e-10) generators.push_back(b);
  for (const CMatrix& g : generators) try_add(g);

  const int full = m.dim * m.dim - 1;  // traceless bound
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool grew = false;
    const size_t frozen = basis.size();
    for (size_t i = 0; i < frozen; ++i)
      for (const CMatrix& g : generators)
        grew |= try_add(commutator(basis[i], g));
    if (!grew || static_cast<int>(basis.size()) >= full) return static_cast<int>(basis.size());
  }
  throw std::runtime_error("dynamical_lie_algebra_dim: iteration cap exceeded");
}

inline bool is_controllable(const SpinNetworkModel& m, double rel_tol = 1e-8) {
  return dynamical_lie_algebra_dim(m, rel_tol) >= m.dim * m.dim - 1;
}

/// Builds the involution-related partner: exchange negated, initial state
/// the trace-restored involution image. Throws if that image is not a
/// density matrix (the image of a state need not be one).
inline SpinNetworkModel cartan_partner(const SpinNetworkModel& m, const Involution& inv) {
  if (inv.split.dim != m.dim)
    throw std::invalid_argument("cartan_partner: involution carrier mismatch");
  const CMatrix rho_tl = traceless_part(m.rho0);
  const CMatrix image = Complex(0, -1) * involution_apply(inv, Complex(0, 1) * rho_tl);
  const CMatrix rho_partner = image + rho0_maximally_mixed(m.dim);
  return build_network(m.spins, -m.exchange, m.gyros, Rho0Spec::explicit_state(rho_partner));
}

}  // namespace spinnet
