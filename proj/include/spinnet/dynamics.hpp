// SPDX-License-Identifier: Apache-2.0
//
// Liouville propagation under piecewise-constant controls. Each constant
// segment is propagated exactly through the eigendecomposition of its
// skew-Hermitian generator, so there is no integrator error to budget for.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "spinnet/cmatrix.hpp"
#include "spinnet/network.hpp"
#include "spinnet/spin.hpp"

namespace spinnet {

struct ControlSegment {
  double duration = 0.0;
  double ux = 0.0, uy = 0.0, uz = 0.0;
};

struct ControlSchedule {
  std::vector<ControlSegment> segments;

  double horizon() const {
    double t = 0.0;
    for (const ControlSegment& s : segments) t += s.duration;
    return t;
  }
};

/// Generic bilinear carrier: generator A + sum_v B_v u_v, outputs
/// y_v = tr(S_v rho). Spin networks lower onto this; the two-level model
/// uses the z slot only.
struct BilinearModel {
  int dim = 0;
  CMatrix drift;
  std::array<CMatrix, 3> control;
  std::array<CMatrix, 3> observable;
  CMatrix rho0;
};

inline BilinearModel to_bilinear(const SpinNetworkModel& m) {
  return BilinearModel{m.dim, m.drift, m.control, m.observable, m.rho0};
}

struct OutputTrace {
  std::vector<double> times;
  std::vector<std::array<double, 3>> y;
  std::vector<CMatrix> states;  // filled only when requested

  double max_gap(const OutputTrace& other) const {
    double g = 0.0;
    const size_t n = std::min(y.size(), other.y.size());
    for (size_t i = 0; i < n; ++i)
      for (int v = 0; v < 3; ++v) g = std::max(g, std::abs(y[i][v] - other.y[i][v]));
    return g;
  }
};

struct PropagateOptions {
  int samples_per_segment = 9;  // endpoint plus eight interior points
  bool keep_states = false;
};

/// Exact piecewise propagation rho -> e^{G tau} rho e^{-G tau} with
/// G = A + B_x u_x + B_y u_y + B_z u_z; outputs sampled at uniform instants
/// within each segment, endpoints included.
inline OutputTrace propagate(const BilinearModel& m, const ControlSchedule& schedule,
                             const PropagateOptions& opt = {}) {
  if (schedule.segments.empty()) throw std::invalid_argument("propagate: empty schedule");
  if (opt.samples_per_segment < 1)
    throw std::invalid_argument("propagate: samples_per_segment must be >= 1");

  OutputTrace trace;
  CMatrix rho = m.rho0;
  double t = 0.0;
  auto record = [&](double time, const CMatrix& r) {
    std::array<double, 3> yv{};
    for (int v = 0; v < 3; ++v) yv[v] = std::real((m.observable[v] * r).trace());
    trace.times.push_back(time);
    trace.y.push_back(yv);
    if (opt.keep_states) trace.states.push_back(r);
  };
  record(0.0, rho);

  for (const ControlSegment& seg : schedule.segments) {
    if (!(seg.duration > 0.0) || !std::isfinite(seg.ux) || !std::isfinite(seg.uy) ||
        !std::isfinite(seg.uz))
      throw std::invalid_argument("propagate: segment has non-finite controls or duration <= 0");
    const CMatrix gen =
        m.drift + seg.ux * m.control[0] + seg.uy * m.control[1] + seg.uz * m.control[2];
    // one eigendecomposition per segment; every sample is exact in it
    const CMatrix h = Complex(0, 1) * gen;
    Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
    const Eigen::VectorXd w = es.eigenvalues();
    const CMatrix& vec = es.eigenvectors();
    const CMatrix rho_eig = vec.adjoint() * rho * vec;
    for (int k = 1; k <= opt.samples_per_segment; ++k) {
      const double tau = seg.duration * k / opt.samples_per_segment;
      Eigen::VectorXcd ph(w.size());
      for (Eigen::Index i = 0; i < w.size(); ++i) ph[i] = std::exp(Complex(0, -w[i] * tau));
      const CMatrix r = vec * (ph.asDiagonal() * rho_eig * ph.asDiagonal().toDenseMatrix().adjoint()) *
                        vec.adjoint();
      record(t + tau, r);
      if (k == opt.samples_per_segment) rho = r;
    }
    t += seg.duration;
  }
  return trace;
}

/// Single spin-1/2 with drift x*i*sx + y*i*sy, control direction i*sz and
/// observable sz (z slot of the bilinear carrier). Controllable iff
/// x^2 + y^2 != 0.
inline BilinearModel two_level_model(double x, double y, const CMatrix& rho0) {
  detail::validate_density(rho0, 2);
  const SpinTriple& s = spin_matrices(HalfInt(1));
  BilinearModel m;
  m.dim = 2;
  m.drift = Complex(0, x) * s.x + Complex(0, y) * s.y;
  m.control = {CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), Complex(0, 1) * s.z};
  m.observable = {CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), s.z};
  m.rho0 = rho0;
  return m;
}

inline bool two_level_controllable(double x, double y) { return x * x + y * y != 0.0; }

/// P(t) = e^{i sz t} sx e^{-i sz t} for a single site of spin l; periodic
/// with period 2 pi and P(pi) = -sx.
inline CMatrix conjugated_sx(HalfInt l, double t) {
  const SpinTriple& s = spin_matrices(l);
  const CMatrix u = expm_skew(Complex(0, t) * s.z);
  return u * s.x * u.adjoint();
}

}  // namespace spinnet
