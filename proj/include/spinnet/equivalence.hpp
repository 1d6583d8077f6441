// SPDX-License-Identifier: Apache-2.0
//
// Input-output equivalence of spin-network models: the structural decision
// (identical up to a site permutation, or exchange-negated with
// involution-related initial states), the homomorphism residual check, the
// two-level identification with rotation-angle recovery, the randomized
// simulation falsifier, and the trace-identity consistency suites.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spinnet/cartan.hpp"
#include "spinnet/cmatrix.hpp"
#include "spinnet/dynamics.hpp"
#include "spinnet/network.hpp"

namespace spinnet {

enum class Verdict { IdenticalUpToPermutation, CartanRelated, StructurallyDistinct, Undecided };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::IdenticalUpToPermutation: return "IdenticalUpToPermutation";
    case Verdict::CartanRelated: return "CartanRelated";
    case Verdict::StructurallyDistinct: return "StructurallyDistinct";
    default: return "Undecided";
  }
}

struct FalsifyWitness {
  ControlSchedule schedule;
  double gap = 0.0;
  int trial = -1;
};

struct EquivalenceVerdict {
  Verdict verdict = Verdict::Undecided;
  std::vector<int> permutation;  // site k of the first model -> permutation[k] of the second
  std::map<std::string, double> residuals;
  std::string reason;
  std::optional<FalsifyWitness> witness;  // attached by falsifier runs
  // diagnostic when spins mismatch: could the squared exchange constants be
  // proportional with a common factor alpha != 1
  bool proportional_exchange_possible = false;
  double proportional_alpha = 0.0;
};

// relative comparison for input parameters (J, gamma)
inline constexpr double param_rel_tol = 1e-9;

namespace detail {

inline bool param_close(double a, double b, double rel = param_rel_tol) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool is_scalar_state(const CMatrix& rho, double tol = 1e-10) {
  return max_abs(traceless_part(rho)) <= tol;
}

/// Unitary that reorders tensor factors so that site k of `dims` becomes
/// position perm[k] of the permuted ordering.
inline CMatrix site_permutation_operator(const std::vector<int>& dims,
                                         const std::vector<int>& perm) {
  const int n = static_cast<int>(dims.size());
  const int total = product_dim(dims);
  std::vector<int> permuted_dims(n);
  for (int k = 0; k < n; ++k) permuted_dims[perm[k]] = dims[k];
  std::vector<int> stride(n, 1), pstride(n, 1);
  for (int k = n - 2; k >= 0; --k) stride[k] = stride[k + 1] * dims[k + 1];
  for (int k = n - 2; k >= 0; --k) pstride[k] = pstride[k + 1] * permuted_dims[k + 1];
  CMatrix op = CMatrix::Zero(total, total);
  std::vector<int> digits(n, 0);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    for (int k = 0; k < n; ++k) {
      digits[k] = rem / stride[k];
      rem %= stride[k];
    }
    int target = 0;
    for (int k = 0; k < n; ++k) target += digits[k] * pstride[perm[k]];
    op(target, idx) = 1.0;
  }
  return op;
}

/// Matches gamma vectors up to a permutation; empty result when the
/// multisets differ. Matching is by sorted value, so the result does not
/// depend on the incoming site labelling.
inline std::optional<std::vector<int>> match_gammas(const Eigen::VectorXd& g1,
                                                    const Eigen::VectorXd& g2) {
  const int n = static_cast<int>(g1.size());
  std::vector<int> order1(n), order2(n);
  for (int i = 0; i < n; ++i) order1[i] = order2[i] = i;
  std::sort(order1.begin(), order1.end(), [&](int a, int b) { return g1[a] < g1[b]; });
  std::sort(order2.begin(), order2.end(), [&](int a, int b) { return g2[a] < g2[b]; });
  std::vector<int> perm(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!param_close(g1[order1[i]], g2[order2[i]])) return std::nullopt;
    perm[order1[i]] = order2[i];
  }
  return perm;
}

}  // namespace detail

struct HomomorphismReport {
  std::map<std::string, double> residuals;
  double tol = 0.0;
  bool passed = false;
};

/// Residuals of the homomorphism conditions mapping the first model onto the
/// second: drift and control generators through phi, observables through
/// phi* (= phi), and the traceless initial-state condition. Site labels must
/// already be aligned.
inline HomomorphismReport homomorphism_check(const Involution& phi, const SpinNetworkModel& m1,
                                             const SpinNetworkModel& m2, double tol = 1e-10) {
  if (m1.dim != phi.split.dim || m2.dim != phi.split.dim)
    throw std::invalid_argument("homomorphism_check: dimension mismatch with involution carrier");
  HomomorphismReport rep;
  rep.tol = tol;
  rep.residuals["drift"] = max_abs(m2.drift - involution_apply(phi, m1.drift));
  const char* names[3] = {"control_x", "control_y", "control_z"};
  const char* onames[3] = {"observable_x", "observable_y", "observable_z"};
  for (int v = 0; v < 3; ++v) {
    rep.residuals[names[v]] = max_abs(m2.control[v] - involution_apply(phi, m1.control[v]));
    // phi is self-adjoint, so phi*(iS') = iS reads phi(iS') - iS
    rep.residuals[onames[v]] = max_abs(
        involution_apply(phi, Complex(0, 1) * m2.observable[v]) - Complex(0, 1) * m1.observable[v]);
  }
  rep.residuals["rho0_traceless"] =
      max_abs(Complex(0, 1) * traceless_part(m2.rho0) -
              involution_apply(phi, Complex(0, 1) * traceless_part(m1.rho0)));
  rep.passed = true;
  for (const auto& [k, r] : rep.residuals)
    if (r > tol) rep.passed = false;
  return rep;
}

/// Decides equivalence structurally. Returns Undecided (with the reason)
/// when the hypotheses fail: both models controllable, gyromagnetic ratios
/// distinct and nonzero, not both initial states scalar.
inline EquivalenceVerdict condition_star_decide(const SpinNetworkModel& m1,
                                                const SpinNetworkModel& m2, double tol = 1e-10) {
  EquivalenceVerdict out;

  for (const auto* m : {&m1, &m2}) {
    for (int k = 0; k < m->n; ++k) {
      if (m->gyros[k] == 0.0) {
        out.reason = "hypothesis violated: zero gyromagnetic ratio";
        return out;
      }
      for (int l = k + 1; l < m->n; ++l)
        if (detail::param_close(m->gyros[k], m->gyros[l])) {
          out.reason = "hypothesis violated: gyromagnetic ratios not distinct";
          return out;
        }
    }
  }
  if (detail::is_scalar_state(m1.rho0) && detail::is_scalar_state(m2.rho0)) {
    out.reason = "hypothesis violated: both initial states are scalar";
    return out;
  }
  if (!is_controllable(m1) || !is_controllable(m2)) {
    out.reason = "hypothesis violated: model not controllable";
    return out;
  }

  if (m1.n != m2.n) {
    out.verdict = Verdict::StructurallyDistinct;
    out.reason = "different site counts";
    return out;
  }

  const auto perm = detail::match_gammas(m1.gyros, m2.gyros);
  if (!perm) {
    out.verdict = Verdict::StructurallyDistinct;
    out.reason = "gyromagnetic ratios do not match under any permutation";
    return out;
  }
  out.permutation = *perm;
  const std::vector<int>& p = *perm;

  bool spins_match = true;
  for (int k = 0; k < m1.n; ++k)
    if (m1.spins[k] != m2.spins[p[k]]) spins_match = false;
  if (!spins_match) {
    out.verdict = Verdict::StructurallyDistinct;
    out.reason = "spins differ under the gamma-matching permutation";
    // diagnostic: common proportionality factor for the squared exchange
    // constants (the equivalence proof excludes alpha != 1, reported only)
    double alpha_sq = 0.0;
    bool consistent = true;
    for (int k = 0; k < m1.n && consistent; ++k)
      for (int l = k + 1; l < m1.n; ++l) {
        const double a = m1.exchange(k, l) * m1.exchange(k, l);
        const double b = m2.exchange(p[k], p[l]) * m2.exchange(p[k], p[l]);
        if (a == 0.0 && b == 0.0) continue;
        if (b == 0.0) {
          consistent = false;
          break;
        }
        const double r = a / b;
        if (alpha_sq == 0.0)
          alpha_sq = r;
        else if (!detail::param_close(r, alpha_sq, 1e-6))
          consistent = false;
      }
    if (consistent && alpha_sq > 0.0) {
      for (int k = 0; k < m1.n; ++k) {
        const double lk = m1.spins[k].value(), lk2 = m2.spins[p[k]].value();
        if (!detail::param_close(lk * (lk + 1.0), lk2 * (lk2 + 1.0) / alpha_sq, 1e-6))
          consistent = false;
      }
    }
    out.proportional_exchange_possible = consistent && alpha_sq > 0.0;
    out.proportional_alpha = consistent ? std::sqrt(alpha_sq) : 0.0;
    return out;
  }

  bool j_equal = true, j_negated = true;
  for (int k = 0; k < m1.n; ++k)
    for (int l = k + 1; l < m1.n; ++l) {
      const double a = m1.exchange(k, l);
      const double b = m2.exchange(p[k], p[l]);
      if (!detail::param_close(a, b)) j_equal = false;
      if (!detail::param_close(a, -b)) j_negated = false;
    }

  // align the first model's tensor factors with the second's site ordering
  const CMatrix pi = detail::site_permutation_operator(m1.site_dims, p);
  const CMatrix rho1_aligned = pi * m1.rho0 * pi.adjoint();

  if (j_equal) {
    const double state_gap = max_abs(rho1_aligned - m2.rho0);
    out.residuals["state_gap"] = state_gap;
    if (state_gap <= tol) {
      out.verdict = Verdict::IdenticalUpToPermutation;
      return out;
    }
    // observability forces state equality when the dynamics agree
    out.verdict = Verdict::StructurallyDistinct;
    out.reason = "exchange constants equal but initial states differ";
    return out;
  }

  if (j_negated) {
    const Involution phi = Involution::from_split(odd_even_split(m2.site_dims));
    const CMatrix a1_aligned = pi * m1.drift * pi.adjoint();
    const double drift_res = max_abs(m2.drift - involution_apply(phi, a1_aligned));
    const double state_res =
        max_abs(Complex(0, 1) * traceless_part(m2.rho0) -
                involution_apply(phi, Complex(0, 1) * traceless_part(rho1_aligned)));
    out.residuals["drift_involution"] = drift_res;
    out.residuals["rho0_involution"] = state_res;
    if (drift_res <= tol && state_res <= tol) {
      out.verdict = Verdict::CartanRelated;
      return out;
    }
    out.verdict = Verdict::StructurallyDistinct;
    out.reason = "exchange constants negated but initial state is not the involution image";
    return out;
  }

  out.verdict = Verdict::StructurallyDistinct;
  out.reason = "exchange constants match neither sign pattern uniformly";
  return out;
}

// ---------------------------------------------------------------------------
// randomized falsifier

struct FalsifyParams {
  int trials = 50;
  double horizon = 8.0;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  // fixed draw distribution, recorded in reports for reproducibility
  int min_segments = 4, max_segments = 16;
  double min_duration = 0.1, max_duration = 1.0;
  double amplitude = 2.0;
};

namespace detail {

inline ControlSchedule draw_schedule(std::mt19937_64& g, const FalsifyParams& p) {
  ControlSchedule s;
  const int span = p.max_segments - p.min_segments + 1;
  const int count = p.min_segments + static_cast<int>(g() % std::uint64_t(span));
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    ControlSegment seg;
    seg.duration = p.min_duration + (p.max_duration - p.min_duration) * u01(g);
    // keep within the horizon once the minimum segment count is reached
    if (total + seg.duration > p.horizon && static_cast<int>(s.segments.size()) >= p.min_segments)
      break;
    seg.ux = p.amplitude * (2.0 * u01(g) - 1.0);
    seg.uy = p.amplitude * (2.0 * u01(g) - 1.0);
    seg.uz = p.amplitude * (2.0 * u01(g) - 1.0);
    total += seg.duration;
    s.segments.push_back(seg);
  }
  return s;
}

inline std::mt19937_64 trial_engine(std::uint64_t seed, int trial) {
  return std::mt19937_64(seed + 0x9E3779B97F4A7C15ULL * std::uint64_t(trial + 1));
}

}  // namespace detail

/// Simulates both models under seeded random schedules and returns the first
/// schedule whose outputs differ by more than the tolerance, if any. Outputs
/// are comparable scalars even when the state dimensions differ.
inline std::optional<FalsifyWitness> falsify_by_simulation(const BilinearModel& m1,
                                                           const BilinearModel& m2,
                                                           const FalsifyParams& params) {
  for (int trial = 0; trial < params.trials; ++trial) {
    std::mt19937_64 g = detail::trial_engine(params.seed, trial);
    const ControlSchedule schedule = detail::draw_schedule(g, params);
    const OutputTrace t1 = propagate(m1, schedule);
    const OutputTrace t2 = propagate(m2, schedule);
    const double gap = t1.max_gap(t2);
    if (gap > params.tol) return FalsifyWitness{schedule, gap, trial};
  }
  return std::nullopt;
}

inline std::optional<FalsifyWitness> falsify_by_simulation(const SpinNetworkModel& m1,
                                                           const SpinNetworkModel& m2,
                                                           const FalsifyParams& params) {
  return falsify_by_simulation(to_bilinear(m1), to_bilinear(m2), params);
}

// ---------------------------------------------------------------------------
// two-level identification

struct TwoLevelVerdict {
  Verdict verdict = Verdict::Undecided;
  bool equivalent = false;
  double alpha = 0.0;  // rotation angle, in [0, 2 pi)
  std::map<std::string, double> residuals;
  std::string reason;
};

/// Bloch components (r_x, r_y, r_z) of a 2x2 state in the spin-1/2 basis:
/// rho = r_x sx + r_y sy + r_z sz + 1/2.
inline std::array<double, 3> bloch_components(const CMatrix& rho) {
  const SpinTriple& s = spin_matrices(HalfInt(1));
  const std::array<const CMatrix*, 3> axes{&s.x, &s.y, &s.z};
  std::array<double, 3> r{};
  for (int v = 0; v < 3; ++v)
    r[v] = std::real(hs_inner(rho, *axes[v])) / std::real(hs_inner(*axes[v], *axes[v]));
  return r;
}

/// Decides equivalence of two two-level models (drifts x i sx + y i sy,
/// common control i sz, observable sz): equivalent iff the drift norms agree
/// and the in-plane Bloch components rotate by the same angle alpha that
/// aligns the drifts, with the z component unchanged. Returns alpha mod 2 pi.
inline TwoLevelVerdict two_level_decide(double x, double y, const CMatrix& rho0, double xp,
                                        double yp, const CMatrix& rho0p, double tol = 1e-9) {
  TwoLevelVerdict out;
  if (!two_level_controllable(x, y) || !two_level_controllable(xp, yp)) {
    out.reason = "hypothesis violated: x^2 + y^2 must be nonzero for both models";
    return out;
  }
  detail::validate_density(rho0, 2);
  detail::validate_density(rho0p, 2);
  if (detail::is_scalar_state(rho0) && detail::is_scalar_state(rho0p)) {
    out.reason = "hypothesis violated: both initial states are scalar";
    return out;
  }

  const double n1 = x * x + y * y, n2 = xp * xp + yp * yp;
  out.residuals["drift_norm"] = std::abs(n1 - n2);
  const auto r = bloch_components(rho0);
  const auto rp = bloch_components(rho0p);

  double alpha = std::atan2(y, x) - std::atan2(yp, xp);
  const double two_pi = 2.0 * M_PI;
  alpha = std::fmod(alpha, two_pi);
  if (alpha < 0) alpha += two_pi;
  const double c = std::cos(alpha), s = std::sin(alpha);
  out.residuals["bloch_xy"] = std::max(std::abs(c * r[0] + s * r[1] - rp[0]),
                                       std::abs(-s * r[0] + c * r[1] - rp[1]));
  out.residuals["bloch_z"] = std::abs(r[2] - rp[2]);
  out.alpha = alpha;

  const double scale = std::max(1.0, n1);
  if (out.residuals["drift_norm"] <= tol * scale && out.residuals["bloch_xy"] <= tol &&
      out.residuals["bloch_z"] <= tol) {
    out.equivalent = true;
    out.verdict = Verdict::CartanRelated;
  } else {
    out.verdict = Verdict::StructurallyDistinct;
    out.reason = out.residuals["drift_norm"] > tol * scale
                     ? "drift norms differ"
                     : "initial states are not related by the drift-aligning rotation";
  }
  return out;
}

// ---------------------------------------------------------------------------
// trace-identity consistency suites

struct TraceIdentityReport {
  std::map<std::string, double> residuals;
  double tol = 0.0;
  bool passed = false;
};

/// Simulates corresponding trajectories of an equivalent pair under the same
/// schedule and measures the residuals of the derived trace identities:
/// single-site expectations, the exchange-weighted two/three-site extensions
/// with their l(l+1) reduction prefactors, the conjugated-observable family,
/// and the periodicity and half-period sign of P(t) = e^{i sz t} sx
/// e^{-i sz t} on site 1. Requires the pair verified equivalent with aligned
/// site labels.
inline TraceIdentityReport trace_identity_suite(const SpinNetworkModel& m1,
                                                const SpinNetworkModel& m2, const Involution& phi,
                                                const ControlSchedule& schedule,
                                                double tol = 1e-8) {
  (void)phi;  // the decision rebuilds the involution for the residual check
  const EquivalenceVerdict v = condition_star_decide(m1, m2);
  if (v.verdict != Verdict::IdenticalUpToPermutation && v.verdict != Verdict::CartanRelated)
    throw std::invalid_argument(std::string("trace_identity_suite: pair is not equivalent (") +
                                to_string(v.verdict) + (v.reason.empty() ? "" : ": " + v.reason) +
                                ")");
  for (size_t k = 0; k < v.permutation.size(); ++k)
    if (v.permutation[k] != static_cast<int>(k))
      throw std::invalid_argument("trace_identity_suite: site labels must be aligned");

  TraceIdentityReport rep;
  rep.tol = tol;

  PropagateOptions opt;
  opt.samples_per_segment = 5;
  opt.keep_states = true;
  const OutputTrace t1 = propagate(to_bilinear(m1), schedule, opt);
  const OutputTrace t2 = propagate(to_bilinear(m2), schedule, opt);
  const size_t nsamp = t1.states.size();
  const std::array<Axis, 3> axes{Axis::X, Axis::Y, Axis::Z};
  const auto& dims = m1.site_dims;

  auto pair_residual = [&](const CMatrix& op, double w1, double w2) {
    double worst = 0.0;
    for (size_t i = 0; i < nsamp; ++i)
      worst = std::max(worst, std::abs(w1 * std::real((op * t1.states[i]).trace()) -
                                       w2 * std::real((op * t2.states[i]).trace())));
    return worst;
  };

  // single-site expectations agree for every site and axis
  double r_p2 = 0.0;
  for (int k = 1; k <= m1.n; ++k)
    for (Axis vx : axes) r_p2 = std::max(r_p2, pair_residual(embed_single(dims, k, vx), 1.0, 1.0));
  rep.residuals["single_site"] = r_p2;

  // exchange-weighted two-site extension of the site-1 identity
  double r_two = 0.0;
  for (int d = 2; d <= m1.n; ++d) {
    const double j1 = m1.exchange(0, d - 1), j2 = m2.exchange(0, d - 1);
    for (Axis vb : axes)
      r_two = std::max(
          r_two, pair_residual(embed(SiteOperatorSpec{{{1, Axis::X}, {d, vb}}, dims}), j1, j2));
  }
  rep.residuals["two_site_weighted"] = r_two;

  // one more extension: three-site operators weighted by both constants
  if (m1.n >= 3) {
    double r_three = 0.0;
    const double j112 = m1.exchange(0, 1), j212 = m2.exchange(0, 1);
    const double j123 = m1.exchange(1, 2), j223 = m2.exchange(1, 2);
    for (Axis v2 : axes)
      for (Axis v3 : axes)
        r_three = std::max(
            r_three, pair_residual(embed(SiteOperatorSpec{{{1, Axis::X}, {2, v2}, {3, v3}}, dims}),
                                   j112 * j123, j212 * j223));
    rep.residuals["three_site_weighted"] = r_three;
  }

  // l(l+1) reduction: dropping site 2 from the two-site identity
  {
    const double l2 = m1.spins[1].value(), l2p = m2.spins[1].value();
    const double w1 = l2 * (l2 + 1.0) * m1.exchange(0, 1) * m1.exchange(0, 1);
    const double w2 = l2p * (l2p + 1.0) * m2.exchange(0, 1) * m2.exchange(0, 1);
    double r_red = 0.0;
    for (Axis vx : axes) r_red = std::max(r_red, pair_residual(embed_single(dims, 1, vx), w1, w2));
    rep.residuals["l_reduction"] = r_red;
  }

  // conjugated observable family: W(t) = e^{i sz_1 t} I_1v e^{-i sz_1 t}
  {
    const CMatrix sz1 = embed_single(dims, 1, Axis::Z);
    double r_conj = 0.0;
    for (int it = 0; it <= 8; ++it) {
      const double t = 2.0 * M_PI * it / 8.0;
      const CMatrix u = expm_skew(Complex(0, t) * sz1);
      for (Axis vx : axes) {
        const CMatrix w = u * embed_single(dims, 1, vx) * u.adjoint();
        for (size_t i = 0; i < nsamp; i += 7)
          r_conj = std::max(r_conj, std::abs(std::real((w * t1.states[i]).trace()) -
                                             std::real((w * t2.states[i]).trace())));
      }
    }
    rep.residuals["conjugated_observable"] = r_conj;
  }

  // P(t) on site 1: 2 pi periodic, P(pi) = -sx
  {
    const HalfInt l1 = m1.spins[0];
    const CMatrix& sx = spin_matrices(l1).x;
    rep.residuals["p_half_period"] = max_abs(conjugated_sx(l1, M_PI) + sx);
    rep.residuals["p_periodicity"] = max_abs(conjugated_sx(l1, 2.0 * M_PI) - sx);
  }

  rep.passed = true;
  for (const auto& [name, r] : rep.residuals)
    if (r > tol) rep.passed = false;
  return rep;
}

}  // namespace spinnet
