// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "spinnet/equivalence.hpp"

using namespace spinnet;

namespace {

// controllable two-site pair used throughout: spins (1/2, 1/2), J = 1,
// distinct gammas, mildly polarized state whose involution image stays PSD
SpinNetworkModel base_two_site() {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, 2);
  J(0, 1) = J(1, 0) = 1.0;
  Eigen::VectorXd g(2);
  g << 1.0, 2.0;
  CMatrix rho = 0.95 * CMatrix::Identity(4, 4) / 4.0;
  rho(3, 3) += 0.05;
  return build_network({HalfInt(1), HalfInt(1)}, J, g, Rho0Spec::explicit_state(rho));
}

SpinNetworkModel permuted_copy(const SpinNetworkModel& m, const std::vector<int>& perm) {
  const int n = m.n;
  Eigen::MatrixXd Jp = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd gp(n);
  std::vector<HalfInt> spins(n, HalfInt(1));
  for (int k = 0; k < n; ++k) {
    gp[perm[k]] = m.gyros[k];
    spins[perm[k]] = m.spins[k];
  }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) Jp(perm[k], perm[l]) = m.exchange(k, l);
  const CMatrix pi = detail::site_permutation_operator(m.site_dims, perm);
  return build_network(spins, Jp, gp, Rho0Spec::explicit_state(pi * m.rho0 * pi.adjoint()));
}

}  // namespace

TEST_CASE("homomorphism residuals for an involution-related pair") {
  const SpinNetworkModel m = base_two_site();
  const Involution phi = Involution::from_split(odd_even_split(m.site_dims));
  const SpinNetworkModel partner = cartan_partner(m, phi);
  const HomomorphismReport rep = homomorphism_check(phi, m, partner, 1e-10);
  CHECK(rep.passed);
  for (const auto& [name, r] : rep.residuals) {
    INFO(name);
    CHECK(r <= 1e-10);
  }
}

TEST_CASE("identity homomorphism maps a model onto itself") {
  const SpinNetworkModel m = base_two_site();
  const Involution id = Involution::identity(m.site_dims);
  const HomomorphismReport rep = homomorphism_check(id, m, m, 1e-10);
  CHECK(rep.passed);
}

TEST_CASE("state mismatch shows up in the rho residual") {
  const SpinNetworkModel m = base_two_site();
  const Involution phi = Involution::from_split(odd_even_split(m.site_dims));
  // negate the exchange but keep the original state: the rho condition fails
  const SpinNetworkModel wrong =
      build_network(m.spins, -m.exchange, m.gyros, Rho0Spec::explicit_state(m.rho0));
  const HomomorphismReport rep = homomorphism_check(phi, m, wrong, 1e-10);
  CHECK_FALSE(rep.passed);
  CHECK(rep.residuals.at("rho0_traceless") > 1e-10);
  CHECK(rep.residuals.at("drift") <= 1e-10);  // drift condition still holds
}

TEST_CASE("decision: identical up to permutation") {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3, 3);
  J(0, 1) = J(1, 0) = 1.0;
  J(1, 2) = J(2, 1) = 0.7;
  Eigen::VectorXd g(3);
  g << 1.0, 2.0, 3.0;
  CMatrix rho = 0.95 * CMatrix::Identity(12, 12) / 12.0;
  rho(11, 11) += 0.05;
  const SpinNetworkModel m =
      build_network({HalfInt(1), HalfInt(1), HalfInt(2)}, J, g, Rho0Spec::explicit_state(rho));
  const std::vector<int> perm{1, 2, 0};
  const SpinNetworkModel mp = permuted_copy(m, perm);

  const EquivalenceVerdict v = condition_star_decide(m, mp);
  CHECK(v.verdict == Verdict::IdenticalUpToPermutation);
  REQUIRE(v.permutation.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(v.permutation[k] == perm[k]);
}

TEST_CASE("decision: involution-related pair") {
  const SpinNetworkModel m = base_two_site();
  const Involution phi = Involution::from_split(odd_even_split(m.site_dims));
  const SpinNetworkModel partner = cartan_partner(m, phi);
  const EquivalenceVerdict v = condition_star_decide(m, partner);
  CHECK(v.verdict == Verdict::CartanRelated);
  CHECK(v.residuals.at("drift_involution") <= 1e-10);
  CHECK(v.residuals.at("rho0_involution") <= 1e-10);
}

TEST_CASE("decision is invariant under pre-permuting either model") {
  const SpinNetworkModel m = base_two_site();
  const Involution phi = Involution::from_split(odd_even_split(m.site_dims));
  const SpinNetworkModel partner = cartan_partner(m, phi);
  const SpinNetworkModel shuffled = permuted_copy(partner, {1, 0});
  const EquivalenceVerdict v = condition_star_decide(m, shuffled);
  CHECK(v.verdict == Verdict::CartanRelated);
  CHECK(v.permutation == std::vector<int>{1, 0});
}

TEST_CASE("decision: structural mismatches") {
  const SpinNetworkModel m = base_two_site();

  SECTION("gamma multiset differs") {
    Eigen::VectorXd g(2);
    g << 1.0, 5.0;
    const SpinNetworkModel other =
        build_network(m.spins, m.exchange, g, Rho0Spec::explicit_state(m.rho0));
    const EquivalenceVerdict v = condition_star_decide(m, other);
    CHECK(v.verdict == Verdict::StructurallyDistinct);
  }

  SECTION("site counts differ") {
    const SpinNetworkModel single =
        build_network({HalfInt(1)}, Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, 1.0),
                      Rho0Spec::ground_z());
    CHECK(condition_star_decide(m, single).verdict == Verdict::StructurallyDistinct);
  }

  SECTION("exchange constant perturbed") {
    Eigen::MatrixXd J = m.exchange;
    J(0, 1) = J(1, 0) = 1.1;
    const SpinNetworkModel other =
        build_network(m.spins, J, m.gyros, Rho0Spec::explicit_state(m.rho0));
    const EquivalenceVerdict v = condition_star_decide(m, other);
    CHECK(v.verdict == Verdict::StructurallyDistinct);
  }

  SECTION("equal exchange but different states") {
    CMatrix rho = 0.9 * CMatrix::Identity(4, 4) / 4.0;
    rho(0, 0) += 0.1;
    const SpinNetworkModel other =
        build_network(m.spins, m.exchange, m.gyros, Rho0Spec::explicit_state(rho));
    const EquivalenceVerdict v = condition_star_decide(m, other);
    CHECK(v.verdict == Verdict::StructurallyDistinct);
  }
}

TEST_CASE("decision: spin mismatch reports the proportional-exchange diagnostic") {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2, 2);
  J(0, 1) = J(1, 0) = 1.0;
  Eigen::VectorXd g(2);
  g << 1.0, 2.0;
  const SpinNetworkModel m = build_network({HalfInt(1), HalfInt(1)}, J, g, Rho0Spec::ground_z());
  // both spins 3/2 and the exchange scaled by 1/sqrt(5): l(l+1) grows by 5
  // at every site while J^2 shrinks by 5, a consistent common factor
  Eigen::MatrixXd J2 = Eigen::MatrixXd::Zero(2, 2);
  J2(0, 1) = J2(1, 0) = 1.0 / std::sqrt(5.0);
  const SpinNetworkModel other =
      build_network({HalfInt(3), HalfInt(3)}, J2, g, Rho0Spec::ground_z());
  const EquivalenceVerdict v = condition_star_decide(m, other);
  CHECK(v.verdict == Verdict::StructurallyDistinct);
  CHECK(v.proportional_exchange_possible);
  CHECK(v.proportional_alpha == Catch::Approx(std::sqrt(5.0)).epsilon(1e-9));

  // an inconsistent scaling must not report the diagnostic
  Eigen::MatrixXd J3 = Eigen::MatrixXd::Zero(2, 2);
  J3(0, 1) = J3(1, 0) = 0.9;
  const SpinNetworkModel off =
      build_network({HalfInt(3), HalfInt(3)}, J3, g, Rho0Spec::ground_z());
  const EquivalenceVerdict v2 = condition_star_decide(m, off);
  CHECK(v2.verdict == Verdict::StructurallyDistinct);
  CHECK_FALSE(v2.proportional_exchange_possible);
}

TEST_CASE("decision: hypothesis violations give Undecided") {
  const SpinNetworkModel m = base_two_site();

  SECTION("duplicate gammas") {
    Eigen::VectorXd g(2);
    g << 1.0, 1.0;
    const SpinNetworkModel dup =
        build_network(m.spins, m.exchange, g, Rho0Spec::explicit_state(m.rho0));
    const EquivalenceVerdict v = condition_star_decide(dup, dup);
    CHECK(v.verdict == Verdict::Undecided);
    CHECK_FALSE(v.reason.empty());
  }

  SECTION("both states scalar") {
    const SpinNetworkModel mixed =
        build_network(m.spins, m.exchange, m.gyros, Rho0Spec::maximally_mixed());
    const EquivalenceVerdict v = condition_star_decide(mixed, mixed);
    CHECK(v.verdict == Verdict::Undecided);
  }

  SECTION("uncontrollable model") {
    const SpinNetworkModel loose = build_network(m.spins, Eigen::MatrixXd::Zero(2, 2), m.gyros,
                                                 Rho0Spec::explicit_state(m.rho0));
    const EquivalenceVerdict v = condition_star_decide(loose, loose);
    CHECK(v.verdict == Verdict::Undecided);
  }
}

TEST_CASE("falsifier finds no witness for equivalent pairs") {
  const SpinNetworkModel m = base_two_site();
  const Involution phi = Involution::from_split(odd_even_split(m.site_dims));
  const SpinNetworkModel partner = cartan_partner(m, phi);
  FalsifyParams p;
  p.trials = 10;
  p.seed = 2024;
  CHECK_FALSE(falsify_by_simulation(m, partner, p).has_value());
  CHECK_FALSE(falsify_by_simulation(m, m, p).has_value());
}

TEST_CASE("falsifier separates a perturbed exchange constant") {
  const SpinNetworkModel m = base_two_site();
  Eigen::MatrixXd J = m.exchange;
  J(0, 1) = J(1, 0) = 1.1;
  const SpinNetworkModel other =
      build_network(m.spins, J, m.gyros, Rho0Spec::explicit_state(m.rho0));
  FalsifyParams p;
  p.trials = 50;
  p.seed = 2024;
  const auto witness = falsify_by_simulation(m, other, p);
  REQUIRE(witness.has_value());
  CHECK(witness->gap > 1e-3);
  CHECK(witness->schedule.horizon() <= p.horizon + 1e-12);
  CHECK(witness->schedule.segments.size() >= 4);
}

TEST_CASE("falsifier separates a perturbed gyromagnetic ratio") {
  const SpinNetworkModel m = base_two_site();
  Eigen::VectorXd g = m.gyros;
  g[1] *= 1.05;
  const SpinNetworkModel other =
      build_network(m.spins, m.exchange, g, Rho0Spec::explicit_state(m.rho0));
  CHECK(condition_star_decide(m, other).verdict == Verdict::StructurallyDistinct);
  FalsifyParams p;
  p.trials = 50;
  p.seed = 2024;
  p.tol = 1e-3;
  const auto witness = falsify_by_simulation(m, other, p);
  REQUIRE(witness.has_value());
  CHECK(witness->gap > 1e-3);
}

TEST_CASE("falsifier draws are deterministic in the seed") {
  FalsifyParams p;
  std::mt19937_64 g1 = detail::trial_engine(7, 3), g2 = detail::trial_engine(7, 3);
  const ControlSchedule a = detail::draw_schedule(g1, p);
  const ControlSchedule b = detail::draw_schedule(g2, p);
  REQUIRE(a.segments.size() == b.segments.size());
  for (size_t i = 0; i < a.segments.size(); ++i) {
    CHECK(a.segments[i].duration == b.segments[i].duration);
    CHECK(a.segments[i].ux == b.segments[i].ux);
  }
}

TEST_CASE("two-level decision recovers the rotation angle") {
  const SpinTriple& s = spin_matrices(HalfInt(1));
  const double x = 0.8, y = -0.5, alpha = M_PI / 3.0;
  const double c = std::cos(alpha), sn = std::sin(alpha);
  const double xp = c * x + sn * y, yp = -sn * x + c * y;

  const double rx = 0.1, ry = 0.2, rz = 0.3;
  const CMatrix rho = 0.5 * CMatrix::Identity(2, 2) + rx * s.x + ry * s.y + rz * s.z;
  const double rxp = c * rx + sn * ry, ryp = -sn * rx + c * ry;
  const CMatrix rhop = 0.5 * CMatrix::Identity(2, 2) + rxp * s.x + ryp * s.y + rz * s.z;

  const TwoLevelVerdict v = two_level_decide(x, y, rho, xp, yp, rhop);
  CHECK(v.equivalent);
  CHECK(std::abs(v.alpha - alpha) < 1e-10);

  // symmetric call recovers the opposite angle mod 2 pi
  const TwoLevelVerdict vr = two_level_decide(xp, yp, rhop, x, y, rho);
  CHECK(vr.equivalent);
  CHECK(std::abs(vr.alpha - (2.0 * M_PI - alpha)) < 1e-10);

  // identical models: alpha = 0
  const TwoLevelVerdict vi = two_level_decide(x, y, rho, x, y, rho);
  CHECK(vi.equivalent);
  CHECK(std::abs(vi.alpha) < 1e-12);
}

TEST_CASE("two-level decision rejects scaled drifts and confirms by simulation") {
  const SpinTriple& s = spin_matrices(HalfInt(1));
  const double x = 0.8, y = -0.5;
  const CMatrix rho = 0.5 * CMatrix::Identity(2, 2) + 0.1 * s.x + 0.2 * s.y + 0.3 * s.z;
  const double scale = std::sqrt(2.0);
  const TwoLevelVerdict v = two_level_decide(x, y, rho, scale * x, scale * y, rho);
  CHECK_FALSE(v.equivalent);
  CHECK(v.verdict == Verdict::StructurallyDistinct);

  FalsifyParams p;
  p.trials = 20;
  p.seed = 5;
  const auto witness =
      falsify_by_simulation(two_level_model(x, y, rho), two_level_model(scale * x, scale * y, rho), p);
  REQUIRE(witness.has_value());
  CHECK(witness->gap > 1e-3);
}

TEST_CASE("two-level preconditions") {
  const CMatrix rho = CMatrix::Identity(2, 2) / 2.0;
  CHECK(two_level_decide(0.0, 0.0, rho, 1.0, 0.0, rho).verdict == Verdict::Undecided);
  CHECK(two_level_decide(1.0, 0.0, rho, 1.0, 0.0, rho).verdict == Verdict::Undecided);
}

TEST_CASE("trace identities hold along an equivalent pair's trajectories") {
  const SpinNetworkModel m = base_two_site();
  const Involution phi = Involution::from_split(odd_even_split(m.site_dims));
  const SpinNetworkModel partner = cartan_partner(m, phi);

  ControlSchedule schedule;
  std::mt19937_64 g(17);
  for (int i = 0; i < 6; ++i)
    schedule.segments.push_back({0.2 + 0.6 * detail::u01(g), 4 * detail::u01(g) - 2,
                                 4 * detail::u01(g) - 2, 4 * detail::u01(g) - 2});

  const TraceIdentityReport rep = trace_identity_suite(m, partner, phi, schedule, 1e-8);
  CHECK(rep.passed);
  CHECK(rep.residuals.at("single_site") <= 1e-8);
  CHECK(rep.residuals.at("two_site_weighted") <= 1e-8);
  CHECK(rep.residuals.at("l_reduction") <= 1e-8);
  CHECK(rep.residuals.at("conjugated_observable") <= 1e-8);
  CHECK(rep.residuals.at("p_half_period") <= 1e-12);
  CHECK(rep.residuals.at("p_periodicity") <= 1e-12);
}

TEST_CASE("trace identity suite refuses non-equivalent pairs") {
  const SpinNetworkModel m = base_two_site();
  Eigen::MatrixXd J = m.exchange;
  J(0, 1) = J(1, 0) = 1.3;
  const SpinNetworkModel other =
      build_network(m.spins, J, m.gyros, Rho0Spec::explicit_state(m.rho0));
  ControlSchedule schedule{{{1.0, 0, 0, 0}}};
  const Involution phi = Involution::from_split(odd_even_split(m.site_dims));
  CHECK_THROWS_AS(trace_identity_suite(m, other, phi, schedule), std::invalid_argument);
}
