// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spinnet/cartan.hpp"

using namespace spinnet;

TEST_CASE("elementary C and T matrices") {
  CMatrix c2(2, 2), t2(2, 2);
  c2 << -1, 0, 0, 1;
  t2 << 0, 1, 1, 0;
  CHECK(max_abs(c_matrix(2) - c2) == 0.0);
  CHECK(max_abs(t_matrix(2) - t2) == 0.0);
  for (int k = 1; k <= 9; ++k) {
    const CMatrix c = c_matrix(k), t = t_matrix(k);
    CHECK(max_abs(c * c - CMatrix::Identity(k, k)) == 0.0);
    CHECK(max_abs(t * t - CMatrix::Identity(k, k)) == 0.0);
    CHECK(max_abs(t - t.transpose()) == 0.0);
  }
  CHECK_THROWS_AS(c_matrix(0), std::invalid_argument);
}

TEST_CASE("T conjugation reverses a diagonal matrix") {
  CMatrix d = CMatrix::Zero(4, 4);
  d.diagonal() << 1, 2, 3, 4;
  const CMatrix t = t_matrix(4);
  CMatrix rev = CMatrix::Zero(4, 4);
  rev.diagonal() << 4, 3, 2, 1;
  CHECK(max_abs(t * d * t - rev) == 0.0);
}

TEST_CASE("site conjugator known values") {
  CMatrix u2(2, 2);
  u2 << -1, 0, 0, 1;
  CHECK(max_abs(site_conjugator(2) - u2) == 0.0);

  // N = 3, k = 1: C_1 = -1, T_1 = 1, (-1)^k = -1
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix u3(3, 3);
  u3 << Complex(0, -s), 0, Complex(0, -s), 0, 1, 0, s, 0, -s;
  CHECK(max_abs(site_conjugator(3) - u3) < 1e-15);

  for (int n = 2; n <= 9; ++n) CHECK(is_unitary(site_conjugator(n), 1e-12));
  CHECK_THROWS_AS(site_conjugator(1), std::invalid_argument);
}

TEST_CASE("so and sp membership") {
  const SpinTriple& s = spin_matrices(HalfInt(1));
  // i sy is real antisymmetric
  CHECK(is_in_so(Complex(0, 1) * s.y));
  CHECK(is_in_so(CMatrix::Zero(3, 3)));
  CHECK(is_in_sp(CMatrix::Zero(4, 4)));
  CHECK_FALSE(is_in_so(Complex(0, 1) * s.z));

  const SpinTriple& s32 = spin_matrices(HalfInt(3));
  const CMatrix u = site_conjugator(4);
  CHECK(is_in_sp(u * (Complex(0, 1) * s32.z) * u.adjoint(), 1e-12));
  CHECK_THROWS_AS(is_in_sp(CMatrix::Zero(3, 3)), std::invalid_argument);
}

TEST_CASE("conjugation verification for N = 2..9") {
  for (int n = 2; n <= 9; ++n) {
    const ConjugationReport rep = verify_theorem_1_2(HalfInt(n - 1), 1e-12);
    INFO("N = " << n);
    CHECK(rep.passed);
    CHECK(rep.symplectic == (n % 2 == 0));
    for (double r : rep.residuals) CHECK(r <= 1e-12);
  }
}

TEST_CASE("spectral premises for half-integer spins") {
  const SpectrumReport half = theorem3_spectral_premises(HalfInt(1));
  CHECK(half.passed);
  CHECK(half.spectra[2] == std::vector<double>{0.5, -0.5});

  const SpectrumReport r32 = theorem3_spectral_premises(HalfInt(3));
  CHECK(r32.passed);
  CHECK(r32.all_simple);
  for (int v = 0; v < 3; ++v)
    for (int k = 0; k < 4; ++k) CHECK(std::abs(r32.spectra[v][k] - (1.5 - k)) < 1e-10);

  // the three component spectra coincide as multisets
  for (int v = 1; v < 3; ++v)
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(r32.spectra[v][k] - r32.spectra[0][k]) < 1e-10);

  CHECK_THROWS_AS(theorem3_spectral_premises(HalfInt(2)), std::invalid_argument);
}

TEST_CASE("per-site split has the right counts and orthonormality") {
  for (int n : {2, 3, 4}) {
    const SiteSplit s = site_split(n);
    const int kdim = (n % 2 == 0) ? n * (n + 1) / 2 : n * (n - 1) / 2;
    CHECK(static_cast<int>(s.k_basis.size()) == kdim);
    CHECK(static_cast<int>(s.p_basis.size()) == n * n - kdim);
    // spin components lie in the K span
    const SpinTriple& sp = spin_matrices(HalfInt(n - 1));
    for (const CMatrix* m : {&sp.x, &sp.y, &sp.z}) {
      const CMatrix v = Complex(0, 1) * (*m);
      CHECK(max_abs(v - orthonormal_projection(v, s.k_basis)) < 1e-12);
    }
    // identity direction heads the P basis
    CHECK(max_abs(s.p_basis[0] - Complex(0, 1) / std::sqrt(double(n)) *
                                     CMatrix::Identity(n, n)) < 1e-12);
  }
}

TEST_CASE("odd-even split counts") {
  const CartanSplit s22 = odd_even_split({2, 2});
  CHECK(s22.odd_basis.size() == 6);
  CHECK(s22.even_basis.size() == 10);

  const CartanSplit s23 = odd_even_split({2, 3});
  CHECK(s23.odd_basis.size() == 21);
  CHECK(s23.even_basis.size() == 15);

  // single site: odd part is the K subalgebra, even part its complement
  const CartanSplit s2 = odd_even_split({2});
  CHECK(s2.odd_basis.size() == 3);
  CHECK(s2.even_basis.size() == 1);
}

TEST_CASE("odd-even split classifies embedded operators") {
  const CartanSplit split = odd_even_split({2, 2});
  const std::vector<int> dims{2, 2};
  const CMatrix x1 = embed_single(dims, 1, Axis::X);
  const CMatrix xx = embed(SiteOperatorSpec{{{1, Axis::X}, {2, Axis::X}}, dims});
  // single-site: odd; two-site product: even
  CHECK(max_abs(Complex(0, 1) * x1 -
                orthonormal_projection(Complex(0, 1) * x1, split.odd_basis)) < 1e-12);
  CHECK(max_abs(Complex(0, 1) * xx -
                orthonormal_projection(Complex(0, 1) * xx, split.even_basis)) < 1e-12);
}

TEST_CASE("collective control generator lies in the odd span") {
  const std::vector<int> dims{2, 3};
  const CartanSplit split = odd_even_split(dims);
  const CMatrix bz = Complex(0, -1.3) * embed_single(dims, 1, Axis::Z) +
                     Complex(0, -0.7) * embed_single(dims, 2, Axis::Z);
  CHECK(max_abs(bz - orthonormal_projection(bz, split.odd_basis)) < 1e-12);
}

TEST_CASE("closure relations on small splits") {
  for (const std::vector<int>& dims : {std::vector<int>{2, 2}, std::vector<int>{2, 3}}) {
    const ClosureReport rep = verify_closure(odd_even_split(dims));
    INFO("dims " << dims[0] << "," << dims[1]);
    CHECK(rep.worst() <= 1e-10);
  }
}

TEST_CASE("involution fixes odd elements and negates even ones") {
  const std::vector<int> dims{2, 2};
  const Involution phi = Involution::from_split(odd_even_split(dims));
  const CMatrix x1 = Complex(0, 1) * embed_single(dims, 1, Axis::X);
  CHECK(max_abs(involution_apply(phi, x1) - x1) < 1e-12);

  // isotropic two-site exchange drift is even, so it flips sign
  CMatrix drift = CMatrix::Zero(4, 4);
  for (Axis v : {Axis::X, Axis::Y, Axis::Z})
    drift += Complex(0, -1) * embed(SiteOperatorSpec{{{1, v}, {2, v}}, dims});
  CHECK(max_abs(involution_apply(phi, drift) + drift) < 1e-12);
}

TEST_CASE("involution properties on random pairs") {
  const Involution phi = Involution::from_split(odd_even_split({2, 3}));
  const InvolutionPropertyReport rep = involution_property_check(phi, 50, 99);
  CHECK(rep.involutive <= 1e-10);
  CHECK(rep.homomorphism <= 1e-10);
  CHECK(rep.self_adjoint <= 1e-10);
}

TEST_CASE("involution rejects non-skew input and wrong dimensions") {
  const Involution phi = Involution::from_split(odd_even_split({2, 2}));
  CHECK_THROWS_AS(involution_apply(phi, CMatrix::Identity(4, 4)), std::invalid_argument);
  std::mt19937_64 g(31);
  CHECK_THROWS_AS(involution_apply(phi, random_skew_hermitian(3, g)), std::invalid_argument);
}

TEST_CASE("identity involution acts as the identity map") {
  const Involution id = Involution::identity({2, 2});
  std::mt19937_64 g(32);
  const CMatrix a = random_skew_hermitian(4, g);
  CHECK(max_abs(involution_apply(id, a) - a) < 1e-12);
}

TEST_CASE("odd-even split dimension guard") {
  CHECK_THROWS_AS(odd_even_split({2, 2}, 3), std::invalid_argument);
}
