#include <gtest/gtest.h>

#include <random>

#include "cmtheta/theta.hpp"

using namespace cmtheta;

namespace {

const cplx I(0.0, 1.0);

cplx theta_direct(cplx u, cplx z, double rho, double s, int n_max) {
  cplx sum = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    double m = n + rho;
    sum += std::exp(I * pi * (m * m * z + 2.0 * m * (u + s)));
  }
  return sum;
}

}  // namespace

TEST(ThetaSeries, ValueAtOriginOfSquareModulus) {
  cplx v = theta_series(0.0, I, 0, 0);
  EXPECT_NEAR(std::abs(v - theta_direct(0.0, I, 0, 0, 20)), 0.0, 1e-15);
  EXPECT_NEAR(v.real(), 1.08643481, 1e-8);
  EXPECT_NEAR(v.imag(), 0.0, 1e-16);
}

TEST(ThetaSeries, AgreesWithDirectSum) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    cplx u(d(rng), d(rng)), z(d(rng), 0.3 + std::abs(d(rng)));
    double rho = d(rng), s = d(rng);
    cplx a = theta_series(u, z, rho, s), b = theta_direct(u, z, rho, s, 60);
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b)));
  }
}

TEST(ThetaSeries, ShiftAndEvenness) {
  for (cplx u : {cplx(0.13, 0.2), cplx(-0.4, 0.7), cplx(0.9, -0.3)}) {
    cplx z(0.2, 1.1);
    cplx t = theta_series(u, z, 0, 0);
    EXPECT_NEAR(std::abs(theta_series(u + 1.0, z, 0, 0) - t), 0.0, 1e-14 * std::abs(t));
    EXPECT_NEAR(std::abs(theta_series(-u, z, 0, 0) - t), 0.0, 1e-14 * std::abs(t));
  }
}

TEST(ThetaSeries, DerivativeMatchesFiniteDifference) {
  cplx u(0.21, -0.17), z(-0.3, 0.9);
  double h = 1e-6;
  cplx fd = (theta_series(u + h, z, 0.25, 0.1) - theta_series(u - h, z, 0.25, 0.1)) / (2 * h);
  EXPECT_NEAR(std::abs(theta_series_du(u, z, 0.25, 0.1) - fd), 0.0, 1e-7);
}

TEST(ThetaSeries, DoublingWindowIsSound) {
  cplx u(0.4, 2.5), z(0.1, 0.35);
  ThetaWindow w = theta_window(u, z, 0.2, 1e-14);
  ThetaWindow wide = w;
  wide.half_width = 2 * w.half_width + 1;
  cplx a = theta_series_window(u, z, 0.2, 0.0, w), b = theta_series_window(u, z, 0.2, 0.0, wide);
  EXPECT_LE(std::abs(a - b), 1e-13 * std::abs(b));
}

TEST(ThetaSeries, RejectsNonconvergentModulus) {
  EXPECT_THROW(theta_series(0.0, cplx(0.5, 0.0), 0, 0), NonconvergentModulus);
  EXPECT_THROW(theta_series(0.0, cplx(0.5, -1.0), 0, 0), NonconvergentModulus);
}

TEST(Degree, Examples) {
  EXPECT_EQ(degree_mu(LineBundle(Lattice::default_cm(), 1)), 4);
  EXPECT_EQ(degree_mu(LineBundle(Lattice::gaussian_integers(), 3)), 6);
  EXPECT_EQ(degree_mu(LineBundle(Lattice::gaussian_integers(), 1)), 2);
  EXPECT_THROW(LineBundle(Lattice(cplx(0, 1.25), cplx(1, 0), 1.0), 1), NonIntegralDegree);
  EXPECT_THROW(LineBundle(Lattice::default_cm(), 0), IndexOutOfRange);
}

TEST(BasisSection, IndexRangeAndUnitCoefficients) {
  LineBundle b(Lattice::default_cm(), 1);
  EXPECT_THROW(basis_section(b, 4), IndexOutOfRange);
  EXPECT_THROW(basis_section(b, -1), IndexOutOfRange);
  for (int j = 0; j < 4; ++j) {
    Section f = basis_section(b, j);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(f.coeffs()[k], cplx(k == j ? 1.0 : 0.0));
  }
}

TEST(BasisSection, ExplicitCharacteristicShiftsIndex) {
  LineBundle b(Lattice::default_cm(), 1);
  cplx u(0.3, 0.2);
  EXPECT_NEAR(std::abs(basis_section(b, 1)(u) - basis_section(b, 0, Rational(1, 4), Rational(0))(u)), 0.0, 1e-15);
}

TEST(FactorOfAutomorphy, IdentityAndCocycle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (CurveTag tag : {CurveTag::E, CurveTag::Eprime}) {
    LineBundle b(Lattice::default_cm(), 2, tag);
    const Lattice& lat = b.lattice();
    LatticeElem w1 = lat.element(1, 0), w2 = lat.element(0, 1), w12 = lat.element(1, 1);
    for (int k = 0; k < 20; ++k) {
      cplx u = d(rng) * lat.omega1() + d(rng) * lat.omega2();
      EXPECT_NEAR(std::abs(factor_of_automorphy(b, lat.element(0, 0), u) - 1.0), 0.0, 1e-15);
      cplx lhs = factor_of_automorphy(b, w12, u);
      cplx rhs = factor_of_automorphy(b, w1, u + embed(w2, tag)) * factor_of_automorphy(b, w2, u);
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
    }
  }
  EXPECT_THROW(factor_of_automorphy(LineBundle(Lattice::default_cm(), 1), {0, 0, cplx(0.5, 0)}, 0.0), NotInLattice);
}

// Every canonical basis section obeys f(u + ω) = j(ω, u)·f(u), with and
// without a theta characteristic, on both lattices and both curves.
TEST(BasisSection, QuasiPeriodicity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  struct Case {
    Lattice lat;
    int r;
    Characteristic ch;
  };
  std::vector<Case> cases{{Lattice::default_cm(), 1, {}},
                          {Lattice::default_cm(), 2, {Rational(1, 3), Rational(1, 5)}},
                          {Lattice::gaussian_integers(), 3, {Rational(1, 7), Rational(-2, 3)}}};
  for (const auto& c : cases)
    for (CurveTag tag : {CurveTag::E, CurveTag::Eprime}) {
      LineBundle b(c.lat, c.r, tag, c.ch);
      for (const Section& f : canonical_basis(b))
        for (int k = 0; k < 100; ++k) {
          cplx u = d(rng) * c.lat.omega1() + d(rng) * c.lat.omega2();
          LatticeElem w = c.lat.element(k % 2, (k / 2) % 2 == 0 ? 1 : -1);
          cplx j = factor_of_automorphy(b, w, u);
          double dev = std::abs(f(u + embed(w, tag)) - j * f(u));
          EXPECT_LE(dev, 1e-9 * (1.0 + std::abs(j * f(u))));
        }
    }
}

TEST(Section, LinearCombinationMatchesCoefficients) {
  LineBundle b(Lattice::default_cm(), 1, CurveTag::Eprime, {Rational(1, 3), Rational(1, 5)});
  std::vector<cplx> c{cplx(1, 2), 0.0, cplx(-0.5, 0.1), 3.0};
  Section s = from_coefficients(b, c);
  Section t = c[0] * basis_section(b, 0) + c[2] * basis_section(b, 2) + c[3] * basis_section(b, 3);
  for (cplx u : {cplx(0.1, 0.2), cplx(-0.7, 1.3)}) {
    EXPECT_NEAR(std::abs(s(u) - t(u)), 0.0, 1e-12 * std::abs(t(u)));
    EXPECT_NEAR(std::abs(s.derivative(u) - t.derivative(u)), 0.0, 1e-12 * std::abs(t.derivative(u)));
  }
  EXPECT_THROW(from_coefficients(b, {1.0}), IndexOutOfRange);
  EXPECT_THROW(s + basis_section(LineBundle(Lattice::default_cm(), 2, CurveTag::Eprime), 0), BundleMismatch);
}

TEST(Section, DerivativeIsHolomorphic) {
  Section f = basis_section(LineBundle(Lattice::default_cm(), 2, CurveTag::E, {Rational(1, 8), Rational(1, 2)}), 3);
  cplx u(0.35, 0.8);
  double h = 1e-6;
  cplx dx = (f(u + h) - f(u - h)) / (2 * h);
  cplx dy = (f(u + I * h) - f(u - I * h)) / (2 * h * I);
  EXPECT_LE(std::abs(dx - f.derivative(u)), 1e-6 * std::abs(f.derivative(u)));
  EXPECT_LE(std::abs(dy - f.derivative(u)), 1e-6 * std::abs(f.derivative(u)));
}

TEST(LineBundle, ConjugateIsInvolutive) {
  LineBundle b(Lattice::default_cm(), 2, CurveTag::Eprime, {Rational(1, 3), Rational(1, 5)});
  EXPECT_EQ(b.conjugate().tag(), CurveTag::E);
  EXPECT_TRUE(b.conjugate().conjugate().same_as(b));
  EXPECT_FALSE(b.same_as(LineBundle(Lattice::default_cm(), 2, CurveTag::Eprime)));
  EXPECT_TRUE(b.same_as(LineBundle(Lattice::default_cm(), 2, CurveTag::Eprime, {Rational(1, 3) + Rational(1, 8), Rational(6, 5)})));
}
