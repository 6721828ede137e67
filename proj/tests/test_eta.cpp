#include <gtest/gtest.h>

#include "cmtheta/eta.hpp"
#include "cmtheta/random.hpp"

using namespace cmtheta;

namespace {

const Lattice lat = Lattice::default_cm();

const std::vector<Characteristic> characteristics{{}, {Rational(1, 3), Rational(1, 5)}};

}  // namespace

TEST(CheckMap, ZeroAntilinearityAndInvolution) {
  Rng rng(21);
  LineBundle b(lat, 2, CurveTag::Eprime, characteristics[1]);
  Section phi = random_combination(b, rng);
  cplx c(0.7, -1.3), z(0.2, 0.45);
  EXPECT_EQ(check_map(Section::zero(b))(z), cplx(0.0));
  EXPECT_NEAR(std::abs(check_map(c * phi)(z) - std::conj(c) * check_map(phi)(z)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(check_map(check_map(phi))(z) - phi(z)), 0.0, 1e-13);
  EXPECT_EQ(check_map(phi).tag(), CurveTag::E);
}

// The check image obeys the quasi-periodicity law of the conjugate bundle.
TEST(CheckMap, LandsInConjugateBundle) {
  Rng rng(22);
  for (const auto& ch : characteristics)
    for (CurveTag tag : {CurveTag::Eprime, CurveTag::E}) {
      LineBundle b(lat, 1, tag, ch);
      Section img = check_map(random_combination(b, rng));
      const LineBundle& t = img.bundle();
      for (int k = 0; k < 30; ++k) {
        cplx u = random_point(lat, rng);
        LatticeElem w = random_lattice_elem(lat, rng, 1);
        cplx j = factor_of_automorphy(t, w, u);
        EXPECT_LE(std::abs(img(u + embed(w, t.tag())) - j * img(u)), 1e-9 * (1.0 + std::abs(j * img(u))));
      }
    }
}

TEST(EtaPrime, ZeroAndTagChecks) {
  LineBundle bp(lat, 1, CurveTag::Eprime), be(lat, 1, CurveTag::E);
  EXPECT_EQ(eta_prime_dolbeault(Section::zero(bp))(0.3), cplx(0.0));
  EXPECT_EQ(eta_dolbeault(Section::zero(be))(0.3), cplx(0.0));
  EXPECT_THROW(eta_prime_dolbeault(Section::zero(be)), BundleMismatch);
  EXPECT_THROW(eta_dolbeault(Section::zero(bp)), BundleMismatch);
  EXPECT_EQ(eta_prime_dolbeault(Section::zero(bp)).level(), -1);
  EXPECT_EQ(eta_prime_dolbeault(Section::zero(bp)).tag(), CurveTag::E);
}

TEST(EtaPrime, FormIsWellFormed) {
  Rng rng(23);
  for (const auto& ch : characteristics) {
    LineBundle b(lat, 2, CurveTag::Eprime, ch);
    DolbeaultForm f = eta_prime_dolbeault(random_combination(b, rng));
    for (const Section& s : canonical_basis(f.dual)) EXPECT_NO_THROW(check_periodic_product(f, s));
  }
}

// ⟨φ1, φ2⟩ = (η_D(φ1), check φ2) on the basis, on both curves.
TEST(Duality, BasisPairsBothCurves) {
  for (const auto& ch : characteristics)
    for (CurveTag tag : {CurveTag::Eprime, CurveTag::E})
      for (int r = 1; r <= 2; ++r) {
        LineBundle b(lat, r, tag, ch);
        std::vector<Section> basis = canonical_basis(b);
        Eigen::MatrixXcd g = gram_matrix(basis);
        std::vector<Section> checked;
        for (const auto& s : basis) checked.push_back(check_map(s));
        for (std::size_t j = 0; j < basis.size(); ++j) {
          DolbeaultForm f = tag == CurveTag::Eprime ? eta_prime_dolbeault(basis[j]) : eta_dolbeault(basis[j]);
          std::vector<cplx> row = pairing_vector(f, checked);
          for (std::size_t k = 0; k < basis.size(); ++k)
            EXPECT_NEAR(std::abs(row[k] - g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))), 0.0, 1e-8);
        }
      }
}

TEST(Eta, Linearity) {
  Rng rng(24);
  LineBundle b(lat, 1, CurveTag::E);
  Section p1 = random_combination(b, rng), p2 = random_combination(b, rng);
  cplx a(1.5, 0.2), c(-0.4, 0.9), z(0.3, 0.6);
  cplx lhs = eta_dolbeault(a * p1 + c * p2)(z);
  cplx rhs = a * eta_dolbeault(p1)(z) + c * eta_dolbeault(p2)(z);
  EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13 * (1.0 + std::abs(rhs)));
}

// h(z + ᾱ, z' − α) = h(z, z')·χ(−α)·exp(−2πλ(αz + |α|²/2)).
TEST(RelativeKernel, QuasiPeriodicity) {
  Rng rng(25);
  for (const auto& ch : characteristics) {
    LineBundle b(lat, 2, CurveTag::Eprime, ch);
    Section phi = random_combination(b, rng);
    EXPECT_EQ(eta_relative_kernel(Section::zero(b), 0.2, 0.4), cplx(0.0));
    for (int k = 0; k < 20; ++k) {
      cplx z = random_point(lat, rng), zp = random_point(lat, rng);
      LatticeElem a = random_lattice_elem(lat, rng, 1);
      cplx h0 = eta_relative_kernel(phi, z, zp);
      cplx h1 = eta_relative_kernel(phi, z + std::conj(a.value), zp - a.value);
      cplx factor = b.chi(lat.element(-a.a, -a.b)) *
                    std::exp(-b.two_pi_lambda() * (a.value * z + 0.5 * std::norm(a.value)));
      EXPECT_LE(std::abs(h1 - h0 * factor), 1e-9 * std::abs(h0 * factor));
    }
  }
}

TEST(InvariantKernel, DiagonalLatticeInvariance) {
  Rng rng(26);
  for (const auto& ch : characteristics) {
    LineBundle bp(lat, 1, CurveTag::Eprime, ch);
    Section fp = random_combination(bp, rng), f = random_combination(bp.conjugate(), rng);
    EXPECT_EQ(invariant_kernel(Section::zero(bp.conjugate()), fp, 0.1, 0.2), cplx(0.0));
    for (int k = 0; k < 10; ++k) {
      cplx z = random_point(lat, rng), zp = random_point(lat, rng);
      LatticeElem a = random_lattice_elem(lat, rng, 2);
      cplx g0 = invariant_kernel(f, fp, z, zp);
      EXPECT_LE(std::abs(invariant_kernel(f, fp, z + std::conj(a.value), zp - a.value) - g0), 1e-9 * std::abs(g0));
    }
  }
}

TEST(Pullback, MatchesDirectForm) {
  Rng rng(27);
  Section fp = random_combination(LineBundle(lat, 3, CurveTag::Eprime), rng);
  DolbeaultForm a = eta_prime_dolbeault(fp), b = eta_prime_via_pullback(fp);
  for (int k = 0; k < 50; ++k) {
    cplx z = random_point(lat, rng);
    EXPECT_LE(std::abs(a(z) - b(z)), 1e-12);
  }
}

TEST(ClassEqual, Examples) {
  Rng rng(28);
  LineBundle bp(lat, 1, CurveTag::Eprime);
  CohomologyClass a = make_class(eta_prime_dolbeault(basis_section(bp, 0)));
  EXPECT_TRUE(class_equal(a, a, 1e-9));
  PeriodicBump p{{{1, -1, cplx(0.8, 0.1)}, {0, 2, cplx(-0.2, 0.5)}}};
  DolbeaultForm shifted = a.representative + dbar_exact(random_combination(a.representative.dual, rng), p);
  EXPECT_TRUE(class_equal(a, make_class(shifted), 1e-9));
  EXPECT_FALSE(class_equal(a, make_class(eta_prime_dolbeault(basis_section(bp, 1))), 1e-9));
  LineBundle bp2(lat, 2, CurveTag::Eprime);
  EXPECT_THROW(pairing_deviation(a, make_class(eta_prime_dolbeault(basis_section(bp2, 0)))), BundleMismatch);
}

TEST(TransformMatrix, NonsingularOnBothCurves) {
  for (CurveTag tag : {CurveTag::Eprime, CurveTag::E})
    for (const auto& ch : characteristics) {
      TransformMatrix t = transform_matrix(LineBundle(lat, 2, tag, ch));
      EXPECT_EQ(t.m.rows(), 8);
      EXPECT_LT(t.condition_number, 1e6);
    }
}
