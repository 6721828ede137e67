#include <gtest/gtest.h>

#include "cmtheta/fourier_jacobi.hpp"
#include "cmtheta/random.hpp"

using namespace cmtheta;

namespace {

const Lattice lat = Lattice::default_cm();
const cplx I(0.0, 1.0);

FJSeries single_term(FJSide side, int r, std::int64_t j, Characteristic ch = {}) {
  FJSeries s;
  s.side = side;
  s.lattice = lat;
  s.set_term(r, basis_section(LineBundle(lat, r, coefficient_tag(side), ch), j));
  return s;
}

}  // namespace

TEST(FJSeries, EmptySeriesIsZero) {
  FJSeries s;
  EXPECT_EQ(evaluate(s, 0.3, 0.7), cplx(0.0));
  EXPECT_EQ(s.r_max(), 0);
}

TEST(FJSeries, SingleTermValue) {
  FJSeries s = single_term(FJSide::Y, 1, 2);
  Section g = s.terms.at(1);
  cplx v(0.2, 0.4), w(0.5, 0.3);
  EXPECT_NEAR(std::abs(evaluate(s, v, w) - g(v) * std::exp(-2.0 * pi * w / lat.b())), 0.0, 1e-14);
  FJSeries x = single_term(FJSide::X, 1, 2);
  // X side takes the cusp variable first.
  EXPECT_NEAR(std::abs(evaluate(x, w, v) - x.terms.at(1)(v) * std::exp(-2.0 * pi * w / lat.b())), 0.0, 1e-14);
}

TEST(FJSeries, SetTermValidation) {
  FJSeries s;
  LineBundle b(lat, 1, CurveTag::Eprime);
  EXPECT_THROW(s.set_term(0, basis_section(b, 0)), UnsupportedIndex);
  EXPECT_THROW(s.set_term(2, basis_section(b, 0)), BundleMismatch);
  EXPECT_THROW(s.set_term(1, basis_section(LineBundle(lat, 1, CurveTag::E), 0)), BundleMismatch);
}

// f'(v − α, w − ᾱv + β̄) = f'(v, w) for (α, β) with β = |α|²/2 + i·b·k.
TEST(FJSeries, HeisenbergInvariance) {
  Rng rng(31);
  FJSeries s = random_series(FJSide::Y, lat, 3, rng, 4);
  for (int k = 0; k < 30; ++k) {
    LatticeElem a = random_lattice_elem(lat, rng, 2);
    cplx beta = 0.5 * std::norm(a.value) + I * lat.b() * static_cast<double>(k % 3 - 1);
    cplx v = random_point(lat, rng);
    cplx w = 0.5 * std::norm(v) + I * (k * 0.13);
    cplx f0 = evaluate(s, v, w), f1 = evaluate(s, v - a.value, w - std::conj(a.value) * v + std::conj(beta));
    EXPECT_LE(std::abs(f1 - f0), 1e-9 * (1.0 + std::abs(f0)));
  }
}

TEST(Extract, RoundTripInBundleMetric) {
  Rng rng(32);
  for (FJSide side : {FJSide::Y, FJSide::X})
    for (const Characteristic& ch : {Characteristic{}, Characteristic{Rational(1, 3), Rational(1, 5)}}) {
      FJSeries s = random_series(side, lat, 3, rng, 3, ch);
      for (int k = 0; k < 10; ++k) {
        cplx a = random_point(lat, rng);
        for (int r = 1; r <= 3; ++r) {
          const Section& g = s.terms.at(r);
          EXPECT_LE(std::abs(extract_fj(s, r, a) - g(a)) * pointwise_metric_factor(g.bundle(), a), 1e-8);
        }
        EXPECT_LE(std::abs(extract_fj(s, 0, a)), 1e-10);
        EXPECT_LE(std::abs(extract_fj(s, 4, a)) * std::exp(-pi * 4 / lat.b() * std::norm(a)), 1e-10);
      }
    }
}

TEST(Extract, AbsoluteErrorNearOrigin) {
  Rng rng(33);
  FJSeries s = random_series(FJSide::Y, lat, 3, rng, 3);
  for (cplx a : {cplx(0.0), cplx(0.1, 0.2), cplx(-0.3, 0.25)}) {
    for (int r = 1; r <= 3; ++r) EXPECT_NEAR(std::abs(extract_fj(s, r, a) - s.terms.at(r)(a)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(extract_fj(s, 4, a)), 0.0, 1e-10);
  }
}

TEST(Extract, ExplicitContourHeight) {
  FJSeries s = single_term(FJSide::Y, 1, 0);
  ExtractOptions opt;
  opt.base_re = 0.0;
  cplx a(0.2, 0.1);
  EXPECT_NEAR(std::abs(extract_fj(s, 1, a, opt) - s.terms.at(1)(a)), 0.0, 1e-10);
}

TEST(Extract, RejectsNonPeriodicInput) {
  BlackBox f = [](cplx, cplx w) { return std::exp(w); };
  EXPECT_THROW(extract_fj(f, FJSide::Y, 1.0, 1, 0.0), NonPeriodicInput);
  ExtractOptions opt;
  opt.check_periodicity = false;
  EXPECT_NO_THROW(extract_fj(f, FJSide::Y, 1.0, 1, 0.0, opt));
}

TEST(CocycleSamples, PowerOfTwoAboveBandwidth) {
  EXPECT_EQ(cocycle_samples(1), 16);
  EXPECT_EQ(cocycle_samples(7), 16);
  EXPECT_EQ(cocycle_samples(8), 32);
  EXPECT_EQ(cocycle_samples(20), 64);
}

TEST(BoundaryCocycle, SingleTermPairsNontrivially) {
  FJSeries s = single_term(FJSide::Y, 1, 1);
  CohomologyClass c = boundary_cocycle(s, 1);
  double largest = 0;
  for (cplx p : c.pairings) largest = std::max(largest, std::abs(p));
  EXPECT_GT(largest, 0.1);
  EXPECT_TRUE(class_equal(c, eta_image_class(s, 1), 1e-8));
}

TEST(BoundaryCocycle, UnsupportedIndex) {
  FJSeries s = single_term(FJSide::Y, 1, 0);
  EXPECT_THROW(boundary_cocycle(s, 2), UnsupportedIndex);
  EXPECT_THROW(eta_image_class(s, 0), UnsupportedIndex);
}

TEST(BoundaryCocycle, DistinguishesDifferentCoefficients) {
  FJSeries s = single_term(FJSide::Y, 1, 0), t = single_term(FJSide::Y, 1, 1);
  EXPECT_FALSE(class_equal(boundary_cocycle(s, 1), eta_image_class(t, 1), 1e-7));
}

TEST(Theorem2, SingleTermBothSides) {
  for (FJSide side : {FJSide::Y, FJSide::X}) {
    Theorem2Report rep = theorem2_verify(single_term(side, 1, 3), 1, 1e-7);
    EXPECT_TRUE(rep.pass) << to_string(side);
    ASSERT_EQ(rep.levels.size(), 1u);
    EXPECT_LE(rep.levels[0].max_pairing_deviation, 1e-9);
    for (const auto& v : rep.opposite_type) EXPECT_LE(v.max_abs, 1e-9);
    for (const auto& v : rep.nonpositive) EXPECT_LE(v.max_abs, 1e-10);
  }
}

TEST(Theorem2, GapInSupportAndCharacteristic) {
  Characteristic ch{Rational(1, 3), Rational(1, 5)};
  FJSeries s;
  s.side = FJSide::Y;
  s.lattice = lat;
  s.set_term(1, basis_section(LineBundle(lat, 1, CurveTag::Eprime, ch), 2));
  s.set_term(3, basis_section(LineBundle(lat, 3, CurveTag::Eprime, ch), 7));
  Theorem2Report rep = theorem2_verify(s, 3, 1e-7);
  EXPECT_TRUE(rep.pass);
  ASSERT_EQ(rep.levels.size(), 3u);
  EXPECT_LE(rep.levels[1].max_pairing_deviation, 1e-9);  // missing level 2: class vanishes
}

// An exp(+2πr·cusp/b) component is not of the expected type; the check must
// see it.
TEST(Theorem2, OppositeTypeComponentIsDetected) {
  Rng rng(34);
  FJSeries s = random_series(FJSide::Y, lat, 2, rng, 2);
  Section h = random_combination(LineBundle(lat, 1, CurveTag::Eprime), rng);
  BlackBox clean = as_black_box(s);
  BlackBox dirty = [clean, h](cplx v, cplx w) { return clean(v, w) + h(v) * std::exp(2.0 * pi * w / lat.b()); };
  int samples = cocycle_samples(2);
  for (cplx p : opposite_type_pairings(clean, FJSide::Y, lat, 1, samples)) EXPECT_LE(std::abs(p), 1e-9);
  std::vector<cplx> got = opposite_type_pairings(dirty, FJSide::Y, lat, 1, samples);
  CohomologyClass expected = make_class(eta_prime_dolbeault(h));
  double largest = 0;
  for (std::size_t k = 0; k < got.size(); ++k) {
    EXPECT_NEAR(std::abs(got[k] - expected.pairings[k]), 0.0, 1e-8);
    largest = std::max(largest, std::abs(got[k]));
  }
  EXPECT_GT(largest, 1e-3);
}

TEST(Theorem2, RandomSeriesBothSides) {
  Rng rng(35);
  for (FJSide side : {FJSide::Y, FJSide::X}) {
    Theorem2Report rep = theorem2_verify(random_series(side, lat, 2, rng, 3), 2, 1e-7);
    EXPECT_TRUE(rep.pass) << to_string(side);
  }
}
