#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cmtheta/boundary.hpp"
#include "cmtheta/fourier_jacobi.hpp"
#include "cmtheta/theta.hpp"

namespace cmtheta {

using Rng = std::mt19937_64;

/// Standard complex Gaussian entry.
inline cplx random_cplx(Rng& rng) {
  std::normal_distribution<double> nd;
  return {nd(rng), nd(rng)};
}

/// Point in the fundamental parallelogram.
inline cplx random_point(const Lattice& lat, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) * lat.omega1() + u(rng) * lat.omega2();
}

inline LatticeElem random_lattice_elem(const Lattice& lat, Rng& rng, int radius = 2) {
  std::uniform_int_distribution<int> d(-radius, radius);
  LatticeElem e;
  do e = lat.element(d(rng), d(rng));
  while (e.a == 0 && e.b == 0);
  return e;
}

/// Combination of up to `max_terms` canonical basis sections with Gaussian
/// coefficients.
inline Section random_combination(const LineBundle& bundle, Rng& rng, int max_terms = 3) {
  std::vector<cplx> c(static_cast<std::size_t>(bundle.mu()), 0.0);
  std::uniform_int_distribution<std::int64_t> idx(0, bundle.mu() - 1);
  std::uniform_int_distribution<int> count(1, max_terms);
  for (int k = count(rng); k > 0; --k) c[static_cast<std::size_t>(idx(rng))] += random_cplx(rng);
  return from_coefficients(bundle, std::move(c));
}

/// Series with a random combination at every level 1..r_max.
inline FJSeries random_series(FJSide side, const Lattice& lat, int r_max, Rng& rng, int max_terms = 3,
                              Characteristic ch = {}) {
  FJSeries s;
  s.side = side;
  s.lattice = lat;
  for (int r = 1; r <= r_max; ++r)
    s.set_term(r, random_combination(LineBundle(lat, r, coefficient_tag(side), ch), rng, max_terms));
  return s;
}

inline GaussianRational random_gaussian_rational(Rng& rng, int range = 6, int max_den = 4) {
  std::uniform_int_distribution<int> num(-range, range), den(1, max_den);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

/// (α, β) with β = |α|²/2 + i·k/q.
inline HeisenbergElement random_heisenberg(Rng& rng) {
  GaussianRational a = random_gaussian_rational(rng);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  return HeisenbergElement::make(a, {a.norm() / Rational(2), Rational(num(rng), den(rng))});
}

/// Commuting (α1ᾱ2 real), non-proportional Lie-algebra nilpotents with α1 ≠ 0.
inline std::pair<NilpotentElement, NilpotentElement> random_commuting_pair(Rng& rng) {
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  for (;;) {
    GaussianRational a1 = random_gaussian_rational(rng);
    if (a1.is_zero()) continue;
    Rational c(num(rng), den(rng));
    NilpotentElement n1{a1, {Rational(0), Rational(num(rng), den(rng))}};
    NilpotentElement n2{a1 * GaussianRational(c), {Rational(0), Rational(num(rng), den(rng))}};
    if (!real_proportional(n1, n2)) return {n1, n2};
  }
}

}  // namespace cmtheta
