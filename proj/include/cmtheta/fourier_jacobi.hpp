#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmtheta/errors.hpp"
#include "cmtheta/eta.hpp"
#include "cmtheta/pairing.hpp"
#include "cmtheta/theta.hpp"

namespace cmtheta {

/// X-side forms f(x, y) have the cusp variable first and theta coefficients
/// g_r on E; Y-side forms f'(v, w) have the angle variable first and
/// coefficients g'_r on E'.
enum class FJSide { X, Y };

inline const char* to_string(FJSide s) { return s == FJSide::X ? "X" : "Y"; }
inline CurveTag coefficient_tag(FJSide s) { return s == FJSide::X ? CurveTag::E : CurveTag::Eprime; }

/// Finite Fourier–Jacobi series Σ_{r ≥ 1} g_r(angle)·exp(−2πr·cusp/b).
struct FJSeries {
  FJSide side = FJSide::Y;
  Lattice lattice = Lattice::default_cm();
  std::map<int, Section> terms;

  int r_max() const { return terms.empty() ? 0 : terms.rbegin()->first; }

  /// Adds g_r; r must be ≥ 1 and g_r must live on the level-r bundle of the
  /// side's curve.
  void set_term(int r, Section g) {
    if (r < 1) throw UnsupportedIndex("cusp forms have no terms at r = " + std::to_string(r));
    if (g.level() != r || g.tag() != coefficient_tag(side))
      throw BundleMismatch("term r = " + std::to_string(r) + " has the wrong level or curve");
    terms.insert_or_assign(r, std::move(g));
  }
};

using BlackBox = std::function<cplx(cplx, cplx)>;

/// Series value at (first, second) in the side's argument order.
inline cplx evaluate(const FJSeries& series, cplx first, cplx second) {
  cplx angle = series.side == FJSide::Y ? first : second;
  cplx cusp = series.side == FJSide::Y ? second : first;
  double b = series.lattice.b();
  cplx sum = 0.0;
  for (const auto& [r, g] : series.terms) sum += g(angle) * std::exp(-2.0 * pi * r * cusp / b);
  return sum;
}

inline BlackBox as_black_box(FJSeries series) {
  return [s = std::move(series)](cplx a, cplx c) { return evaluate(s, a, c); };
}

struct ExtractOptions {
  int samples = 256;
  /// Real part of the cusp variable along the contour. Unset means
  /// |anglepoint|²/2, the height at which every term exp(−2πr·cusp/b)·g_r has
  /// size comparable to the metric norm of g_r; other heights lose
  /// exp(π·r·|Δheight|)-fold relative accuracy on the smaller terms.
  std::optional<double> base_re;
  bool check_periodicity = true;
};

namespace detail {

/// Coefficient of exp(−2πr·c/b) in a function of c that is periodic under
/// c ↦ c + i·b, by the trapezoid rule on Re c = base_re.
inline cplx fourier_mode(const std::function<cplx(cplx)>& fn, int r, double b, double base_re,
                         const ExtractOptions& opt) {
  if (opt.samples < 1) throw std::invalid_argument("extraction needs at least one sample");
  if (opt.check_periodicity) {
    double scale = 0.0, dev = 0.0;
    for (double t : {0.0, 0.37, 0.71}) {
      cplx c(base_re, t * b);
      cplx f0 = fn(c), f1 = fn(c + cplx(0.0, b));
      scale = std::max({scale, std::abs(f0), std::abs(f1)});
      dev = std::max(dev, std::abs(f1 - f0));
    }
    if (dev > 1e-8 * std::max(1.0, scale))
      throw NonPeriodicInput("input is not periodic under the cusp period (deviation " + std::to_string(dev) + ")");
  }
  cplx sum = 0.0;
  for (int k = 0; k < opt.samples; ++k) {
    cplx c(base_re, b * k / opt.samples);
    sum += fn(c) * std::exp(2.0 * pi * r * c / b);
  }
  return sum / static_cast<double>(opt.samples);
}

}  // namespace detail

/// r-th theta coefficient at `anglepoint` of a series given only as a black
/// box in the argument order of `side`.
inline cplx extract_fj(const BlackBox& f, FJSide side, double b, int r, cplx anglepoint,
                       const ExtractOptions& opt = {}) {
  std::function<cplx(cplx)> fiber = side == FJSide::Y ? std::function<cplx(cplx)>([&](cplx c) { return f(anglepoint, c); })
                                                      : std::function<cplx(cplx)>([&](cplx c) { return f(c, anglepoint); });
  return detail::fourier_mode(fiber, r, b, opt.base_re.value_or(0.5 * std::norm(anglepoint)), opt);
}

inline cplx extract_fj(const FJSeries& series, int r, cplx anglepoint, const ExtractOptions& opt = {}) {
  return extract_fj(as_black_box(series), series.side, series.lattice.b(), r, anglepoint, opt);
}

/// Sample count for mode extraction inside the cocycle pipeline: the
/// smallest power of two above 2·r_max + 1, at least 16.
inline int cocycle_samples(int r_max) {
  int m = 16;
  while (m < 2 * r_max + 2) m *= 2;
  return m;
}

namespace detail {

/// Relative-form coefficient of the boundary transform of a series, as a
/// function of (point on the target curve, point on the coefficient curve).
/// Y-side: the black box is read at (v, −x − v·y) and the θ^r mode in x is
/// g'_r(v)·exp(2πλ·v·y). X-side: read at (−w − y·v, y), giving g_r(y)·exp(2πλ·y·v).
/// The contour keeps the real part of the cusp variable at |source|²/2, where
/// every term of the series has modulus O(1); elsewhere low-r terms swamp the
/// extracted mode by a factor growing like exp(π|source|²).
inline std::function<cplx(cplx, cplx)> boundary_kernel(const BlackBox& f, FJSide side, double b, int r,
                                                       ExtractOptions opt) {
  return [f, side, b, r, opt](cplx target, cplx source) {
    double base = -(source * target).real() - 0.5 * std::norm(source);
    std::function<cplx(cplx)> fiber;
    if (side == FJSide::Y)
      fiber = [&](cplx x) { return f(source, -x - source * target); };
    else
      fiber = [&](cplx w) { return f(-w - source * target, source); };
    return fourier_mode(fiber, -r, b, base, opt);
  };
}

}  // namespace detail

/// Class of the r-th boundary coefficient of the transform of the series,
/// computed from the series as a black box: the θ^r mode is extracted
/// numerically, read as a relative one-form, pulled back along
/// z ↦ (z, −z̄) and paired against the canonical basis of the dual bundle.
/// By construction the answer is the class of +η_D(g_r) (resp. η'_D(g'_r)); the
/// coefficient of the transform itself carries the opposite sign.
inline CohomologyClass boundary_cocycle(const FJSeries& series, int r, int n = 64) {
  auto it = series.terms.find(r);
  if (it == series.terms.end()) throw UnsupportedIndex("r = " + std::to_string(r) + " is not in the series support");
  ExtractOptions opt;
  opt.samples = cocycle_samples(series.r_max());
  opt.check_periodicity = false;
  auto kernel = detail::boundary_kernel(as_black_box(series), series.side, series.lattice.b(), r, opt);
  DolbeaultForm form{it->second.bundle().conjugate(), pullback_01(kernel, antiholomorphic_reflection())};
  return make_class(std::move(form), n);
}

/// The η-image class of g_r, the target of boundary_cocycle.
inline CohomologyClass eta_image_class(const FJSeries& series, int r, int n = 64) {
  auto it = series.terms.find(r);
  if (it == series.terms.end()) throw UnsupportedIndex("r = " + std::to_string(r) + " is not in the series support");
  return make_class(series.side == FJSide::Y ? eta_prime_dolbeault(it->second) : eta_dolbeault(it->second), n);
}

namespace detail {
/// Characteristic shared by the terms of a series (the default one when the
/// series is empty).
inline Characteristic series_characteristic(const FJSeries& series) {
  return series.terms.empty() ? Characteristic{} : series.terms.begin()->second.bundle().characteristic();
}

/// Pairings of the boundary form built from the exp(−2π·mode·cusp/b)
/// coefficient, taken on the level-r bundle without the periodicity guard.
inline std::vector<cplx> mode_pairings(const FJSeries& series, int r, int mode, int n) {
  LineBundle bundle(series.lattice, r, coefficient_tag(series.side), series_characteristic(series));
  ExtractOptions opt;
  opt.samples = cocycle_samples(std::max(series.r_max(), r));
  opt.check_periodicity = false;
  auto kernel = boundary_kernel(as_black_box(series), series.side, series.lattice.b(), mode, opt);
  DolbeaultForm form{bundle.conjugate(), pullback_01(kernel, antiholomorphic_reflection())};
  return pairing_vector(form, canonical_basis(form.dual), n, false);
}
}  // namespace detail

/// Pairing vector of the boundary class carried by the opposite-type
/// coefficient h_r, the coefficient of exp(+2πr·cusp/b) in the series. h_r
/// transforms like a level-r section of the same curve, so its class is the
/// η-image built from −h_r(−z̄)·exp(−2πλ|z|²); the coefficient is read where
/// Re(cusp) = |angle|²/2. For cusp forms h_r = 0 and the vector vanishes.
inline std::vector<cplx> opposite_type_pairings(const BlackBox& f, FJSide side, const Lattice& lattice, int r,
                                                int samples, int n = 64, Characteristic ch = {}) {
  LineBundle bundle(lattice, r, coefficient_tag(side), ch);
  ExtractOptions opt;
  opt.samples = samples;
  opt.check_periodicity = false;
  double b = lattice.b();
  double k = bundle.two_pi_lambda();
  auto coeff = [f, side, b, r, k, opt](cplx z) {
    cplx angle = -std::conj(z);
    cplx h = extract_fj(f, side, b, -r, angle, opt);
    return -h * std::exp(-k * std::norm(z));
  };
  DolbeaultForm form{bundle.conjugate(), coeff};
  return pairing_vector(form, canonical_basis(form.dual), n, false);
}

inline std::vector<cplx> opposite_type_pairings(const FJSeries& series, int r, int n = 64) {
  return opposite_type_pairings(as_black_box(series), series.side, series.lattice, r,
                                cocycle_samples(std::max(series.r_max(), r)), n, detail::series_characteristic(series));
}

struct Theorem2Entry {
  int r = 0;
  bool pass = false;
  double max_pairing_deviation = 0;
  std::vector<cplx> cocycle_pairings;
  std::vector<cplx> eta_pairings;
};

struct VanishingEntry {
  int r = 0;
  bool pass = false;
  double max_abs = 0;
};

struct Theorem2Report {
  FJSide side = FJSide::Y;
  double tol = 0;
  std::vector<Theorem2Entry> levels;
  /// extract_fj at r ≤ 0 (cusp condition).
  std::vector<VanishingEntry> nonpositive;
  /// Opposite-type boundary components.
  std::vector<VanishingEntry> opposite_type;
  bool pass = true;
};

/// For r = 1..r_max: boundary class of the series against the η-image of
/// its r-th coefficient; plus vanishing at r ≤ 0 and of the opposite-type
/// components. `vanish_tol` bounds both vanishing checks.
inline Theorem2Report theorem2_verify(const FJSeries& series, int r_max, double tol, int n = 64,
                                      double vanish_tol = 1e-9) {
  Theorem2Report rep;
  rep.side = series.side;
  rep.tol = tol;
  for (int r = 1; r <= r_max; ++r) {
    Theorem2Entry e;
    e.r = r;
    if (series.terms.count(r)) {
      CohomologyClass lhs = boundary_cocycle(series, r, n);
      CohomologyClass rhs = eta_image_class(series, r, n);
      e.max_pairing_deviation = pairing_deviation(lhs, rhs);
      e.pass = class_equal(rhs, lhs, tol);
      e.cocycle_pairings = lhs.pairings;
      e.eta_pairings = rhs.pairings;
    } else {
      // No term: the boundary class must vanish.
      e.cocycle_pairings = detail::mode_pairings(series, r, r, n);
      e.eta_pairings.assign(e.cocycle_pairings.size(), 0.0);
      for (cplx p : e.cocycle_pairings) e.max_pairing_deviation = std::max(e.max_pairing_deviation, std::abs(p));
      e.pass = e.max_pairing_deviation <= tol;
    }
    rep.pass = rep.pass && e.pass;
    rep.levels.push_back(std::move(e));
  }

  std::vector<cplx> probes;
  for (double a : {0.1, 0.55, 0.9})
    for (double c : {0.05, 0.45, 0.95}) probes.push_back(a * series.lattice.omega1() + c * series.lattice.omega2());
  for (int r = 0; r >= -2; --r) {
    VanishingEntry v;
    v.r = r;
    for (cplx a : probes) v.max_abs = std::max(v.max_abs, std::abs(extract_fj(series, r, a)));
    v.pass = v.max_abs <= 1e-10;
    rep.pass = rep.pass && v.pass;
    rep.nonpositive.push_back(v);
  }

  for (int r = 1; r <= r_max; ++r) {
    VanishingEntry v;
    v.r = r;
    for (cplx p : opposite_type_pairings(series, r, n)) v.max_abs = std::max(v.max_abs, std::abs(p));
    v.pass = v.max_abs <= vanish_tol;
    rep.pass = rep.pass && v.pass;
    rep.opposite_type.push_back(v);
  }
  return rep;
}

}  // namespace cmtheta
